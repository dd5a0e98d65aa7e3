#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <vector>

namespace selci {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Ordered list of zero-based column indices. Order is meaningful (selection order).
using IndexList = std::vector<Index>;

[[nodiscard]] Matrix select_columns(const Matrix& X, const IndexList& columns);
[[nodiscard]] Vector select_entries(const Vector& v, const IndexList& entries);

[[nodiscard]] inline bool contains(const IndexList& list, Index value) {
  return std::find(list.begin(), list.end(), value) != list.end();
}

/// Position of `value` in `list`, or -1.
[[nodiscard]] inline Index position_of(const IndexList& list, Index value) {
  const auto it = std::find(list.begin(), list.end(), value);
  return it == list.end() ? Index{-1} : static_cast<Index>(it - list.begin());
}

/// Elements of `a` that are also in `b`, in the order of `a`.
[[nodiscard]] IndexList intersect(const IndexList& a, const IndexList& b);

[[nodiscard]] bool all_finite(const Matrix& M);

}  // namespace selci
