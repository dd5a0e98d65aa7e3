#include "selci/types.hpp"

namespace selci {

Matrix select_columns(const Matrix& X, const IndexList& columns) {
  Matrix out(X.rows(), static_cast<Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    out.col(static_cast<Index>(k)) = X.col(columns[k]);
  }
  return out;
}

Vector select_entries(const Vector& v, const IndexList& entries) {
  Vector out(static_cast<Index>(entries.size()));
  for (std::size_t k = 0; k < entries.size(); ++k) {
    out(static_cast<Index>(k)) = v(entries[k]);
  }
  return out;
}

IndexList intersect(const IndexList& a, const IndexList& b) {
  IndexList out;
  for (const auto x : a) {
    if (contains(b, x)) out.push_back(x);
  }
  return out;
}

bool all_finite(const Matrix& M) { return M.allFinite(); }

}  // namespace selci
