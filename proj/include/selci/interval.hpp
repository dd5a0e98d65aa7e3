#pragma once

#include "selci/statistic.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace selci {

enum class Method { T, Iv, Ps, Hr };

[[nodiscard]] std::string_view to_string(Method m);
/// "t", "iv", "ps", "hr" in any case. Throws InvalidConfig.
[[nodiscard]] Method parse_method(std::string_view name);
[[nodiscard]] std::string_view to_string(Side s);
[[nodiscard]] Side parse_side(std::string_view name);

struct IntervalReport {
  Index j = -1;
  Method method = Method::T;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double alpha = 0.0;
  Side side = Side::One;
  double estimate = std::numeric_limits<double>::quiet_NaN();
  Index resamples_used = 0;  ///< smallest conditioned resample count seen
  Index iterations = 0;
  std::vector<std::string> flags;

  [[nodiscard]] bool failed() const { return std::isnan(lower) || std::isnan(upper); }
};

/// Joins flags with '|'.
[[nodiscard]] std::string join_flags(const std::vector<std::string>& flags);

/// Standard normal and Student-t upper quantiles.
[[nodiscard]] double normal_quantile(double prob);
[[nodiscard]] double student_t_quantile(double prob, double dof);

}  // namespace selci
