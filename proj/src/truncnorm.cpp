#include "selci/truncnorm.hpp"

#include "selci/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace selci {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAsymptoticFrom = 35.0;
}  // namespace

double log_normal_sf(double z) {
  if (z == kInf) return -kInf;
  if (z == -kInf) return 0.0;
  if (z < kAsymptoticFrom) return std::log(0.5 * std::erfc(z / std::sqrt(2.0)));
  // Q(z) = phi(z)/z (1 - 1/z^2 + 3/z^4 - 15/z^6 + ...)
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
  return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double log_normal_cdf(double z) { return log_normal_sf(-z); }

double truncnorm_cdf(double x, double mu, double sigma, double a, double b) {
  if (!(a < b)) throw InvalidTruncation("truncnorm_cdf: need a < b");
  if (!(sigma > 0.0)) throw InvalidConfig("truncnorm_cdf: sigma must be positive");
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;
  const double za = (a - mu) / sigma;
  const double zb = (b - mu) / sigma;
  const double zx = (x - mu) / sigma;

  double value = 0.0;
  if (za > 0.0) {
    // Upper tail: F = (Q(za) - Q(zx)) / (Q(za) - Q(zb)), scaled by Q(za).
    const double lqa = log_normal_sf(za);
    const double num = -std::expm1(log_normal_sf(zx) - lqa);
    const double den = -std::expm1(log_normal_sf(zb) - lqa);
    value = num / den;
  } else if (zb < 0.0) {
    // Lower tail: F = (Phi(zx) - Phi(za)) / (Phi(zb) - Phi(za)), scaled by Phi(zb).
    const double lpb = log_normal_cdf(zb);
    const double pa = std::exp(log_normal_cdf(za) - lpb);
    const double px = std::exp(log_normal_cdf(zx) - lpb);
    value = (px - pa) / (1.0 - pa);
  } else {
    // The interval contains mu, so the denominator is at least Phi(0)-ish in scale.
    const double pa = std::exp(log_normal_cdf(za));
    const double pb = std::exp(log_normal_cdf(zb));
    const double px = std::exp(log_normal_cdf(zx));
    value = (px - pa) / (pb - pa);
  }
  if (std::isnan(value)) {
    throw NumericInput("truncnorm_cdf: truncation interval has no numerical mass");
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace selci
