#pragma once

namespace selci {

/// log of the standard normal upper tail Q(z) = 1 - Phi(z), accurate for large z.
[[nodiscard]] double log_normal_sf(double z);
/// log Phi(z), accurate for very negative z.
[[nodiscard]] double log_normal_cdf(double z);

/// CDF at x of N(mu, sigma^2) truncated to [a, b]; a and b may be infinite.
/// Ratios of tail probabilities are formed in log space so intervals far in
/// either tail do not produce 0/0. Returns 0 for x <= a and 1 for x >= b.
/// Throws InvalidTruncation if a >= b and InvalidConfig if sigma <= 0.
[[nodiscard]] double truncnorm_cdf(double x, double mu, double sigma, double a, double b);

}  // namespace selci
