#pragma once

#include "selci/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace selci {

/// Synthetic designs used by the simulation study.
enum class Setting { Lai, Garch, Ar, Iid, Mvn };

[[nodiscard]] std::string_view to_string(Setting s);
/// Accepts the lower- or upper-case tag ("lai", "GARCH", ...). Throws InvalidConfig.
[[nodiscard]] Setting parse_setting(std::string_view name);

struct CoefVector {
  Vector values;
  IndexList support;  // zero-based indices of nonzero entries
};

/// Sparse coefficient vector with ten leading nonzeros:
/// 0.6, 0.6, 0.4, 0.2, 0.2, 0.2, 0.1, 0.1, 0.1, 0.1, then zeros.
[[nodiscard]] CoefVector make_beta(Index p);

struct DgpConfig {
  Setting setting = Setting::Iid;
  Index n = 200;
  Index p = 250;
  std::uint64_t seed = 0;
  Index burn_in = 200;
};

void validate(const DgpConfig& cfg);

struct Dataset {
  Matrix X;
  Vector Y;
  std::optional<CoefVector> truth;
  std::optional<Setting> setting;
  std::uint64_t seed = 0;
  /// Regression errors epsilon_t when known (synthetic data), empty otherwise.
  Vector noise;

  [[nodiscard]] Index n() const { return X.rows(); }
  [[nodiscard]] Index p() const { return X.cols(); }
};

/// Throws InvalidConfig if rows of X and Y disagree or n < 4.
void validate(const Dataset& ds);

/// Draws one dataset. Bit-identical for identical (cfg, beta).
[[nodiscard]] Dataset generate(const DgpConfig& cfg, const CoefVector& beta);

/// Unconditional variance of the GARCH(1,1) errors, omega / (1 - a - b).
inline constexpr double kGarchOmega = 0.1;
inline constexpr double kGarchArch = 0.3;
inline constexpr double kGarchGarch = 0.3;
inline constexpr double kGarchStationaryVariance = kGarchOmega / (1.0 - kGarchArch - kGarchGarch);
inline constexpr double kFactorAr = 0.9;

/// Standard deviation of the regression error in each setting.
[[nodiscard]] double error_sd(Setting s);

}  // namespace selci
