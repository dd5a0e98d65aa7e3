#include "selci/dgp.hpp"

#include "selci/error.hpp"
#include "selci/rng.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <string>

namespace selci {

namespace {

constexpr std::array<std::string_view, 5> kSettingNames = {"LAI", "GARCH", "AR", "IID", "MVN"};

// y_t = sum_j beta_j x_tj + eps_t, accumulated left to right.
double linear_response(const Matrix& X, Index t, const Vector& beta, Index first, double eps) {
  double s = 0.0;
  for (Index j = first; j < X.cols(); ++j) s += beta(j) * X(t, j);
  return s + eps;
}

// x_tj = f_t (1 + |a_j|) + e_tj with f_t = 0.9 f_{t-1} + b_t; column `first_col`
// onwards is filled, earlier columns untouched. Returns all burn_in + n rows.
Matrix garch_predictors(Index rows, Index p, Index first_col, Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  Vector loading(p);
  for (Index j = 0; j < p; ++j) loading(j) = 1.0 + std::abs(z(rng));
  Matrix X = Matrix::Zero(rows, p);
  double f = 0.0;
  for (Index t = 0; t < rows; ++t) {
    f = kFactorAr * f + z(rng);
    for (Index j = first_col; j < p; ++j) X(t, j) = f * loading(j) + z(rng);
  }
  return X;
}

Vector garch_errors(Index rows, Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  Vector eps(rows);
  double sigma2 = kGarchStationaryVariance;
  double prev = std::sqrt(sigma2) * z(rng);
  for (Index t = 0; t < rows; ++t) {
    sigma2 = kGarchOmega + kGarchGarch * sigma2 + kGarchArch * prev * prev;
    prev = std::sqrt(sigma2) * z(rng);
    eps(t) = prev;
  }
  return eps;
}

Vector iid_normal(Index rows, double sd, Rng& rng) {
  std::normal_distribution<double> z(0.0, sd);
  Vector v(rows);
  for (Index t = 0; t < rows; ++t) v(t) = z(rng);
  return v;
}

}  // namespace

std::string_view to_string(Setting s) { return kSettingNames[static_cast<std::size_t>(s)]; }

Setting parse_setting(std::string_view name) {
  std::string upper(name);
  for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (std::size_t k = 0; k < kSettingNames.size(); ++k) {
    if (kSettingNames[k] == upper) return static_cast<Setting>(k);
  }
  throw InvalidConfig("unknown setting '" + std::string(name) + "'");
}

CoefVector make_beta(Index p) {
  if (p < 10) throw InvalidConfig("make_beta needs p >= 10, got " + std::to_string(p));
  constexpr std::array<double, 10> kLeading = {0.6, 0.6, 0.4, 0.2, 0.2, 0.2, 0.1, 0.1, 0.1, 0.1};
  CoefVector beta{Vector::Zero(p), {}};
  for (Index j = 0; j < 10; ++j) {
    beta.values(j) = kLeading[static_cast<std::size_t>(j)];
    beta.support.push_back(j);
  }
  return beta;
}

void validate(const DgpConfig& cfg) {
  if (cfg.n < 4) throw InvalidConfig("n must be >= 4");
  if (cfg.p < 1) throw InvalidConfig("p must be >= 1");
  if (cfg.setting == Setting::Ar && cfg.p < 2) throw InvalidConfig("AR setting needs p >= 2");
  if (cfg.burn_in < 0) throw InvalidConfig("burn_in must be nonnegative");
}

void validate(const Dataset& ds) {
  if (ds.X.rows() != ds.Y.size()) throw InvalidConfig("X rows and Y length differ");
  if (ds.X.rows() < 4) throw InvalidConfig("dataset needs n >= 4");
}

double error_sd(Setting s) {
  return s == Setting::Garch ? std::sqrt(kGarchStationaryVariance) : 1.0;
}

Dataset generate(const DgpConfig& cfg, const CoefVector& beta) {
  validate(cfg);
  if (beta.values.size() != cfg.p) throw InvalidConfig("beta length must equal p");
  const Index n = cfg.n;
  const Index p = cfg.p;
  Rng rng(cfg.seed);
  std::normal_distribution<double> z(0.0, 1.0);

  Dataset ds;
  ds.truth = beta;
  ds.setting = cfg.setting;
  ds.seed = cfg.seed;
  ds.X.resize(n, p);
  ds.Y.resize(n);

  switch (cfg.setting) {
    case Setting::Lai: {
      ds.noise.resize(n);
      for (Index t = 0; t < n; ++t) {
        const double f = z(rng);
        for (Index j = 0; j < p; ++j) ds.X(t, j) = f + z(rng);
        ds.noise(t) = z(rng);
      }
      break;
    }
    case Setting::Garch: {
      const Index rows = cfg.burn_in + n;
      const Matrix X = garch_predictors(rows, p, 0, rng);
      const Vector eps = garch_errors(rows, rng);
      ds.X = X.bottomRows(n);
      ds.noise = eps.tail(n);
      break;
    }
    case Setting::Ar: {
      const Index rows = cfg.burn_in + n;
      Matrix X = garch_predictors(rows, p, 1, rng);
      const Vector eps = iid_normal(rows, 1.0, rng);
      double y_prev = 0.0;
      Vector y(rows);
      for (Index t = 0; t < rows; ++t) {
        X(t, 0) = y_prev;
        y(t) = linear_response(X, t, beta.values, 0, eps(t));
        y_prev = y(t);
      }
      ds.X = X.bottomRows(n);
      ds.noise = eps.tail(n);
      ds.Y = y.tail(n);
      return ds;
    }
    case Setting::Iid: {
      std::normal_distribution<double> x_dist(0.0, std::sqrt(2.0));
      for (Index t = 0; t < n; ++t) {
        for (Index j = 0; j < p; ++j) ds.X(t, j) = x_dist(rng);
      }
      ds.noise = iid_normal(n, 1.0, rng);
      break;
    }
    case Setting::Mvn: {
      // Equicorrelated rows: sqrt(0.2) g_t + sqrt(0.8) z_tj has unit variance and
      // pairwise correlation 0.2.
      const double shared = std::sqrt(0.2);
      const double own = std::sqrt(0.8);
      for (Index t = 0; t < n; ++t) {
        const double g = z(rng);
        for (Index j = 0; j < p; ++j) ds.X(t, j) = shared * g + own * z(rng);
      }
      ds.noise = iid_normal(n, 1.0, rng);
      break;
    }
  }

  for (Index t = 0; t < n; ++t) ds.Y(t) = linear_response(ds.X, t, beta.values, 0, ds.noise(t));
  return ds;
}

}  // namespace selci
