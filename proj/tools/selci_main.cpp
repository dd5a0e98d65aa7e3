// Command-line front end: dataset generation, intervals for one dataset, and
// Monte-Carlo experiments.

#include "selci/baselines.hpp"
#include "selci/dataset_io.hpp"
#include "selci/error.hpp"
#include "selci/harness.hpp"
#include "selci/hybrid.hpp"
#include "selci/oga.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace selci;

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parse_method(item));
  }
  if (out.empty()) throw InvalidConfig("no methods given");
  return out;
}

struct DgpArgs {
  std::string setting = "iid";
  Index n = 200;
  Index p = 250;
  std::uint64_t seed = 0;
  Index burn_in = 200;
  std::string out;
};

int run_dgp(const DgpArgs& a) {
  DgpConfig cfg;
  cfg.setting = parse_setting(a.setting);
  cfg.n = a.n;
  cfg.p = a.p;
  cfg.seed = a.seed;
  cfg.burn_in = a.burn_in;
  const Dataset ds = generate(cfg, make_beta(a.p));
  write_dataset_csv(a.out, ds);
  write_sidecar(sidecar_path(a.out), ds, a.burn_in);
  return 0;
}

struct CiArgs {
  std::string in;
  double alpha = 0.2;
  std::string methods = "hr";
  std::string side = "one";
  Index q = 1;
  Index B = 50;
  std::uint64_t seed = 0;
  std::string out;
  double sigma = 0.0;
  Index kmax = kDefaultKMax;
  Index min_conditioned = HybridConfig{}.min_conditioned;
  std::string halves = "steps";
};

HalfSelection parse_half_selection(const std::string& name) {
  if (name == "steps") return HalfSelection::FullSampleSteps;
  if (name == "hdbic") return HalfSelection::Hdbic;
  throw InvalidConfig("--half-selection must be 'steps' or 'hdbic'");
}

int run_ci(const CiArgs& a) {
  Dataset ds = read_dataset_csv(a.in);
  read_sidecar(sidecar_path(a.in), ds);
  const std::vector<Method> methods = parse_methods(a.methods);
  const Side side = parse_side(a.side);
  double sigma = a.sigma;
  if (!(sigma > 0.0)) sigma = ds.setting ? error_sd(*ds.setting) : 1.0;

  const SelectionResult sel = oga_hdbic(ds.X, ds.Y);
  const IndexList& J = sel.j_hat;
  const Index kk = std::min<Index>(a.kmax, std::min(ds.n(), ds.p()));
  const Matrix F_hat = estimate_factors(ds.X, kk).F_hat;

  const bool need_hr = std::find(methods.begin(), methods.end(), Method::Hr) != methods.end();
  std::optional<IvEstimate> est;
  std::optional<CovEstimate> cov;
  std::optional<ResampleSet> rs;
  std::optional<ResampleEngine> engine;
  if (!J.empty()) {
    est = iv_estimate(ds.X, ds.Y, J, F_hat);
    cov = covariance(*est, CovMode::Hac, a.q);
    if (need_hr) {
      ResampleOptions opts;
      opts.B = a.B;
      opts.seed = derive_seed(a.seed, {kStreamBootstrap});
      opts.k_max = a.kmax;
      opts.half_selection = parse_half_selection(a.halves);
      rs = generate_w(ds, J, F_hat, opts);
      StatisticConfig sc;
      sc.k_max = a.kmax;
      sc.q = a.q;
      engine.emplace(ds.X, F_hat, *rs, sc);
    }
  }

  std::ofstream out(a.out);
  if (!out) throw IoError("cannot open " + a.out + " for writing");
  out << "j,method,lower,upper,selected_order,flags\n";
  bool unflagged_failure = false;
  for (std::size_t k = 0; k < J.size(); ++k) {
    const Index j = J[k];
    const auto pos = static_cast<Index>(k);
    for (const Method m : methods) {
      IntervalReport r;
      switch (m) {
        case Method::T: r = t_interval(ds.X, ds.Y, J, j, a.alpha, side); break;
        case Method::Iv: r = iv_interval(*est, *cov, j, a.alpha, side); break;
        case Method::Ps: r = ps_interval(ds.X, ds.Y, sel, j, a.alpha, sigma, side); break;
        case Method::Hr: {
          const FixedSetStatistic obs{est->beta_tilde(pos),
                                      std::sqrt(cov->V(pos, pos) / static_cast<double>(ds.n()))};
          HybridConfig hc;
          hc.min_conditioned = a.min_conditioned;
          r = side == Side::One ? hybrid_ci_one_sided(*engine, obs, j, a.alpha, hc)
                                : hybrid_ci_two_sided(*engine, obs, j, a.alpha, hc);
          break;
        }
      }
      if (r.failed() && r.flags.empty()) unflagged_failure = true;
      out << j + 1 << ',' << to_string(m) << ',' << format_double(r.lower) << ','
          << format_double(r.upper) << ',' << k + 1 << ',' << join_flags(r.flags) << '\n';
    }
  }
  if (J.empty()) std::cerr << "selci ci: no columns selected\n";
  return unflagged_failure ? 1 : 0;
}

struct SimArgs {
  std::string setting = "iid";
  Index n = 200;
  Index p = 250;
  Index reps = 300;
  Index B = 50;
  double alpha = 0.2;
  std::string methods = "t,iv,ps,hr";
  std::string side = "one";
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out = "results";
  Index kmax = kDefaultKMax;
  Index q = 1;
  std::string eps = "cross";
  std::string halves = "steps";
  bool amse_literal = false;
  Index min_conditioned = HybridConfig{}.min_conditioned;
};

int run_simulate(const SimArgs& a) {
  ExperimentConfig cfg;
  cfg.setting = parse_setting(a.setting);
  cfg.n = a.n;
  cfg.p = a.p;
  cfg.reps = a.reps;
  cfg.B = a.B;
  cfg.alpha = a.alpha;
  cfg.methods = parse_methods(a.methods);
  cfg.side = parse_side(a.side);
  cfg.seed = a.seed;
  cfg.workers = a.workers;
  cfg.out_dir = a.out;
  cfg.k_max = a.kmax;
  cfg.q = a.q;
  cfg.amse_literal = a.amse_literal;
  cfg.min_conditioned = a.min_conditioned;
  if (a.eps == "cross") {
    cfg.eps_regression = EpsRegression::CrossIndexed;
  } else if (a.eps == "same") {
    cfg.eps_regression = EpsRegression::SameSide;
  } else {
    throw InvalidConfig("--eps-regression must be 'cross' or 'same'");
  }
  cfg.half_selection = parse_half_selection(a.halves);
  const ExperimentResult res = run_experiment(cfg);
  const TableFiles files = table_paths(cfg);
  std::cout << "replications: " << res.reps_run << " run, " << res.reps_reused << " reused, "
            << res.report.degenerate << " degenerate\n"
            << "AMSE " << format_double(res.report.amse) << '\n'
            << "tables: " << files.metrics_csv.string() << ", " << files.amse_csv.string() << '\n';
  return res.failed_reps > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective confidence intervals after greedy variable selection"};
  app.require_subcommand(1);

  DgpArgs dgp;
  auto* dgp_cmd = app.add_subcommand("dgp", "Generate a synthetic dataset");
  dgp_cmd->add_option("--setting", dgp.setting, "lai, garch, ar, iid or mvn")->required();
  dgp_cmd->add_option("--n", dgp.n, "Observations")->capture_default_str();
  dgp_cmd->add_option("--p", dgp.p, "Predictors")->capture_default_str();
  dgp_cmd->add_option("--seed", dgp.seed, "Seed")->capture_default_str();
  dgp_cmd->add_option("--burn-in", dgp.burn_in, "Discarded warm-up steps")->capture_default_str();
  dgp_cmd->add_option("--out", dgp.out, "Output CSV; metadata goes to <stem>.json")->required();

  CiArgs ci;
  auto* ci_cmd = app.add_subcommand("ci", "Confidence intervals for the selected coefficients of one dataset");
  ci_cmd->add_option("--in", ci.in, "Input CSV with header y,x1,...,xp")->required();
  ci_cmd->add_option("--alpha", ci.alpha, "Tail probability")->capture_default_str();
  ci_cmd->add_option("--method", ci.methods, "t, iv, ps, hr or a comma list")->capture_default_str();
  ci_cmd->add_option("--side", ci.side, "one or two")->capture_default_str();
  ci_cmd->add_option("--q", ci.q, "HAC lag truncation")->capture_default_str();
  ci_cmd->add_option("--B", ci.B, "Resamples")->capture_default_str();
  ci_cmd->add_option("--seed", ci.seed, "Resampling seed")->capture_default_str();
  ci_cmd->add_option("--out", ci.out, "Output CSV")->required();
  ci_cmd->add_option("--sigma", ci.sigma, "Noise sd for ps (default: from metadata, else 1)");
  ci_cmd->add_option("--kmax", ci.kmax, "Largest factor count considered")->capture_default_str();
  ci_cmd->add_option("--half-selection", ci.halves, "steps or hdbic")->capture_default_str();
  ci_cmd->add_option("--min-conditioned", ci.min_conditioned, "Selecting resamples needed for an hr quantile")
      ->capture_default_str();

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte-Carlo experiment and write tables");
  sim_cmd->add_option("--setting", sim.setting, "lai, garch, ar, iid or mvn")->required();
  sim_cmd->add_option("--n", sim.n, "Observations")->capture_default_str();
  sim_cmd->add_option("--p", sim.p, "Predictors")->capture_default_str();
  sim_cmd->add_option("--reps", sim.reps, "Replications")->capture_default_str();
  sim_cmd->add_option("--B", sim.B, "Resamples")->capture_default_str();
  sim_cmd->add_option("--alpha", sim.alpha, "Tail probability")->capture_default_str();
  sim_cmd->add_option("--methods", sim.methods, "Comma list of t, iv, ps, hr")->capture_default_str();
  sim_cmd->add_option("--side", sim.side, "one or two")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--workers", sim.workers, "Parallel replications (0: SELCI_WORKERS or all cores)")
      ->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Output directory")->capture_default_str();
  sim_cmd->add_option("--kmax", sim.kmax, "Largest factor count considered")->capture_default_str();
  sim_cmd->add_option("--q", sim.q, "HAC lag truncation")->capture_default_str();
  sim_cmd->add_option("--eps-regression", sim.eps, "cross or same")->capture_default_str();
  sim_cmd->add_option("--min-conditioned", sim.min_conditioned, "Selecting resamples needed for an hr quantile")
      ->capture_default_str();
  sim_cmd->add_option("--half-selection", sim.halves,
                      "steps (full-sample step count) or hdbic: how each half selects for the split estimate")
      ->capture_default_str();
  sim_cmd->add_flag("--amse-literal", sim.amse_literal, "sqrt(||b~ - b|| / m) instead of RMSE");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dgp_cmd->parsed()) return run_dgp(dgp);
    if (ci_cmd->parsed()) return run_ci(ci);
    if (sim_cmd->parsed()) return run_simulate(sim);
  } catch (const selci::Error& e) {
    std::cerr << "selci: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
