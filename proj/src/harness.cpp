#include "selci/harness.hpp"

#include "selci/baselines.hpp"
#include "selci/dataset_io.hpp"
#include "selci/error.hpp"
#include "selci/hybrid.hpp"
#include "selci/iv_estimator.hpp"
#include "selci/oga.hpp"

#include <nlohmann/json.hpp>
#include <omp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>

namespace selci {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string method_list(const std::vector<Method>& methods) {
  std::string out;
  for (const Method m : methods) {
    if (!out.empty()) out += ',';
    out += to_string(m);
  }
  return out;
}

std::string lower_setting(Setting s) {
  std::string out(to_string(s));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Record make_ci_record(Index rep, Index j, double beta, const IntervalReport& r) {
  Record rec;
  rec.rep = rep;
  rec.kind = "ci";
  rec.j = j + 1;
  rec.beta = beta;
  rec.method = std::string(to_string(r.method));
  rec.lower = r.lower;
  rec.upper = r.upper;
  rec.estimate = r.estimate;
  rec.flags = join_flags(r.flags);
  return rec;
}

Record failed_ci_record(Index rep, Index j, double beta, Method m, const std::string& flag) {
  IntervalReport r;
  r.method = m;
  r.lower = r.upper = kNaN;
  r.flags.push_back(flag);
  return make_ci_record(rep, j, beta, r);
}

// Interval for one method; exceptions become a flagged NaN row.
template <typename F>
Record guarded_ci(Index rep, Index j, double beta, Method m, F&& compute) {
  try {
    return make_ci_record(rep, j, beta, compute());
  } catch (const SingularMatrix&) {
    return failed_ci_record(rep, j, beta, m, std::string(to_string(m)) + "_singular");
  } catch (const Error&) {
    return failed_ci_record(rep, j, beta, m, std::string(to_string(m)) + "_error");
  }
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return v.empty() ? kNaN : s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  if (v.size() == 1) return 0.0;
  const double mu = mean(v);
  double ss = 0.0;
  for (const double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct GroupAccumulator {
  Index selected = 0;
  Index covered = 0;
  Index failed = 0;
  std::vector<double> lbs;

  void add(const Record& r) {
    ++selected;
    if (std::isnan(r.lower) || std::isnan(r.upper)) {
      ++failed;
      return;
    }
    if (r.lower <= r.beta && r.beta <= r.upper) ++covered;
    if (std::isfinite(r.lower)) lbs.push_back(r.lower);
  }

  void merge(const GroupAccumulator& o) {
    selected += o.selected;
    covered += o.covered;
    failed += o.failed;
    lbs.insert(lbs.end(), o.lbs.begin(), o.lbs.end());
  }

  [[nodiscard]] GroupMetrics finish() const {
    GroupMetrics g;
    g.selected = selected;
    g.covered = covered;
    g.failed = failed;
    const Index usable = selected - failed;
    g.cr = usable > 0 ? static_cast<double>(covered) / static_cast<double>(usable) : kNaN;
    g.mlb = mean(lbs);
    g.slb = sample_sd(lbs);
    return g;
  }
};

int group_of(double beta) {
  for (std::size_t g = 0; g < kSignalGroups.size(); ++g) {
    if (std::abs(beta - kSignalGroups[g]) < 1e-12) return static_cast<int>(g);
  }
  return -1;
}

std::string cell(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string ns_cell(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

struct TableRow {
  std::string metric;
  std::string method;
  std::vector<std::string> cells;
};

std::vector<TableRow> table_rows(const MetricsReport& rep) {
  std::vector<TableRow> rows;
  if (rep.reps == 0) return rows;
  TableRow ns{"NS", "", {}};
  double total = 0.0;
  for (const double v : rep.ns) {
    ns.cells.push_back(ns_cell(v));
    total += v;
  }
  ns.cells.push_back(ns_cell(total));
  rows.push_back(ns);
  for (const auto& mm : rep.methods) {
    const std::string name(to_string(mm.method));
    TableRow cr{"CR", name, {}}, mlb{"mLB", name, {}}, slb{"sLB", name, {}};
    for (const auto& g : mm.groups) {
      cr.cells.push_back(cell(g.cr));
      mlb.cells.push_back(cell(g.mlb));
      slb.cells.push_back(cell(g.slb));
    }
    cr.cells.push_back(cell(mm.overall.cr));
    mlb.cells.push_back(cell(mm.overall.mlb));
    slb.cells.push_back(cell(mm.overall.slb));
    rows.push_back(cr);
    rows.push_back(mlb);
    rows.push_back(slb);
  }
  return rows;
}

std::vector<std::string> group_headers() {
  std::vector<std::string> h;
  for (const double g : kSignalGroups) h.push_back(cell(g).substr(0, 3));
  h.emplace_back("Overall");
  return h;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  return {{"setting", std::string(to_string(cfg.setting))},
          {"n", cfg.n},
          {"p", cfg.p},
          {"B", cfg.B},
          {"alpha", cfg.alpha},
          {"side", std::string(to_string(cfg.side))},
          {"kmax", cfg.k_max},
          {"q", cfg.q},
          {"methods", method_list(cfg.methods)},
          {"seed", cfg.seed},
          {"eps_regression", cfg.eps_regression == EpsRegression::CrossIndexed ? "cross" : "same"},
          {"half_selection", cfg.half_selection == HalfSelection::Hdbic ? "hdbic" : "steps"},
          {"min_conditioned", cfg.min_conditioned}};
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.reps < 1) throw InvalidConfig("reps must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5)) throw InvalidConfig("alpha must lie in (0, 0.5)");
  if (cfg.B < 0) throw InvalidConfig("B must be >= 0");
  if (cfg.q < 0) throw InvalidConfig("q must be >= 0");
  if (cfg.k_max < 1) throw InvalidConfig("kmax must be >= 1");
  if (cfg.n < 8) throw InvalidConfig("n must be >= 8");
  const bool hr = std::find(cfg.methods.begin(), cfg.methods.end(), Method::Hr) != cfg.methods.end();
  if (hr && cfg.B < 1) throw InvalidConfig("the hr method needs B >= 1");
  if (cfg.min_conditioned < 1) throw InvalidConfig("min_conditioned must be >= 1");
  validate(DgpConfig{cfg.setting, cfg.n, cfg.p, cfg.seed, 200});
  if (cfg.p < 10) throw InvalidConfig("p must be >= 10");
}

std::string to_csv_line(const Record& r) {
  std::string s = std::to_string(r.rep);
  s += ',' + r.kind + ',' + std::to_string(r.j) + ',' + format_double(r.beta) + ',' + r.method + ',' +
       format_double(r.lower) + ',' + format_double(r.upper) + ',' + format_double(r.estimate) + ',' +
       std::to_string(r.m) + ',' + format_double(r.sq_error) + ',' + r.flags;
  return s;
}

Record parse_record(const std::string& line) {
  const auto c = split_csv_line(line);
  if (c.size() != 11) throw IoError("record line has " + std::to_string(c.size()) + " fields: " + line);
  Record r;
  try {
    r.rep = std::stoll(c[0]);
    r.kind = c[1];
    r.j = std::stoll(c[2]);
    r.beta = parse_double(c[3]);
    r.method = c[4];
    r.lower = parse_double(c[5]);
    r.upper = parse_double(c[6]);
    r.estimate = parse_double(c[7]);
    r.m = std::stoll(c[8]);
    r.sq_error = parse_double(c[9]);
    r.flags = c[10];
  } catch (const std::exception& e) {
    throw IoError(std::string("malformed record: ") + e.what() + ": " + line);
  }
  return r;
}

void write_records(const fs::path& path, const std::vector<Record>& records) {
  auto out = open_out(path);
  out << kRecordHeader << '\n';
  for (const auto& r : records) out << to_csv_line(r) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<Record> read_records(const fs::path& path) {
  std::vector<Record> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  if (!std::getline(in, line)) return out;
  if (line != kRecordHeader) throw IoError(path.string() + ": unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(parse_record(line));
  }
  return out;
}

std::uint64_t replication_seed(std::uint64_t master, Index rep) {
  return derive_seed(master, {static_cast<std::uint64_t>(rep)});
}

std::vector<Record> run_replication(const ExperimentConfig& cfg, Index rep) {
  const std::uint64_t seed = replication_seed(cfg.seed, rep);
  const CoefVector truth = make_beta(cfg.p);
  std::vector<Record> out;
  Record summary;
  summary.rep = rep;
  summary.kind = "rep";
  std::vector<std::string> flags;

  try {
    const Dataset ds = generate(DgpConfig{cfg.setting, cfg.n, cfg.p, derive_seed(seed, {kStreamData}), 200}, truth);
    const SelectionResult sel = oga_hdbic(ds.X, ds.Y);
    const IndexList& J = sel.j_hat;
    summary.m = sel.m;
    if (J.empty()) {
      flags.emplace_back("empty_selection");
      summary.sq_error = kNaN;
      summary.flags = join_flags(flags);
      out.push_back(summary);
      return out;
    }
    const Index kk = std::min<Index>(cfg.k_max, std::min(ds.n(), ds.p()));
    const Matrix F_hat = estimate_factors(ds.X, kk).F_hat;

    const auto wants = [&](Method m) {
      return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
    };
    ResampleOptions opts;
    opts.B = wants(Method::Hr) ? cfg.B : 0;
    opts.seed = derive_seed(seed, {kStreamBootstrap});
    opts.k_max = cfg.k_max;
    opts.eps_regression = cfg.eps_regression;
    opts.half_selection = cfg.half_selection;
    const ResampleSet rs = generate_w(ds, J, F_hat, opts);
    if (rs.diagnostics.degenerate) flags.emplace_back("degenerate");
    if (rs.diagnostics.eps_from_w_tilde) flags.emplace_back("eps_is_w_tilde");

    double sq = 0.0;
    for (std::size_t i = 0; i < J.size(); ++i) {
      const double diff = rs.beta_tilde(static_cast<Index>(i)) - truth.values(J[i]);
      sq += diff * diff;
    }
    summary.sq_error = sq;

    for (std::size_t i = 0; i < J.size(); ++i) {
      Record r;
      r.rep = rep;
      r.kind = "sel";
      r.j = J[i] + 1;
      r.beta = truth.values(J[i]);
      r.estimate = rs.beta_tilde(static_cast<Index>(i));
      r.lower = r.upper = kNaN;
      out.push_back(r);
    }

    std::optional<IvEstimate> est;
    std::optional<CovEstimate> cov;
    try {
      est = iv_estimate(ds.X, ds.Y, J, F_hat);
      cov = covariance(*est, CovMode::Hac, cfg.q);
    } catch (const Error&) {
      flags.emplace_back("full_fit_failed");
    }
    std::optional<ResampleEngine> engine;
    if (wants(Method::Hr) && est) {
      StatisticConfig sc;
      sc.k_max = cfg.k_max;
      sc.q = cfg.q;
      sc.mode = CovMode::Hac;
      engine.emplace(ds.X, F_hat, rs, sc);
    }
    const double sigma = error_sd(cfg.setting);

    for (const Index j : J) {
      const double beta = truth.values(j);
      for (const Method m : cfg.methods) {
        switch (m) {
          case Method::T:
            out.push_back(guarded_ci(rep, j, beta, m, [&] { return t_interval(ds.X, ds.Y, J, j, cfg.alpha, cfg.side); }));
            break;
          case Method::Iv:
            if (!est) {
              out.push_back(failed_ci_record(rep, j, beta, m, "iv_singular"));
            } else {
              out.push_back(guarded_ci(rep, j, beta, m, [&] { return iv_interval(*est, *cov, j, cfg.alpha, cfg.side); }));
            }
            break;
          case Method::Ps:
            out.push_back(guarded_ci(rep, j, beta, m, [&] { return ps_interval(ds.X, ds.Y, sel, j, cfg.alpha, sigma, cfg.side); }));
            break;
          case Method::Hr:
            if (!engine) {
              out.push_back(failed_ci_record(rep, j, beta, m, "hr_singular"));
            } else {
              out.push_back(guarded_ci(rep, j, beta, m, [&] {
                const Index pos = position_of(J, j);
                const FixedSetStatistic obs{est->beta_tilde(pos),
                                            std::sqrt(cov->V(pos, pos) / static_cast<double>(ds.n()))};
                HybridConfig hc;
                hc.min_conditioned = cfg.min_conditioned;
                return cfg.side == Side::One ? hybrid_ci_one_sided(*engine, obs, j, cfg.alpha, hc)
                                             : hybrid_ci_two_sided(*engine, obs, j, cfg.alpha, hc);
              }));
            }
            break;
        }
      }
    }
  } catch (const Error&) {
    out.clear();
    flags.assign({"rep_failed"});
    summary.m = 0;
    summary.sq_error = kNaN;
  } catch (const std::exception&) {
    out.clear();
    flags.assign({"internal_error"});
    summary.m = 0;
    summary.sq_error = kNaN;
  }
  summary.flags = join_flags(flags);
  out.push_back(summary);
  return out;
}

MetricsReport aggregate(const std::vector<Record>& records, const ExperimentConfig& cfg) {
  MetricsReport rep;
  rep.setting = cfg.setting;
  rep.n = cfg.n;
  rep.p = cfg.p;
  const CoefVector truth = make_beta(cfg.p);
  const std::size_t G = kSignalGroups.size();

  std::set<Index> complete;
  for (const auto& r : records) {
    if (r.kind == "rep") complete.insert(r.rep);
  }
  rep.reps = static_cast<Index>(complete.size());

  std::vector<double> counts(G, 0.0);
  std::map<std::string, std::vector<GroupAccumulator>> acc;
  for (const Method m : cfg.methods) acc[std::string(to_string(m))].resize(G);
  double amse_sum = 0.0;

  for (const auto& r : records) {
    if (complete.count(r.rep) == 0) continue;
    if (r.kind == "rep") {
      const bool degenerate = r.m == 0 || r.flags.find("degenerate") != std::string::npos ||
                              r.flags.find("rep_failed") != std::string::npos ||
                              r.flags.find("internal_error") != std::string::npos;
      if (degenerate) ++rep.degenerate;
      if (r.m > 0 && std::isfinite(r.sq_error)) {
        const double m = static_cast<double>(r.m);
        amse_sum += cfg.amse_literal ? std::sqrt(std::sqrt(r.sq_error) / m) : std::sqrt(r.sq_error / m);
        ++rep.amse_reps;
      }
      continue;
    }
    const int g = group_of(r.beta);
    if (g < 0) continue;
    if (r.kind == "sel") {
      counts[static_cast<std::size_t>(g)] += 1.0;
    } else if (r.kind == "ci") {
      const auto it = acc.find(r.method);
      if (it != acc.end()) it->second[static_cast<std::size_t>(g)].add(r);
    }
  }

  rep.amse = rep.amse_reps > 0 ? amse_sum / static_cast<double>(rep.amse_reps) : kNaN;
  rep.ns.assign(G, 0.0);
  for (std::size_t g = 0; g < G; ++g) {
    Index size = 0;
    for (Index j = 0; j < truth.values.size(); ++j) size += group_of(truth.values(j)) == static_cast<int>(g);
    rep.ns[g] = size > 0 ? counts[g] / static_cast<double>(size) : 0.0;
  }
  for (const Method m : cfg.methods) {
    MethodMetrics mm;
    mm.method = m;
    GroupAccumulator all;
    for (const auto& a : acc[std::string(to_string(m))]) {
      mm.groups.push_back(a.finish());
      all.merge(a);
    }
    mm.overall = all.finish();
    rep.methods.push_back(mm);
  }
  return rep;
}

std::string file_tag(const ExperimentConfig& cfg) {
  return lower_setting(cfg.setting) + "_n" + std::to_string(cfg.n) + "_p" + std::to_string(cfg.p);
}

TableFiles table_paths(const ExperimentConfig& cfg) {
  const std::string tag = file_tag(cfg);
  return {cfg.out_dir / ("metrics_" + tag + ".csv"), cfg.out_dir / ("metrics_" + tag + ".md"),
          cfg.out_dir / ("amse_" + tag + ".csv"), cfg.out_dir / ("amse_" + tag + ".md")};
}

fs::path records_path(const ExperimentConfig& cfg) {
  return cfg.out_dir / ("records_" + file_tag(cfg) + ".csv");
}

void emit_tables(const MetricsReport& report, const TableFiles& files) {
  const auto heads = group_headers();
  const auto rows = table_rows(report);

  {
    auto out = open_out(files.metrics_csv);
    out << "metric,method";
    for (const auto& h : heads) out << ',' << h;
    out << '\n';
    for (const auto& r : rows) {
      out << r.metric << ',' << r.method;
      for (const auto& c : r.cells) out << ',' << c;
      out << '\n';
    }
  }
  {
    auto out = open_out(files.metrics_md);
    out << "| metric | method |";
    for (const auto& h : heads) out << ' ' << h << " |";
    out << "\n|---|---|";
    for (std::size_t i = 0; i < heads.size(); ++i) out << "---:|";
    out << '\n';
    for (const auto& r : rows) {
      out << "| " << r.metric << " | " << r.method << " |";
      for (const auto& c : r.cells) out << ' ' << c << " |";
      out << '\n';
    }
  }
  const std::string setting(to_string(report.setting));
  const std::string np = "(" + std::to_string(report.n) + "," + std::to_string(report.p) + ")";
  {
    auto out = open_out(files.amse_csv);
    out << "n,p,setting,reps,amse_reps,degenerate,amse\n";
    if (report.reps > 0) {
      out << report.n << ',' << report.p << ',' << setting << ',' << report.reps << ','
          << report.amse_reps << ',' << report.degenerate << ',' << cell(report.amse) << '\n';
    }
  }
  {
    auto out = open_out(files.amse_md);
    out << "| (n,p) | " << setting << " |\n|---|---:|\n";
    if (report.reps > 0) out << "| " << np << " | " << cell(report.amse) << " |\n";
  }
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SELCI_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1, omp_get_max_threads());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  fs::create_directories(cfg.out_dir);
  const fs::path store = records_path(cfg);
  const fs::path config_file = cfg.out_dir / ("config_" + file_tag(cfg) + ".json");
  const nlohmann::json config = config_json(cfg);

  std::vector<Record> records;
  if (fs::exists(store)) {
    std::ifstream in(config_file);
    nlohmann::json previous;
    if (in) in >> previous;
    if (previous != config) {
      throw InvalidConfig("record store " + store.string() +
                          " was written with a different configuration; use a fresh --out directory");
    }
    records = read_records(store);
  } else {
    open_out(config_file) << config.dump(2) << '\n';
  }

  // Keep only complete replications that belong to this run.
  std::set<Index> complete;
  for (const auto& r : records) {
    if (r.kind == "rep" && r.rep < cfg.reps) complete.insert(r.rep);
  }
  std::vector<Record> kept;
  for (const auto& r : records) {
    if (complete.count(r.rep) != 0) kept.push_back(r);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Record& a, const Record& b) { return a.rep < b.rep; });
  write_records(store, kept);

  std::vector<Index> missing;
  for (Index r = 0; r < cfg.reps; ++r) {
    if (complete.count(r) == 0) missing.push_back(r);
  }

  ExperimentResult result;
  result.reps_reused = static_cast<Index>(complete.size());
  const int workers = resolve_workers(cfg.workers);
  const std::size_t chunk = static_cast<std::size_t>(std::max(4 * workers, 8));

  std::ofstream out(store, std::ios::app);
  if (!out) throw IoError("cannot append to " + store.string());
  for (std::size_t start = 0; start < missing.size(); start += chunk) {
    const std::size_t count = std::min(chunk, missing.size() - start);
    std::vector<std::vector<Record>> batch(count);
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
    for (std::size_t i = 0; i < count; ++i) batch[i] = run_replication(cfg, missing[start + i]);
    for (const auto& recs : batch) {
      for (const auto& r : recs) {
        out << to_csv_line(r) << '\n';
        kept.push_back(r);
      }
    }
    out.flush();
    result.reps_run += static_cast<Index>(count);
  }
  out.close();

  std::stable_sort(kept.begin(), kept.end(), [](const Record& a, const Record& b) { return a.rep < b.rep; });
  for (const auto& r : kept) {
    if (r.kind == "rep" && r.flags.find("internal_error") != std::string::npos) ++result.failed_reps;
  }
  result.report = aggregate(kept, cfg);
  emit_tables(result.report, table_paths(cfg));
  return result;
}

}  // namespace selci
