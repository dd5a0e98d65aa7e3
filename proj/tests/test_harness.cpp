#include "selci/error.hpp"
#include "selci/harness.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace selci;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("selci_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.setting = Setting::Mvn;
  cfg.n = 80;
  cfg.p = 40;
  cfg.reps = 5;
  cfg.B = 20;
  cfg.seed = 42;
  cfg.out_dir = out;
  cfg.workers = 1;
  return cfg;
}

Record rep_row(Index rep, Index m = 2) {
  Record r;
  r.rep = rep;
  r.kind = "rep";
  r.m = m;
  r.sq_error = 0.01;
  return r;
}

Record ci_row(Index rep, Index j, double beta, const std::string& method, double lower) {
  Record r;
  r.rep = rep;
  r.kind = "ci";
  r.j = j;
  r.beta = beta;
  r.method = method;
  r.lower = lower;
  r.upper = kInf;
  return r;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("records survive a CSV round trip") {
    Record r;
    r.rep = 12;
    r.kind = "ci";
    r.j = 7;
    r.beta = 0.1;
    r.method = "hr";
    r.lower = -kInf;
    r.upper = kInf;
    r.estimate = 0.123456789012345678;
    r.m = 4;
    r.sq_error = std::numeric_limits<double>::quiet_NaN();
    r.flags = "hr_normal_fallback|hr_not_converged";
    const Record back = parse_record(to_csv_line(r));
    CHECK(back.rep == r.rep);
    CHECK(back.kind == r.kind);
    CHECK(back.j == r.j);
    CHECK(back.beta == r.beta);
    CHECK(back.method == r.method);
    CHECK(back.lower == r.lower);
    CHECK(back.upper == r.upper);
    CHECK(back.estimate == r.estimate);
    CHECK(std::isnan(back.sq_error));
    CHECK(back.flags == r.flags);

    const fs::path dir = scratch_dir("roundtrip");
    Record s = r;
    s.sq_error = 0.5;
    write_records(dir / "r.csv", {s, rep_row(12)});
    const auto again = read_records(dir / "r.csv");
    REQUIRE(again.size() == 2);
    CHECK(again[0] == s);
    CHECK(read_records(dir / "absent.csv").empty());
    CHECK_THROWS_AS((void)parse_record("1,ci,2"), IoError);
  }

  TEST_CASE("coverage from hand-built records") {
    ExperimentConfig cfg;
    cfg.p = 20;
    cfg.methods = {Method::Hr, Method::T};
    std::vector<Record> recs;
    for (Index rep = 0; rep < 4; ++rep) {
      recs.push_back(ci_row(rep, 1, 0.6, "hr", -kInf));
      recs.push_back(ci_row(rep, 7, 0.1, "hr", -kInf));
      recs.push_back(ci_row(rep, 1, 0.6, "t", 0.9));
      recs.push_back(ci_row(rep, 7, 0.1, "t", rep < 1 ? 0.05 : 0.2));
      recs.push_back(rep_row(rep));
    }
    // An incomplete replication is ignored.
    recs.push_back(ci_row(9, 1, 0.6, "t", 0.0));
    const MetricsReport report = aggregate(recs, cfg);
    CHECK(report.reps == 4);
    REQUIRE(report.methods.size() == 2);
    const MethodMetrics& hr = report.methods[0];
    CHECK(hr.groups[0].cr == 1.0);
    CHECK(hr.groups[3].cr == 1.0);
    CHECK(hr.overall.cr == 1.0);
    CHECK(std::isnan(hr.groups[1].cr));
    CHECK(std::isnan(hr.groups[0].mlb));
    const MethodMetrics& t = report.methods[1];
    CHECK(t.groups[0].cr == 0.0);
    CHECK(t.groups[0].mlb == doctest::Approx(0.9));
    CHECK(t.groups[0].slb == doctest::Approx(0.0));
    CHECK(t.groups[3].cr == doctest::Approx(0.25));
    CHECK(t.overall.cr == doctest::Approx(1.0 / 8.0));
    CHECK(report.amse == doctest::Approx(std::sqrt(0.01 / 2.0)));
  }

  TEST_CASE("overall coverage is the selection-weighted mix of group coverage") {
    const fs::path dir = scratch_dir("weighted");
    ExperimentConfig cfg = small_config(dir);
    const ExperimentResult res = run_experiment(cfg);
    for (const auto& mm : res.report.methods) {
      double covered = 0.0;
      double usable = 0.0;
      for (const auto& g : mm.groups) {
        covered += static_cast<double>(g.covered);
        usable += static_cast<double>(g.selected - g.failed);
      }
      if (usable > 0) CHECK(mm.overall.cr == doctest::Approx(covered / usable));
      CHECK(mm.overall.selected == mm.groups[0].selected + mm.groups[1].selected + mm.groups[2].selected +
                                       mm.groups[3].selected);
    }
  }

  TEST_CASE("replications are reproducible and independent of the worker count") {
    const fs::path a = scratch_dir("w1");
    const fs::path b = scratch_dir("w2");
    ExperimentConfig cfg = small_config(a);
    const auto lines = [&] {
      std::string all;
      for (const auto& r : run_replication(cfg, 3)) all += to_csv_line(r) + '\n';
      return all;
    };
    CHECK(lines() == lines());
    (void)run_experiment(cfg);
    cfg.out_dir = b;
    cfg.workers = 2;
    (void)run_experiment(cfg);
    CHECK(slurp(a / "records_mvn_n80_p40.csv") == slurp(b / "records_mvn_n80_p40.csv"));
    CHECK(slurp(table_paths(cfg).metrics_csv) == slurp(a / "metrics_mvn_n80_p40.csv"));
  }

  TEST_CASE("resuming runs only the missing replications") {
    const fs::path full = scratch_dir("full");
    const fs::path part = scratch_dir("part");
    ExperimentConfig cfg = small_config(full);
    (void)run_experiment(cfg);

    cfg.out_dir = part;
    cfg.reps = 2;
    CHECK(run_experiment(cfg).reps_run == 2);
    // Simulate an interruption: drop the closing row of the last replication.
    const fs::path store = records_path(cfg);
    auto recs = read_records(store);
    recs.pop_back();
    write_records(store, recs);
    cfg.reps = 5;
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.reps_reused == 1);
    CHECK(res.reps_run == 4);
    CHECK(slurp(store) == slurp(full / "records_mvn_n80_p40.csv"));
    CHECK(slurp(table_paths(cfg).metrics_csv) == slurp(full / "metrics_mvn_n80_p40.csv"));

    cfg.alpha = 0.1;
    CHECK_THROWS_AS((void)run_experiment(cfg), InvalidConfig);
  }

  TEST_CASE("seeded five-replication tables match the golden files") {
    const fs::path dir = scratch_dir("golden");
    const ExperimentConfig cfg = small_config(dir);
    (void)run_experiment(cfg);
    const TableFiles files = table_paths(cfg);
    const fs::path golden = SELCI_GOLDEN_DIR;
    for (const fs::path& produced : {files.metrics_csv, files.amse_csv}) {
      const fs::path expected = golden / produced.filename();
      if (std::getenv("SELCI_UPDATE_GOLDEN") != nullptr) {
        fs::create_directories(golden);
        fs::copy_file(produced, expected, fs::copy_options::overwrite_existing);
      }
      REQUIRE_MESSAGE(fs::exists(expected), "missing golden file " << expected);
      CHECK(slurp(produced) == slurp(expected));
    }
  }

  TEST_CASE("an empty report produces header-only tables") {
    const fs::path dir = scratch_dir("empty");
    ExperimentConfig cfg;
    cfg.out_dir = dir;
    const MetricsReport report = aggregate({}, cfg);
    CHECK(report.reps == 0);
    CHECK(std::isnan(report.amse));
    emit_tables(report, table_paths(cfg));
    const std::string amse = slurp(table_paths(cfg).amse_csv);
    CHECK(amse == "n,p,setting,reps,amse_reps,degenerate,amse\n");
    const std::string metrics = slurp(table_paths(cfg).metrics_csv);
    CHECK(metrics.rfind("metric,method,0.6,0.4,0.2,0.1,Overall\n", 0) == 0);
  }

  TEST_CASE("configuration checks") {
    ExperimentConfig cfg;
    cfg.reps = 0;
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);
    cfg.reps = 1;
    cfg.alpha = 0.5;
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);
    cfg.alpha = 0.2;
    cfg.B = 0;
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);
    cfg.methods = {Method::T};
    CHECK_NOTHROW(validate(cfg));
    CHECK(file_tag(cfg) == "iid_n200_p250");
    CHECK(replication_seed(1, 0) != replication_seed(1, 1));
    CHECK(replication_seed(1, 5) == replication_seed(1, 5));
  }
}
