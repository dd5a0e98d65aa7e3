#pragma once

#include "selci/dgp.hpp"
#include "selci/hybrid.hpp"
#include "selci/interval.hpp"
#include "selci/resampler.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace selci {

struct ExperimentConfig {
  Setting setting = Setting::Iid;
  Index n = 200;
  Index p = 250;
  Index reps = 300;
  Index B = 50;
  double alpha = 0.2;
  Side side = Side::One;
  Index k_max = kDefaultKMax;
  Index q = 1;
  std::vector<Method> methods{Method::T, Method::Iv, Method::Ps, Method::Hr};
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = ".";
  /// 0: take SELCI_WORKERS from the environment, else the OpenMP default.
  int workers = 0;
  EpsRegression eps_regression = EpsRegression::CrossIndexed;
  HalfSelection half_selection = HalfSelection::FullSampleSteps;
  /// Use sqrt(||b~ - b|| / m) instead of sqrt(||b~ - b||^2 / m) for the AMSE.
  bool amse_literal = false;
  Index min_conditioned = HybridConfig{}.min_conditioned;
};

void validate(const ExperimentConfig& cfg);

/// One line of the record store. Each replication writes one `sel` row per
/// selected column, one `ci` row per (column, method) and finally one `rep` row;
/// a replication without its `rep` row is incomplete. `j` is 1-based.
struct Record {
  Index rep = 0;
  std::string kind;
  Index j = 0;
  double beta = 0.0;
  std::string method;
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
  Index m = 0;
  double sq_error = 0.0;
  std::string flags;

  friend bool operator==(const Record&, const Record&) = default;
};

inline constexpr const char* kRecordHeader = "rep,kind,j,beta,method,lower,upper,estimate,m,sq_error,flags";

[[nodiscard]] std::string to_csv_line(const Record& r);
[[nodiscard]] Record parse_record(const std::string& line);

void write_records(const std::filesystem::path& path, const std::vector<Record>& records);
/// Missing file: empty result. Malformed lines throw IoError.
[[nodiscard]] std::vector<Record> read_records(const std::filesystem::path& path);

/// Per-replication seed; data and bootstrap streams branch from it.
[[nodiscard]] std::uint64_t replication_seed(std::uint64_t master, Index rep);

/// Simulates replication `rep` and returns its records. Failures inside the
/// replication are recorded as flags rather than thrown.
[[nodiscard]] std::vector<Record> run_replication(const ExperimentConfig& cfg, Index rep);

/// Signal strengths reported in the tables.
inline const std::vector<double> kSignalGroups{0.6, 0.4, 0.2, 0.1};

struct GroupMetrics {
  Index selected = 0;  ///< (j, rep) pairs with an interval for this method
  Index covered = 0;
  Index failed = 0;    ///< intervals that could not be computed
  double cr = 0.0;     ///< covered / (selected - failed); NaN if undefined
  double mlb = 0.0;    ///< mean of finite lower bounds; NaN if none
  double slb = 0.0;    ///< sample standard deviation of finite lower bounds
};

struct MethodMetrics {
  Method method = Method::T;
  std::vector<GroupMetrics> groups;  ///< aligned with kSignalGroups
  GroupMetrics overall;
};

struct MetricsReport {
  Setting setting = Setting::Iid;
  Index n = 0;
  Index p = 0;
  Index reps = 0;        ///< replications with a rep row
  Index degenerate = 0;  ///< empty selection, all-zero combined estimate or failure
  Index amse_reps = 0;
  double amse = 0.0;     ///< NaN when no replication qualifies
  std::vector<double> ns;  ///< mean selection count per column, aligned with kSignalGroups
  std::vector<MethodMetrics> methods;
};

/// Pure pass over complete replications.
[[nodiscard]] MetricsReport aggregate(const std::vector<Record>& records, const ExperimentConfig& cfg);

struct TableFiles {
  std::filesystem::path metrics_csv, metrics_md, amse_csv, amse_md;
};

[[nodiscard]] std::string file_tag(const ExperimentConfig& cfg);
[[nodiscard]] TableFiles table_paths(const ExperimentConfig& cfg);
[[nodiscard]] std::filesystem::path records_path(const ExperimentConfig& cfg);

/// CSV and Markdown tables: NS row, then CR/mLB/sLB per method across the signal
/// groups and Overall; plus a one-row AMSE table.
void emit_tables(const MetricsReport& report, const TableFiles& files);

struct ExperimentResult {
  MetricsReport report;
  Index reps_run = 0;      ///< replications simulated by this call
  Index reps_reused = 0;   ///< complete replications found in the store
  Index failed_reps = 0;   ///< replications that ended with an unflagged failure
};

/// Runs the missing replications of an experiment in parallel, appends them to
/// the record store in replication order, aggregates and writes the tables.
/// Re-running with the same configuration resumes where the store stops.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

[[nodiscard]] int resolve_workers(int requested);

}  // namespace selci
