#ifndef AMSBQ_RUNNER_HPP
#define AMSBQ_RUNNER_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "amsbq/acquisition.hpp"
#include "amsbq/benchmarks.hpp"

namespace amsbq {

enum class Method { amsbq, vbq, pe };

std::string to_string(Method method);
Method parse_method(const std::string& name);

/// One experiment run: flat key=value configuration (# comments), CLI
/// overridable.
struct RunConfig {
  std::string benchmark;
  Method method = Method::amsbq;
  AcquisitionKind acquisition = AcquisitionKind::mi;
  double budget = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::uint64_t> seeds;  // compare only
  int restarts = 10;
  int fit_restarts = 5;
  int refit_restarts = 2;
  bool refit = true;
  std::string out;
  int pe_nodes = 2048;
  bool allow_pathological = false;
  bool noise_override = false;
  std::vector<NoiseSpec> noise;  // when overridden; else benchmark defaults
  double lengthscale_prior_mode_frac = 0.05;
  double lengthscale_prior_shape = 2.0;
  int max_iterations = 10000;
  int rank = 0;  // 0 = full
  double threshold = 0.01;
  int sir_reps = 100;
};

RunConfig parse_config_file(const std::string& path);
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

inline constexpr int kCsvSchemaVersion = 1;

/// One CSV row. Initial-design queries are logged with iteration 0; the
/// model columns are populated once the initial fit exists (the last
/// iteration-0 row) and on every loop row thereafter.
struct CsvRow {
  int iteration = 0;
  int source = 0;
  Eigen::VectorXd x;  // empty -> nan columns
  double y = 0.0;
  double cost = 0.0;
  double cum_cost = 0.0;
  double ez = 0.0, vz = 0.0, rel_err = 0.0, acq_value = 0.0;
  double lambda = 0.0;
  Eigen::VectorXd b_flat;  // row-major L*L; empty -> nan columns
  bool final_row = false;
  bool has_model = false;  // ez/vz/rel_err valid
  bool has_query = false;  // source/x/y/cost valid
  bool has_acq = false;
};

struct RunOutput {
  RunConfig config;
  int dim = 1;
  int num_sources = 1;
  double ground_truth = 0.0;
  std::vector<CsvRow> rows;

  /// First cum_cost at which |rel_err| < threshold; +inf when never.
  double cost_to_tolerance(double threshold) const;
  double final_abs_rel_err() const;
  int query_count(int source) const;  // queries of one source, initial included
};

/// Executes one configured run; writes the CSV when config.out is set.
RunOutput run(const RunConfig& config);

std::string render_csv(const RunOutput& output);

struct CompareRow {
  std::string label;
  std::string benchmark;
  Method method = Method::amsbq;
  AcquisitionKind acquisition = AcquisitionKind::mi;
  int num_seeds = 0;
  double threshold = 0.0;
  double median_cost_to_tolerance = 0.0;
  double median_final_rel_err = 0.0;
};

struct CompareOutput {
  std::vector<CompareRow> rows;
  std::string table;  // human-readable text
  std::string csv;
};

/// Runs every config (per seed when a seed list is given, concurrently) and
/// summarizes cost-to-tolerance orderings. All configs must target the same
/// benchmark.
CompareOutput compare(const std::vector<RunConfig>& configs);

/// Bounded parallel map used by compare; exposed for the test harness.
void parallel_for(int count, const std::function<void(int)>& body, int max_threads = 0);

}  // namespace amsbq

#endif
