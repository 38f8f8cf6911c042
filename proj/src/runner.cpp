#include "amsbq/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "amsbq/log.hpp"
#include "amsbq/quadrature.hpp"

namespace amsbq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " + value);
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + value);
  }
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
  }
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double median(std::vector<double> values) {
  if (values.empty()) return kNan;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::amsbq: return "amsbq";
    case Method::vbq: return "vbq";
    case Method::pe: return "pe";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "amsbq") return Method::amsbq;
  if (name == "vbq") return Method::vbq;
  if (name == "pe") return Method::pe;
  throw std::invalid_argument("unknown method: " + name);
}

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "benchmark") {
    config.benchmark = value;
  } else if (key == "method") {
    config.method = parse_method(value);
  } else if (key == "acquisition" || key == "acq") {
    config.acquisition = parse_acquisition(value);
  } else if (key == "budget") {
    config.budget = parse_double(value, key);
  } else if (key == "seed") {
    config.seed = parse_u64(value, key);
    config.seed_set = true;
  } else if (key == "seeds") {
    config.seeds.clear();
    for (const auto& item : split_list(value)) config.seeds.push_back(parse_u64(item, key));
  } else if (key == "restarts") {
    config.restarts = static_cast<int>(parse_u64(value, key));
  } else if (key == "fit-restarts") {
    config.fit_restarts = static_cast<int>(parse_u64(value, key));
  } else if (key == "refit-restarts") {
    config.refit_restarts = static_cast<int>(parse_u64(value, key));
  } else if (key == "refit") {
    config.refit = parse_bool(value, key);
  } else if (key == "out") {
    config.out = value;
  } else if (key == "pe-nodes") {
    config.pe_nodes = static_cast<int>(parse_u64(value, key));
  } else if (key == "allow-pathological") {
    config.allow_pathological = parse_bool(value, key);
  } else if (key == "noise-variance") {
    config.noise_override = true;
    config.noise.clear();
    for (auto item : split_list(value)) {
      NoiseSpec spec;
      if (item.rfind("learn:", 0) == 0) {
        spec.fixed = false;
        item = item.substr(6);
      }
      spec.value = parse_double(item, key);
      config.noise.push_back(spec);
    }
    if (config.noise.empty()) throw std::invalid_argument("config: empty noise-variance");
  } else if (key == "lengthscale-prior-mode-frac") {
    config.lengthscale_prior_mode_frac = parse_double(value, key);
  } else if (key == "lengthscale-prior-shape") {
    config.lengthscale_prior_shape = parse_double(value, key);
  } else if (key == "max-iterations") {
    config.max_iterations = static_cast<int>(parse_u64(value, key));
  } else if (key == "rank") {
    config.rank = static_cast<int>(parse_u64(value, key));
  } else if (key == "threshold") {
    config.threshold = value == "inf" ? kInf : parse_double(value, key);
  } else if (key == "sir-reps") {
    config.sir_reps = static_cast<int>(parse_u64(value, key));
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not key=value: " + line);
    }
    apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

namespace {

void validate(const RunConfig& config) {
  if (!benchmark_exists(config.benchmark)) {
    throw std::invalid_argument("unknown benchmark: '" + config.benchmark + "'");
  }
  if (!config.seed_set) {
    throw std::invalid_argument("config: seed is required (no wall-clock seeding)");
  }
  if (config.method != Method::pe && !(config.budget > 0.0)) {
    throw std::invalid_argument("config: budget must be positive");
  }
  if (config.method == Method::amsbq && is_pathological(config.acquisition) &&
      !config.allow_pathological) {
    throw std::invalid_argument(
        "the ip acquisition is pathological under cost; pass --allow-pathological to use it");
  }
}

CsvRow model_row_defaults() {
  CsvRow row;
  row.y = kNan;
  row.cost = kNan;
  row.cum_cost = kNan;
  row.ez = kNan;
  row.vz = kNan;
  row.rel_err = kNan;
  row.acq_value = kNan;
  row.lambda = kNan;
  return row;
}

RunOutput run_with_seed(const RunConfig& config, std::uint64_t seed) {
  validate(config);
  BenchmarkOptions bench_options;
  bench_options.sir_reps = config.sir_reps;
  const Benchmark bench = make_benchmark(config.benchmark, bench_options);

  RunOutput output;
  output.config = config;
  output.config.seed = seed;
  output.dim = bench.domain.dim();
  output.num_sources = bench.num_sources;
  output.ground_truth = bench.ground_truth;

  Rng master(seed);

  if (config.method == Method::pe) {
    std::atomic<int> node{0};
    Rng pe_rng = master.split(0x9E);
    auto f1 = [&](const Point& x) {
      Rng query = pe_rng.split(node++);
      return bench.black_box.eval(1, x, query);
    };
    const double estimate = percentile_estimate(f1, bench.domain, config.pe_nodes);
    double cost = 0.0;
    {
      const int n = config.pe_nodes;
      Point x(output.dim);
      if (output.dim == 1) {
        for (int i = 1; i <= n; ++i) {
          x(0) = bench.domain.low(0) + i * (bench.domain.high(0) - bench.domain.low(0)) / n;
          cost += bench.cost.cost(1, x);
        }
      } else {
        for (int i = 1; i <= n; ++i) {
          x(0) = bench.domain.low(0) + i * (bench.domain.high(0) - bench.domain.low(0)) / n;
          for (int j = 1; j <= n; ++j) {
            x(1) = bench.domain.low(1) + j * (bench.domain.high(1) - bench.domain.low(1)) / n;
            cost += bench.cost.cost(1, x);
          }
        }
      }
    }
    CsvRow row = model_row_defaults();
    row.iteration = 1;
    row.source = 1;
    row.cost = cost;
    row.cum_cost = cost;
    row.ez = estimate;
    row.rel_err = (estimate - bench.ground_truth) / bench.ground_truth;
    row.final_row = true;
    row.has_model = true;
    row.has_query = true;
    output.rows.push_back(std::move(row));
    return output;
  }

  // Bayesian-quadrature methods.
  const bool multi_source = config.method == Method::amsbq;
  const int loop_sources = multi_source ? bench.num_sources : 1;

  BlackBox box;
  box.num_sources = loop_sources;
  box.eval = bench.black_box.eval;

  CostModel cost_model;
  cost_model.floor_delta = bench.cost.floor_delta;
  for (int l = 0; l < loop_sources; ++l) cost_model.per_source.push_back(bench.cost.per_source[l]);

  LoopConfig loop;
  loop.budget = config.budget;
  // Vanilla BQ is cost-blind: all its sane acquisitions coincide, so the
  // canonical no-cost policy stands in for any of them.
  loop.kind = multi_source ? config.acquisition : AcquisitionKind::mi_no_cost;
  loop.acq_restarts = config.restarts;
  loop.fit_restarts = config.fit_restarts;
  loop.refit_restarts = config.refit_restarts;
  loop.seed = master.split(0x100).next_u64();
  loop.refit_each_step = config.refit;
  loop.max_iterations = config.max_iterations;
  const double mean_width = (bench.domain.high - bench.domain.low).mean();
  loop.lengthscale_prior = GammaPrior::from_mode(config.lengthscale_prior_mode_frac * mean_width,
                                                 config.lengthscale_prior_shape);
  loop.rank = config.rank;
  if (config.noise_override) {
    loop.noise.resize(loop_sources);
    for (int l = 0; l < loop_sources; ++l) {
      loop.noise[l] = config.noise[std::min<std::size_t>(l, config.noise.size() - 1)];
    }
  } else {
    loop.noise.assign(bench.default_noise.begin(), bench.default_noise.begin() + loop_sources);
  }

  const Dataset initial = bench.initial_design(multi_source, master.split(0x1D));
  const LoopResult result = run_loop(box, bench.domain, cost_model, loop, initial);

  const auto rel = [&](double ez) { return (ez - bench.ground_truth) / bench.ground_truth; };

  double cum = 0.0;
  for (int i = 0; i < initial.size(); ++i) {
    const auto& t = initial.triplets[i];
    CsvRow row = model_row_defaults();
    row.iteration = 0;
    row.source = t.source;
    row.x = t.x;
    row.y = t.y;
    row.cost = cost_model.cost(t.source, t.x);
    cum += row.cost;
    row.cum_cost = cum;
    row.has_query = true;
    if (i == initial.size() - 1) {
      row.has_model = true;
      row.ez = result.initial_posterior.mean;
      row.vz = result.initial_posterior.variance;
      row.rel_err = rel(row.ez);
      row.lambda = result.initial_hyper.lengthscale;
      const Eigen::MatrixXd b = result.initial_hyper.coregionalization();
      row.b_flat = Eigen::Map<const Eigen::VectorXd>(b.transpose().data(), b.size());
    }
    output.rows.push_back(std::move(row));
  }

  for (const auto& record : result.records) {
    CsvRow row = model_row_defaults();
    row.iteration = record.iteration;
    row.source = record.source;
    row.x = record.x;
    row.y = record.y;
    row.cost = record.cost;
    row.cum_cost = record.cum_cost;
    row.ez = record.integral_mean;
    row.vz = record.integral_variance;
    row.rel_err = rel(row.ez);
    row.acq_value = record.acq_value;
    row.lambda = record.hyper.lengthscale;
    const Eigen::MatrixXd b = record.hyper.coregionalization();
    row.b_flat = Eigen::Map<const Eigen::VectorXd>(b.transpose().data(), b.size());
    row.has_model = true;
    row.has_query = true;
    row.has_acq = true;
    output.rows.push_back(std::move(row));
  }
  if (!output.rows.empty()) output.rows.back().final_row = true;
  return output;
}

}  // namespace

double RunOutput::cost_to_tolerance(double threshold) const {
  for (const auto& row : rows) {
    if (row.has_model && std::abs(row.rel_err) < threshold) return row.cum_cost;
  }
  return kInf;
}

double RunOutput::final_abs_rel_err() const {
  double err = kNan;
  for (const auto& row : rows) {
    if (row.has_model) err = std::abs(row.rel_err);
  }
  return err;
}

int RunOutput::query_count(int source) const {
  int n = 0;
  for (const auto& row : rows) {
    if (row.has_query && row.source == source) ++n;
  }
  return n;
}

std::string render_csv(const RunOutput& output) {
  std::ostringstream os;
  os << "iter,source";
  for (int d = 0; d < output.dim; ++d) os << ",x" << d;
  os << ",y,cost,cum_cost,ez,vz,rel_err,acq_value,lambda";
  const int b_cols = output.num_sources * output.num_sources;
  for (int i = 0; i < b_cols; ++i) os << ",b_flat" << i;
  os << ",final,schema_version\n";

  for (const auto& row : output.rows) {
    os << row.iteration << ',' << row.source;
    for (int d = 0; d < output.dim; ++d) {
      os << ',' << (row.x.size() == output.dim ? format_g(row.x(d)) : "nan");
    }
    os << ',' << format_g(row.y) << ',' << format_g(row.cost) << ',' << format_g(row.cum_cost)
       << ',' << format_g(row.ez) << ',' << format_g(row.vz) << ',' << format_g(row.rel_err)
       << ',' << format_g(row.acq_value) << ',' << format_g(row.lambda);
    for (int i = 0; i < b_cols; ++i) {
      os << ',' << (row.b_flat.size() == b_cols ? format_g(row.b_flat(i)) : "nan");
    }
    os << ',' << (row.final_row ? 1 : 0) << ',' << kCsvSchemaVersion << '\n';
  }
  return os.str();
}

RunOutput run(const RunConfig& config) {
  RunOutput output = run_with_seed(config, config.seed);
  if (!config.out.empty()) {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write output file: " + config.out);
    file << render_csv(output);
  }
  return output;
}

void parallel_for(int count, const std::function<void(int)>& body, int max_threads) {
  if (count <= 0) return;
  int threads = max_threads > 0 ? max_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

CompareOutput compare(const std::vector<RunConfig>& configs) {
  if (configs.size() < 2) {
    throw std::invalid_argument("compare: need at least two run configurations");
  }
  for (const auto& config : configs) {
    validate(config);
    if (config.benchmark != configs.front().benchmark) {
      throw std::invalid_argument("compare: all configs must target the same benchmark");
    }
  }

  struct Job {
    int config_index;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const auto& config = configs[c];
    if (config.seeds.empty()) {
      jobs.push_back({static_cast<int>(c), config.seed});
    } else {
      for (auto s : config.seeds) jobs.push_back({static_cast<int>(c), s});
    }
  }

  std::vector<RunOutput> outputs(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int j) {
    RunConfig config = configs[jobs[j].config_index];
    config.out.clear();  // compare does not write per-run CSVs
    outputs[j] = run_with_seed(config, jobs[j].seed);
  });

  CompareOutput out;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const auto& config = configs[c];
    std::vector<double> cost_to_tol, final_err;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].config_index != static_cast<int>(c)) continue;
      cost_to_tol.push_back(outputs[j].cost_to_tolerance(config.threshold));
      final_err.push_back(outputs[j].final_abs_rel_err());
    }
    CompareRow row;
    row.label = to_string(config.method);
    if (config.method == Method::amsbq) row.label += "-" + to_string(config.acquisition);
    if (config.method == Method::amsbq && is_pathological(config.acquisition)) {
      row.label += "(pathological)";
    }
    row.benchmark = config.benchmark;
    row.method = config.method;
    row.acquisition = config.acquisition;
    row.num_seeds = static_cast<int>(cost_to_tol.size());
    row.threshold = config.threshold;
    row.median_cost_to_tolerance = median(cost_to_tol);
    row.median_final_rel_err = median(final_err);
    out.rows.push_back(row);
  }

  std::ostringstream table;
  table << "benchmark: " << configs.front().benchmark << "\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-14s %6s %12s %20s %18s\n", "config", "seeds", "threshold",
                "median_cost_to_tol", "median_final_err");
  table << line;
  for (const auto& row : out.rows) {
    std::snprintf(line, sizeof(line), "%-14s %6d %12s %20s %18s\n", row.label.c_str(),
                  row.num_seeds, format_g(row.threshold).c_str(),
                  format_g(row.median_cost_to_tolerance).c_str(),
                  format_g(row.median_final_rel_err).c_str());
    table << line;
  }
  out.table = table.str();

  std::ostringstream csv;
  csv << "config,benchmark,method,acquisition,pathological,seeds,threshold,median_cost_to_tol,"
         "median_final_rel_err,schema_version\n";
  for (const auto& row : out.rows) {
    const bool pathological = row.method == Method::amsbq && is_pathological(row.acquisition);
    csv << row.label << ',' << row.benchmark << ',' << to_string(row.method) << ','
        << to_string(row.acquisition) << ',' << (pathological ? 1 : 0) << ',' << row.num_seeds
        << ',' << format_g(row.threshold) << ',' << format_g(row.median_cost_to_tolerance) << ','
        << format_g(row.median_final_rel_err) << ',' << kCsvSchemaVersion << '\n';
  }
  out.csv = csv.str();
  return out;
}

}  // namespace amsbq
