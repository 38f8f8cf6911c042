#ifndef AMSBQ_BENCHMARKS_HPP
#define AMSBQ_BENCHMARKS_HPP

#include <string>
#include <vector>

#include "amsbq/acquisition.hpp"
#include "amsbq/gaussmix.hpp"
#include "amsbq/kernels.hpp"
#include "amsbq/msgp.hpp"
#include "amsbq/rng.hpp"
#include "amsbq/sir.hpp"

namespace amsbq {

enum class ForresterVariant { classic, wigglified };

/// The two-source Forrester pair on [0,1]:
///   classic     f1 = (6x-2)^2 sin(12x-4),                 f2 = f1/2 + 10x
///   wigglified  f1 = (6x-2)^2 sin(12x-4) - (2-x)^2 sin(36x),
///               f2 = 3/4 f1 + 16(x - 1/2) + 10
double forrester_eval(ForresterVariant variant, int source, double x);

/// Sum-of-logistics query costs, normalized into (0,1]. The classic pair is
/// near-equal at x ~ 0 and two orders apart for large x; the wigglified
/// secondary cost has an interior minimum (near x = 0.554).
double forrester_cost(ForresterVariant variant, int source, double x);

/// Equal-probability-mass node estimator; a right Riemann sum under the
/// uniform measure (tensorized for dim > 1).
double percentile_estimate(const std::function<double(const Point&)>& f,
                           const IntegrationMeasure& pi, int nodes_per_dim);

struct BenchmarkOptions {
  int sir_reps = 100;  // Gillespie repetitions per primary query
};

/// A registered experiment: sources, domain, costs, the deterministic
/// ground truth of <f1>, and the seeding conventions.
struct Benchmark {
  std::string id;
  int num_sources = 1;
  IntegrationMeasure domain;
  CostModel cost;
  BlackBox black_box;
  double ground_truth = 0.0;
  std::vector<NoiseSpec> default_noise;
  bool paired_initial_design = false;

  /// Seeded initial design, evaluated through the black box. The
  /// single-source design uses three primary points. Multi-source designs
  /// co-locate points across sources so the initial correlation is
  /// identifiable: either one primary location shared with the secondaries
  /// plus one extra secondary location, or (paired_initial_design) all
  /// sources at two nearby locations.
  Dataset initial_design(bool multi_source, Rng rng) const;
};

std::vector<std::string> benchmark_ids();
bool benchmark_exists(const std::string& id);
Benchmark make_benchmark(const std::string& id, const BenchmarkOptions& options = {});

/// Seed that pins the published gauss2d source functions.
inline constexpr std::uint64_t kGaussMixtureExperimentSeed = 20240;

}  // namespace amsbq

#endif
