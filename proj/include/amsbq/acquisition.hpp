#ifndef AMSBQ_ACQUISITION_HPP
#define AMSBQ_ACQUISITION_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "amsbq/kernels.hpp"
#include "amsbq/msgp.hpp"
#include "amsbq/quadrature.hpp"
#include "amsbq/rng.hpp"

namespace amsbq {

/// Per-source query cost c_l(x) in [delta, 1]; batch cost is additive.
struct CostModel {
  double floor_delta = 1e-3;
  std::vector<std::function<double(const Point&)>> per_source;

  int num_sources() const { return static_cast<int>(per_source.size()); }
  double cost(int source, const Point& x) const;
  double batch_cost(const CandidateBatch& candidates) const;

  static CostModel constant(const std::vector<double>& values);
  static CostModel uniform(int num_sources, double value = 1.0);
};

enum class AcquisitionKind { mi, ivr, ip, mi_no_cost, ivr_no_cost };

bool is_no_cost(AcquisitionKind kind);
/// True for the integral-precision rate, which is known to misbehave under
/// cost (it keeps re-evaluating wherever the cost is minimal).
bool is_pathological(AcquisitionKind kind);
std::string to_string(AcquisitionKind kind);
AcquisitionKind parse_acquisition(const std::string& name);

/// Mutual-information rate -log(1 - rho^2)/cost. Returns +infinity once
/// rho^2 >= 1 - 1e-12: a perfect step is always taken.
double rate_mi(double rho2, double cost);

/// Integral-variance-reduction rate rho^2/cost; finite at rho^2 = 1.
double rate_ivr(double rho2, double cost);

/// Integral-precision rate 1/((1 - rho^2) cost), omitting the constant
/// 1/V[Z|D] factor which cannot move the argmax at a fixed dataset.
/// Nonzero at rho^2 = 0: pathological under cost.
double rate_ip(double rho2, double integral_variance, double cost);

/// Squared-correlation field over (source, location); the GP-backed version
/// comes from IntegralContext, tests may substitute synthetic profiles.
using RhoField = std::function<double(int source, const Point& x)>;

struct AcquisitionChoice {
  int source = 0;  // 0 when terminate is set
  Point x;
  double rate = 0.0;
  double rho2 = 0.0;
  double cost = 0.0;
  bool perfect_step = false;
  bool terminate = false;  // every start produced rate 0
};

/// Myopic maximization of the acquisition rate: per source, multi-start
/// bounded quasi-Newton over the box (boundary corners plus uniform random
/// starts), then the argmax across sources. Ties break toward the cheaper
/// source, then the lower index. Deterministic given the rng stream.
AcquisitionChoice maximize_rate(const RhoField& rho2_field, const CostModel& cost,
                                AcquisitionKind kind, const IntegrationMeasure& pi,
                                int num_sources, double integral_variance, int restarts,
                                Rng rng);

AcquisitionChoice optimize_myopic(const GpState& state, const IntegrationMeasure& pi,
                                  const CostModel& cost, AcquisitionKind kind, int restarts,
                                  Rng rng);

/// The set of queryable sources.
struct BlackBox {
  int num_sources = 1;
  std::function<double(int source, const Point& x, Rng& rng)> eval;
};

struct LoopConfig {
  double budget = 0.0;
  AcquisitionKind kind = AcquisitionKind::mi;
  int acq_restarts = 10;
  int fit_restarts = 5;    // initial fit
  int refit_restarts = 2;  // per-step refits: warm start plus fresh starts
  std::uint64_t seed = 0;
  bool refit_each_step = true;
  int max_iterations = 10000;
  GammaPrior lengthscale_prior{2.0, 0.05};
  std::vector<NoiseSpec> noise;  // per source; sized by the caller
  int rank = 0;                  // coregionalization rank; 0 means full (L)
};

struct LoopRecord {
  int iteration = 0;
  int source = 0;
  Point x;
  double y = 0.0;
  double cost = 0.0;
  double cum_cost = 0.0;
  double integral_mean = 0.0;
  double integral_variance = 0.0;
  double acq_value = 0.0;
  Hyperparams hyper;
};

struct LoopResult {
  std::vector<LoopRecord> records;
  Dataset data;
  Hyperparams hyper;
  BPrior b_prior;
  Hyperparams initial_hyper;
  IntegralPosterior initial_posterior;
  double initial_cost = 0.0;
  bool budget_exhausted = false;
  bool terminated = false;       // fully-explained model signal
  std::string query_error;       // non-empty when a black-box query failed
};

/// The active loop: select with optimize_myopic, query, append, refit, log;
/// stops when the budget is spent, the model signals termination, or a query
/// fails (partial log is kept). Cumulative cost never exceeds budget plus
/// the cost of the final accepted query.
LoopResult run_loop(const BlackBox& sources, const IntegrationMeasure& pi, const CostModel& cost,
                    const LoopConfig& config, const Dataset& initial);

}  // namespace amsbq

#endif
