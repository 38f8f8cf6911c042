#include "amsbq/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "amsbq/errors.hpp"
#include "amsbq/log.hpp"
#include "amsbq/optim.hpp"

namespace amsbq {

namespace {

constexpr double kPerfectRho2 = 1.0 - 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_rho2(double rho2) {
  if (!(rho2 >= 0.0) || rho2 > 1.0) {
    throw std::invalid_argument("acquisition rate: rho^2 = " + std::to_string(rho2) +
                                " outside [0,1]");
  }
}

void check_cost(double cost) {
  if (!(cost > 0.0)) {
    throw std::invalid_argument("acquisition rate: cost must be positive, got " +
                                std::to_string(cost));
  }
}

}  // namespace

double CostModel::cost(int source, const Point& x) const {
  if (source < 1 || source > num_sources()) {
    throw std::out_of_range("cost model: source index " + std::to_string(source));
  }
  return per_source[source - 1](x);
}

double CostModel::batch_cost(const CandidateBatch& candidates) const {
  double total = 0.0;
  for (int j = 0; j < candidates.size(); ++j) {
    total += cost(candidates.sources[j], candidates.locations[j]);
  }
  return total;
}

CostModel CostModel::constant(const std::vector<double>& values) {
  CostModel model;
  model.floor_delta = *std::min_element(values.begin(), values.end());
  for (double v : values) {
    model.per_source.push_back([v](const Point&) { return v; });
  }
  return model;
}

CostModel CostModel::uniform(int num_sources, double value) {
  return constant(std::vector<double>(num_sources, value));
}

bool is_no_cost(AcquisitionKind kind) {
  return kind == AcquisitionKind::mi_no_cost || kind == AcquisitionKind::ivr_no_cost;
}

bool is_pathological(AcquisitionKind kind) { return kind == AcquisitionKind::ip; }

std::string to_string(AcquisitionKind kind) {
  switch (kind) {
    case AcquisitionKind::mi: return "mi";
    case AcquisitionKind::ivr: return "ivr";
    case AcquisitionKind::ip: return "ip";
    case AcquisitionKind::mi_no_cost: return "mi-no-cost";
    case AcquisitionKind::ivr_no_cost: return "ivr-no-cost";
  }
  return "?";
}

AcquisitionKind parse_acquisition(const std::string& name) {
  if (name == "mi") return AcquisitionKind::mi;
  if (name == "ivr") return AcquisitionKind::ivr;
  if (name == "ip") return AcquisitionKind::ip;
  if (name == "mi-no-cost") return AcquisitionKind::mi_no_cost;
  if (name == "ivr-no-cost") return AcquisitionKind::ivr_no_cost;
  throw std::invalid_argument("unknown acquisition kind: " + name);
}

double rate_mi(double rho2, double cost) {
  check_rho2(rho2);
  check_cost(cost);
  if (rho2 >= kPerfectRho2) return kInf;
  return -std::log1p(-rho2) / cost;
}

double rate_ivr(double rho2, double cost) {
  check_rho2(rho2);
  check_cost(cost);
  return rho2 / cost;
}

double rate_ip(double rho2, double integral_variance, double cost) {
  check_rho2(rho2);
  check_cost(cost);
  (void)integral_variance;  // constant at fixed data; dropped (argmax unchanged)
  if (rho2 >= kPerfectRho2) return kInf;
  return 1.0 / ((1.0 - rho2) * cost);
}

namespace {

// Objective handed to the local optimizer. The no-cost kinds all maximize
// rho^2 itself (every sane no-cost acquisition is a monotone transform of
// it, so this makes their policies coincide bit-exactly). MI/IP values are
// capped at the perfect-step threshold so the surface stays finite; among
// perfect steps the cap still prefers the cheaper location.
double optimizer_value(AcquisitionKind kind, double rho2, double cost, double vz) {
  const double capped = std::min(rho2, kPerfectRho2);
  switch (kind) {
    case AcquisitionKind::mi: return -std::log1p(-capped) / cost;
    case AcquisitionKind::ivr: return rho2 / cost;
    case AcquisitionKind::ip: return rate_ip(capped, vz, cost);
    case AcquisitionKind::mi_no_cost:
    case AcquisitionKind::ivr_no_cost: return rho2;
  }
  return 0.0;
}

double reported_rate(AcquisitionKind kind, double rho2, double cost, double vz) {
  switch (kind) {
    case AcquisitionKind::mi: return rate_mi(rho2, cost);
    case AcquisitionKind::ivr: return rate_ivr(rho2, cost);
    case AcquisitionKind::ip: return rate_ip(rho2, vz, cost);
    case AcquisitionKind::mi_no_cost: return rate_mi(rho2, 1.0);
    case AcquisitionKind::ivr_no_cost: return rate_ivr(rho2, 1.0);
  }
  return 0.0;
}

}  // namespace

AcquisitionChoice maximize_rate(const RhoField& rho2_field, const CostModel& cost,
                                AcquisitionKind kind, const IntegrationMeasure& pi,
                                int num_sources, double integral_variance, int restarts,
                                Rng rng) {
  const int dim = pi.dim();
  AcquisitionChoice best;
  double best_value = -kInf;

  std::vector<Point> corner_starts;
  const int corners = dim <= 4 ? (1 << dim) : 0;
  for (int c = 0; c < corners; ++c) {
    Point p(dim);
    for (int d = 0; d < dim; ++d) p(d) = (c >> d) & 1 ? pi.high(d) : pi.low(d);
    corner_starts.push_back(p);
  }

  BoxOptimOptions opt;
  opt.max_iterations = 60;
  opt.gradient_tol = 1e-10;

  for (int source = 1; source <= num_sources; ++source) {
    // Restart locations are shared across sources: every source is probed
    // from the same start set before the cross-source argmax.
    Rng source_rng = rng.split(0x57A27);
    auto value_at = [&](const Eigen::VectorXd& x) {
      const double rho2 = rho2_field(source, x);
      const double c = is_no_cost(kind) ? 1.0 : cost.cost(source, x);
      return optimizer_value(kind, rho2, c, integral_variance);
    };

    for (int start = 0; start < std::max(restarts, 1); ++start) {
      Point x0(dim);
      if (start < static_cast<int>(corner_starts.size())) {
        x0 = corner_starts[start];
      } else {
        for (int d = 0; d < dim; ++d) x0(d) = source_rng.uniform(pi.low(d), pi.high(d));
      }
      const BoxOptimResult local = maximize_box_fd(value_at, x0, pi.low, pi.high, opt);
      if (!std::isfinite(local.value)) continue;

      const double rho2 = rho2_field(source, local.x);
      const double query_cost = cost.cost(source, local.x);
      const double value = optimizer_value(kind, rho2, is_no_cost(kind) ? 1.0 : query_cost,
                                           integral_variance);
      const bool better =
          value > best_value ||
          (value == best_value && best.source != 0 &&
           (query_cost < best.cost || (query_cost == best.cost && source < best.source)));
      if (better) {
        best_value = value;
        best.source = source;
        best.x = local.x;
        best.rho2 = rho2;
        best.cost = query_cost;
      }
    }
  }

  if (best.source == 0 || best_value <= 0.0) {
    AcquisitionChoice out;
    out.terminate = true;
    return out;
  }
  best.perfect_step = best.rho2 >= kPerfectRho2;
  best.rate = reported_rate(kind, best.rho2, best.cost, integral_variance);
  return best;
}

AcquisitionChoice optimize_myopic(const GpState& state, const IntegrationMeasure& pi,
                                  const CostModel& cost, AcquisitionKind kind, int restarts,
                                  Rng rng) {
  const IntegralContext ctx(state, pi);
  if (ctx.posterior().variance <= 10.0 * kIntegralVarianceFloor) {
    AcquisitionChoice out;
    out.terminate = true;
    return out;
  }
  RhoField field = [&ctx](int source, const Point& x) { return ctx.rho_squared(source, x); };
  return maximize_rate(field, cost, kind, pi, state.hyper().num_sources(),
                       ctx.posterior().variance, restarts, rng);
}

LoopResult run_loop(const BlackBox& sources, const IntegrationMeasure& pi, const CostModel& cost,
                    const LoopConfig& config, const Dataset& initial) {
  if (initial.empty()) {
    throw std::invalid_argument("run_loop: initial dataset must be non-empty");
  }
  const int num_sources = sources.num_sources;
  if (static_cast<int>(config.noise.size()) != num_sources) {
    throw std::invalid_argument("run_loop: noise config must cover every source");
  }
  for (const auto& t : initial.triplets) {
    if (t.source > num_sources) {
      throw std::invalid_argument("run_loop: initial triplet references unknown source");
    }
    if (!pi.contains(t.x)) {
      throw std::invalid_argument("run_loop: initial location outside the domain");
    }
  }

  Rng master(config.seed);
  const int rank = config.rank > 0 ? config.rank : num_sources;

  LoopResult result;
  result.initial_cost = 0.0;
  for (const auto& t : initial.triplets) result.initial_cost += cost.cost(t.source, t.x);

  PriorSpec priors;
  priors.lengthscale = config.lengthscale_prior;
  priors.noise = config.noise;
  priors.b = empirical_bayes_b_prior(initial, num_sources, rank, priors.lengthscale,
                                     priors.noise, master.split(0xEB).next_u64());
  result.b_prior = priors.b;

  FitOptions fit_options;
  fit_options.restarts = config.fit_restarts;
  fit_options.seed = master.split(0xF0).next_u64();
  const FitResult initial_fit = fit(initial, priors, fit_options);

  GpState state(initial, initial_fit.hyper);
  result.initial_hyper = initial_fit.hyper;
  result.initial_posterior = integral_posterior(state, pi);

  double cum_cost = result.initial_cost;
  if (config.budget < result.initial_cost) {
    log_warn("run_loop: budget does not cover the initial design; no queries made");
  }

  for (int iter = 1; iter <= config.max_iterations && cum_cost < config.budget; ++iter) {
    const AcquisitionChoice choice = optimize_myopic(state, pi, cost, config.kind,
                                                     config.acq_restarts, master.split(0xAC, iter));
    if (choice.terminate) {
      result.terminated = true;
      break;
    }

    double y = 0.0;
    try {
      Rng query_rng = master.split(0x0B5, iter);
      y = sources.eval(choice.source, choice.x, query_rng);
    } catch (const std::exception& e) {
      result.query_error = e.what();
      log_warn(std::string("run_loop: query failed, halting: ") + e.what());
      break;
    }

    cum_cost += choice.cost;
    state.append(ObservationTriplet{choice.source, choice.x, y});

    if (config.refit_each_step) {
      FitOptions refit;
      refit.restarts = config.refit_restarts;
      refit.seed = master.split(0xF1, iter).next_u64();
      refit.warm_start = &state.hyper();
      const FitResult refitted = fit(state.data(), priors, refit);
      if (!refitted.all_restarts_failed) {
        state.set_hyperparams(refitted.hyper);
      }
    }

    const IntegralPosterior post = integral_posterior(state, pi);
    LoopRecord record;
    record.iteration = iter;
    record.source = choice.source;
    record.x = choice.x;
    record.y = y;
    record.cost = choice.cost;
    record.cum_cost = cum_cost;
    record.integral_mean = post.mean;
    record.integral_variance = post.variance;
    record.acq_value = choice.rate;
    record.hyper = state.hyper();
    result.records.push_back(std::move(record));
  }

  result.budget_exhausted = cum_cost >= config.budget;
  result.data = state.data();
  result.hyper = state.hyper();
  return result;
}

}  // namespace amsbq
