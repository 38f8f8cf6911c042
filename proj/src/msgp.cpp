#include "amsbq/msgp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "amsbq/errors.hpp"
#include "amsbq/log.hpp"
#include "amsbq/optim.hpp"
#include "amsbq/rng.hpp"

namespace amsbq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454835606594728;

double floored_y_variance(const Dataset& data) {
  if (data.empty()) return 1.0;
  double mean = 0.0;
  for (const auto& t : data.triplets) mean += t.y;
  mean /= data.size();
  double var = 0.0;
  for (const auto& t : data.triplets) var += (t.y - mean) * (t.y - mean);
  var /= data.size();
  const double floor = 1e-6 + 0.01 * mean * mean;
  return std::max(var, floor);
}

}  // namespace

void Dataset::append(const ObservationTriplet& t) {
  if (t.source < 1) {
    throw std::invalid_argument("dataset: source index must be >= 1");
  }
  if (!triplets.empty() && t.x.size() != triplets.front().x.size()) {
    throw std::invalid_argument("dataset: inconsistent input dimension");
  }
  triplets.push_back(t);
}

int Dataset::count_source(int source) const {
  int n = 0;
  for (const auto& t : triplets) {
    if (t.source == source) ++n;
  }
  return n;
}

Eigen::MatrixXd Hyperparams::coregionalization() const {
  Eigen::MatrixXd b = W * W.transpose();
  b.diagonal() += eta;
  return b;
}

IcmKernel Hyperparams::kernel() const { return IcmKernel{RbfKernel{lengthscale}, W, eta}; }

GammaPrior GammaPrior::from_mode(double mode, double shape) {
  if (!(shape > 1.0) || !(mode > 0.0)) {
    throw std::invalid_argument("gamma prior: need shape > 1 and mode > 0");
  }
  return GammaPrior{shape, mode / (shape - 1.0)};
}

double GammaPrior::log_density(double x) const {
  if (!(x > 0.0)) return kNegInf;
  return (shape - 1.0) * std::log(x) - x / scale - shape * std::log(scale) - std::lgamma(shape);
}

double GammaPrior::d_log_density(double x) const { return (shape - 1.0) / x - 1.0 / scale; }

BPrior BPrior::weakly_informative(int num_sources, int rank, double y_var) {
  // Shared factor carrying 60% of the output scale, 40% independent: a pull
  // toward moderately positively correlated sources, which is what makes a
  // secondary source a secondary source in the first place. Strong enough
  // that a handful of seeding points cannot flip the correlation sign on
  // sampling noise alone, loose enough for the data to move the scales.
  BPrior b;
  b.w_mean = Eigen::MatrixXd::Zero(num_sources, rank);
  b.w_mean.col(0).setConstant(std::sqrt(0.6 * y_var));
  b.w_scale = std::max(0.5, 0.5 * std::sqrt(y_var));
  b.log_eta_mean = Eigen::VectorXd::Constant(num_sources, std::log(0.4 * y_var));
  b.log_eta_scale = 1.2;
  return b;
}

Hyperparams PriorSpec::center() const {
  Hyperparams h;
  h.lengthscale = lengthscale.shape > 1.0 ? lengthscale.mode() : lengthscale.scale;
  h.W = b.w_mean;
  h.eta = b.log_eta_mean.array().exp();
  h.noise_var.resize(num_sources());
  for (int l = 0; l < num_sources(); ++l) h.noise_var(l) = noise[l].value;
  return h;
}

Eigen::MatrixXd gram(const Dataset& data, const Hyperparams& hyper) {
  const int n = data.size();
  if (n < 1) throw std::invalid_argument("gram: need at least one observation");
  const int num_sources = hyper.num_sources();
  const Eigen::MatrixXd b = hyper.coregionalization();
  const double l2 = 2.0 * hyper.lengthscale * hyper.lengthscale;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& ti = data.triplets[i];
    if (ti.source > num_sources) {
      throw std::out_of_range("gram: triplet source " + std::to_string(ti.source) +
                              " exceeds model sources " + std::to_string(num_sources));
    }
    for (int j = 0; j <= i; ++j) {
      const auto& tj = data.triplets[j];
      const double k = std::exp(-(ti.x - tj.x).squaredNorm() / l2);
      double v = b(ti.source - 1, tj.source - 1) * k;
      if (i == j) v += hyper.noise_var(ti.source - 1);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& g, const JitterPolicy& policy) {
  const int n = static_cast<int>(g.rows());
  const double mean_diag = std::max(g.diagonal().mean(), 1e-300);
  double jitter = policy.initial_rel * mean_diag;
  const double max_jitter = policy.max_rel * mean_diag;
  while (true) {
    Eigen::MatrixXd work = g;
    work.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      return CholeskyResult{llt.matrixL(), jitter};
    }
    if (jitter >= max_jitter) {
      throw IllConditionedError("gram matrix of size " + std::to_string(n) +
                                " not factorizable even at jitter " + std::to_string(jitter));
    }
    jitter *= policy.growth;
  }
}

GpState::GpState(Dataset data, Hyperparams hyper, JitterPolicy policy)
    : data_(std::move(data)), hyper_(std::move(hyper)), policy_(policy) {
  kernel_ = hyper_.kernel();
  refactorize();
}

void GpState::refactorize() {
  const int n = data_.size();
  if (n == 0) {
    chol_lower_.resize(0, 0);
    alpha_.resize(0);
    jitter_ = 0.0;
    return;
  }
  auto chol = cholesky_with_jitter(gram(data_, hyper_), policy_);
  chol_lower_ = std::move(chol.lower);
  jitter_ = chol.jitter;
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = data_.triplets[i].y;
  alpha_ = chol_lower_.triangularView<Eigen::Lower>().solve(y);
  chol_lower_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
}

void GpState::append(const ObservationTriplet& t) {
  data_.append(t);
  const int n = data_.size();
  if (n == 1) {
    refactorize();
    return;
  }
  Eigen::VectorXd g = cross_vector(t.source, t.x);
  g.conservativeResize(n - 1);  // drop self-covariance appended by data_
  const double gamma = kernel_.eval(t.source, t.source, t.x, t.x) +
                       hyper_.noise_var(t.source - 1) + jitter_;
  Eigen::VectorXd w = chol_lower_.triangularView<Eigen::Lower>().solve(g);
  const double d2 = gamma - w.squaredNorm();
  if (!(d2 > 1e-12 * gamma)) {
    refactorize();
    return;
  }
  chol_lower_.conservativeResize(n, n);
  chol_lower_.row(n - 1).head(n - 1) = w.transpose();
  chol_lower_.col(n - 1).setZero();
  chol_lower_(n - 1, n - 1) = std::sqrt(d2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = data_.triplets[i].y;
  alpha_ = chol_lower_.triangularView<Eigen::Lower>().solve(y);
  chol_lower_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
}

void GpState::set_hyperparams(Hyperparams hyper) {
  hyper_ = std::move(hyper);
  kernel_ = hyper_.kernel();
  refactorize();
}

Eigen::VectorXd GpState::cross_vector(int source, const Point& x) const {
  const int n = data_.size();
  Eigen::VectorXd k(n);
  for (int i = 0; i < n; ++i) {
    k(i) = kernel_.eval(source, data_.triplets[i].source, x, data_.triplets[i].x);
  }
  return k;
}

Eigen::VectorXd GpState::solve_lower(const Eigen::VectorXd& rhs) const {
  return chol_lower_.triangularView<Eigen::Lower>().solve(rhs);
}

Eigen::MatrixXd GpState::solve_lower_matrix(const Eigen::MatrixXd& rhs) const {
  return chol_lower_.triangularView<Eigen::Lower>().solve(rhs);
}

Eigen::VectorXd GpState::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd v = chol_lower_.triangularView<Eigen::Lower>().solve(rhs);
  chol_lower_.triangularView<Eigen::Lower>().transpose().solveInPlace(v);
  return v;
}

GpState::MeanVar GpState::posterior(int source, const Point& x) const {
  const double prior_var = kernel_.eval(source, source, x, x);
  if (data_.empty()) {
    return MeanVar{0.0, prior_var};
  }
  const Eigen::VectorXd k = cross_vector(source, x);
  const Eigen::VectorXd v = solve_lower(k);
  const double mean = k.dot(alpha_);
  double variance = prior_var - v.squaredNorm();
  if (variance < 0.0) variance = 0.0;
  return MeanVar{mean, variance};
}

Eigen::MatrixXd GpState::posterior_cross_cov(int l, int lp, const std::vector<Point>& xs,
                                             const std::vector<Point>& xps) const {
  const int a = static_cast<int>(xs.size());
  const int b = static_cast<int>(xps.size());
  Eigen::MatrixXd prior(a, b);
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) {
      prior(i, j) = kernel_.eval(l, lp, xs[i], xps[j]);
    }
  }
  if (data_.empty()) return prior;
  const int n = data_.size();
  Eigen::MatrixXd ka(n, a), kb(n, b);
  for (int i = 0; i < a; ++i) ka.col(i) = cross_vector(l, xs[i]);
  for (int j = 0; j < b; ++j) kb.col(j) = cross_vector(lp, xps[j]);
  const Eigen::MatrixXd va = chol_lower_.triangularView<Eigen::Lower>().solve(ka);
  const Eigen::MatrixXd vb = chol_lower_.triangularView<Eigen::Lower>().solve(kb);
  return prior - va.transpose() * vb;
}

// ---------------------------------------------------------------------------
// MAP objective and fitting
// ---------------------------------------------------------------------------

namespace {

struct PackLayout {
  int num_sources = 0;
  int rank = 0;
  std::vector<int> learned_noise;  // 0-based source indices

  int size() const {
    return 1 + num_sources * rank + num_sources + static_cast<int>(learned_noise.size());
  }
};

PackLayout make_layout(const PriorSpec& priors) {
  PackLayout layout;
  layout.num_sources = priors.num_sources();
  layout.rank = priors.rank();
  for (int l = 0; l < layout.num_sources; ++l) {
    if (!priors.noise[l].fixed) layout.learned_noise.push_back(l);
  }
  return layout;
}

Eigen::VectorXd pack(const Hyperparams& h, const PackLayout& layout) {
  Eigen::VectorXd theta(layout.size());
  int at = 0;
  theta(at++) = std::log(h.lengthscale);
  for (int l = 0; l < layout.num_sources; ++l) {
    for (int r = 0; r < layout.rank; ++r) theta(at++) = h.W(l, r);
  }
  for (int l = 0; l < layout.num_sources; ++l) theta(at++) = std::log(h.eta(l));
  for (int l : layout.learned_noise) theta(at++) = std::log(std::max(h.noise_var(l), 1e-300));
  return theta;
}

Hyperparams unpack(const Eigen::VectorXd& theta, const PackLayout& layout,
                   const PriorSpec& priors) {
  Hyperparams h;
  int at = 0;
  h.lengthscale = std::exp(theta(at++));
  h.W.resize(layout.num_sources, layout.rank);
  for (int l = 0; l < layout.num_sources; ++l) {
    for (int r = 0; r < layout.rank; ++r) h.W(l, r) = theta(at++);
  }
  h.eta.resize(layout.num_sources);
  for (int l = 0; l < layout.num_sources; ++l) h.eta(l) = std::exp(theta(at++));
  h.noise_var.resize(layout.num_sources);
  for (int l = 0; l < layout.num_sources; ++l) h.noise_var(l) = priors.noise[l].value;
  for (int l : layout.learned_noise) h.noise_var(l) = std::exp(theta(at++));
  return h;
}

double log_prior(const Hyperparams& h, const PriorSpec& priors) {
  double lp = priors.lengthscale.log_density(h.lengthscale);
  const double ws2 = priors.b.w_scale * priors.b.w_scale;
  for (int l = 0; l < h.num_sources(); ++l) {
    for (int r = 0; r < h.rank(); ++r) {
      const double d = h.W(l, r) - priors.b.w_mean(l, r);
      lp += -0.5 * d * d / ws2 - 0.5 * kLog2Pi - std::log(priors.b.w_scale);
    }
  }
  const double es2 = priors.b.log_eta_scale * priors.b.log_eta_scale;
  for (int l = 0; l < h.num_sources(); ++l) {
    const double le = std::log(h.eta(l));
    const double d = le - priors.b.log_eta_mean(l);
    lp += -0.5 * d * d / es2 - le - 0.5 * kLog2Pi - std::log(priors.b.log_eta_scale);
  }
  for (int l = 0; l < h.num_sources(); ++l) {
    if (priors.noise[l].fixed) continue;
    // Weak log-normal around the configured starting value, scale 1.
    const double center = std::log(std::max(priors.noise[l].value, 1e-12));
    const double lv = std::log(std::max(h.noise_var(l), 1e-300));
    const double d = lv - center;
    lp += -0.5 * d * d - lv - 0.5 * kLog2Pi;
  }
  return lp;
}

// Value and (optionally) gradient of the MAP objective in packed
// coordinates. Returns -inf when the Gram matrix cannot be factorized.
double map_objective_packed(const Dataset& data, const Eigen::VectorXd& theta,
                            const PackLayout& layout, const PriorSpec& priors,
                            Eigen::VectorXd* grad) {
  if (!theta.allFinite()) return kNegInf;
  const Hyperparams h = unpack(theta, layout, priors);
  if (!(h.lengthscale > 0.0) || !std::isfinite(h.lengthscale)) return kNegInf;
  if (!h.W.allFinite()) return kNegInf;
  for (int l = 0; l < h.num_sources(); ++l) {
    if (!(h.eta(l) > 0.0) || !std::isfinite(h.eta(l))) return kNegInf;
    if (!(h.noise_var(l) >= 0.0) || !std::isfinite(h.noise_var(l))) return kNegInf;
  }
  const int n = data.size();
  const int num_sources = layout.num_sources;

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = data.triplets[i].source - 1;

  const Eigen::MatrixXd b = h.coregionalization();
  const double lam2 = h.lengthscale * h.lengthscale;
  Eigen::MatrixXd r2(n, n), kk(n, n), g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double d2 = (data.triplets[i].x - data.triplets[j].x).squaredNorm();
      const double k = std::exp(-d2 / (2.0 * lam2));
      r2(i, j) = r2(j, i) = d2;
      kk(i, j) = kk(j, i) = k;
      double v = b(idx[i], idx[j]) * k;
      if (i == j) v += h.noise_var(idx[i]);
      g(i, j) = g(j, i) = v;
    }
  }

  CholeskyResult chol;
  try {
    chol = cholesky_with_jitter(g);
  } catch (const IllConditionedError&) {
    return kNegInf;
  }
  g.diagonal().array() += chol.jitter;

  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = data.triplets[i].y;
  Eigen::VectorXd alpha = chol.lower.triangularView<Eigen::Lower>().solve(y);
  double log_det_half = chol.lower.diagonal().array().log().sum();
  const double data_term = -0.5 * alpha.squaredNorm() - log_det_half - 0.5 * n * kLog2Pi;
  chol.lower.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha);

  const double value = data_term + log_prior(h, priors);
  if (!std::isfinite(value)) return kNegInf;
  if (grad == nullptr) return value;

  // d loglik / d theta = 0.5 tr((alpha alpha^T - G^{-1}) dG/dtheta).
  Eigen::MatrixXd ginv = chol.lower.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(n, n));
  ginv = ginv.transpose() * ginv;
  const Eigen::MatrixXd p = alpha * alpha.transpose() - ginv;
  const Eigen::MatrixXd m = p.cwiseProduct(kk);

  grad->setZero(layout.size());
  int at = 0;

  // log-lengthscale
  {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        acc += m(i, j) * b(idx[i], idx[j]) * r2(i, j);
      }
    }
    (*grad)(at) = 0.5 * acc / lam2 +
                  priors.lengthscale.d_log_density(h.lengthscale) * h.lengthscale;
    ++at;
  }

  // W entries
  {
    Eigen::MatrixXd w_data(n, layout.rank);
    for (int i = 0; i < n; ++i) w_data.row(i) = h.W.row(idx[i]);
    const Eigen::MatrixXd mw = m * w_data;  // n x rank
    Eigen::MatrixXd gw = Eigen::MatrixXd::Zero(num_sources, layout.rank);
    for (int i = 0; i < n; ++i) gw.row(idx[i]) += mw.row(i);
    const double ws2 = priors.b.w_scale * priors.b.w_scale;
    gw -= (h.W - priors.b.w_mean) / ws2;
    for (int l = 0; l < num_sources; ++l) {
      for (int r = 0; r < layout.rank; ++r) (*grad)(at++) = gw(l, r);
    }
  }

  // log-eta
  {
    Eigen::VectorXd block_sum = Eigen::VectorXd::Zero(num_sources);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (idx[i] == idx[j]) block_sum(idx[i]) += m(i, j);
      }
    }
    const double es2 = priors.b.log_eta_scale * priors.b.log_eta_scale;
    for (int l = 0; l < num_sources; ++l) {
      const double le = std::log(h.eta(l));
      (*grad)(at++) = 0.5 * h.eta(l) * block_sum(l) -
                      (le - priors.b.log_eta_mean(l)) / es2 - 1.0;
    }
  }

  // learned log-noise
  for (int l : layout.learned_noise) {
    double diag_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (idx[i] == l) diag_sum += p(i, i);
    }
    const double center = std::log(std::max(priors.noise[l].value, 1e-12));
    const double lv = std::log(std::max(h.noise_var(l), 1e-300));
    (*grad)(at++) = 0.5 * h.noise_var(l) * diag_sum - (lv - center) - 1.0;
  }

  return value;
}

struct FitBounds {
  Eigen::VectorXd low;
  Eigen::VectorXd high;
};

FitBounds fit_bounds(const Dataset& data, const PackLayout& layout, const PriorSpec& priors) {
  const double y_var = floored_y_variance(data);
  const double y_scale = std::sqrt(y_var);
  FitBounds bounds;
  bounds.low.resize(layout.size());
  bounds.high.resize(layout.size());
  int at = 0;
  const double log_mode = std::log(priors.lengthscale.mode() > 0.0 ? priors.lengthscale.mode()
                                                                   : priors.lengthscale.scale);
  bounds.low(at) = log_mode - 6.0;
  bounds.high(at) = log_mode + 4.0;
  ++at;
  const double w_bound =
      std::max(20.0 * y_scale, priors.b.w_mean.cwiseAbs().maxCoeff() + 10.0 * priors.b.w_scale);
  for (int i = 0; i < layout.num_sources * layout.rank; ++i) {
    bounds.low(at) = -w_bound;
    bounds.high(at) = w_bound;
    ++at;
  }
  for (int l = 0; l < layout.num_sources; ++l) {
    bounds.low(at) = priors.b.log_eta_mean(l) - 12.0;
    bounds.high(at) = priors.b.log_eta_mean(l) + 8.0;
    ++at;
  }
  for (int l : layout.learned_noise) {
    const double center = std::log(std::max(priors.noise[l].value, 1e-12));
    bounds.low(at) = center - 10.0;
    bounds.high(at) = center + 6.0;
    ++at;
  }
  return bounds;
}

}  // namespace

double log_map_objective(const Dataset& data, const Hyperparams& hyper, const PriorSpec& priors) {
  if (data.empty()) throw std::invalid_argument("log_map_objective: empty dataset");
  const PackLayout layout = make_layout(priors);
  return map_objective_packed(data, pack(hyper, layout), layout, priors, nullptr);
}

double log_map_objective_packed(const Dataset& data, const Eigen::VectorXd& theta,
                                const PriorSpec& priors, Eigen::VectorXd* grad) {
  if (data.empty()) throw std::invalid_argument("log_map_objective: empty dataset");
  return map_objective_packed(data, theta, make_layout(priors), priors, grad);
}

Eigen::VectorXd pack_hyperparams(const Hyperparams& hyper, const PriorSpec& priors) {
  return pack(hyper, make_layout(priors));
}

Hyperparams unpack_hyperparams(const Eigen::VectorXd& theta, const PriorSpec& priors) {
  return unpack(theta, make_layout(priors), priors);
}

FitResult fit(const Dataset& data, const PriorSpec& priors, const FitOptions& options) {
  if (data.empty()) throw std::invalid_argument("fit: empty dataset");
  const PackLayout layout = make_layout(priors);
  const FitBounds bounds = fit_bounds(data, layout, priors);

  auto objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
    return map_objective_packed(data, theta, layout, priors, grad);
  };

  BoxOptimOptions opt;
  opt.max_iterations = options.max_iterations;
  opt.gradient_tol = 1e-7;

  const Hyperparams center = priors.center();
  Rng rng = Rng(options.seed).split(0xF17);

  FitResult best;
  best.hyper = options.warm_start != nullptr ? *options.warm_start : center;
  best.objective = kNegInf;
  best.all_restarts_failed = true;

  for (int r = 0; r < std::max(options.restarts, 1); ++r) {
    Eigen::VectorXd start;
    if (r == 0) {
      start = pack(options.warm_start != nullptr ? *options.warm_start : center, layout);
    } else if (r == 1 && options.warm_start != nullptr) {
      start = pack(center, layout);
    } else {
      Rng draw = rng.split(r);
      start = pack(center, layout);
      start(0) += 0.8 * draw.normal();
      int at = 1;
      for (int i = 0; i < layout.num_sources * layout.rank; ++i) {
        start(at++) += 2.0 * priors.b.w_scale * draw.normal();
      }
      for (int l = 0; l < layout.num_sources; ++l) {
        start(at++) += 2.0 * priors.b.log_eta_scale * draw.normal();
      }
      for (std::size_t i = 0; i < layout.learned_noise.size(); ++i) {
        start(at++) += draw.normal();
      }
    }
    const BoxOptimResult res = maximize_box(objective, start, bounds.low, bounds.high, opt);
    if (std::isfinite(res.value) && res.value > best.objective) {
      best.objective = res.value;
      best.hyper = unpack(res.x, layout, priors);
      best.all_restarts_failed = false;
    }
  }

  if (best.all_restarts_failed) {
    log_warn("hyperparameter fit: all restarts failed; keeping previous values");
    best.objective = kNegInf;
  }
  return best;
}

BPrior empirical_bayes_b_prior(const Dataset& initial, int num_sources, int rank,
                               const GammaPrior& lengthscale_prior,
                               const std::vector<NoiseSpec>& noise, std::uint64_t seed) {
  const double y_var = floored_y_variance(initial);
  bool enough = initial.size() >= 2;
  for (int l = 1; l <= num_sources; ++l) {
    enough = enough && initial.count_source(l) >= 1;
  }
  if (!enough) {
    log_warn("empirical Bayes B prior: too few initial points, using the default prior");
    BPrior fallback = BPrior::weakly_informative(num_sources, rank, y_var);
    fallback.fallback = true;
    return fallback;
  }

  PriorSpec weak;
  weak.lengthscale = lengthscale_prior;
  weak.b = BPrior::weakly_informative(num_sources, rank, y_var);
  weak.noise = noise;

  FitOptions options;
  options.restarts = 6;
  options.seed = seed;
  options.max_iterations = 150;
  const FitResult fitted = fit(initial, weak, options);

  BPrior out;
  out.w_mean = fitted.hyper.W;
  out.w_scale = 0.5;
  out.log_eta_mean = fitted.hyper.eta.array().log();
  out.log_eta_scale = 0.5;
  out.fallback = fitted.all_restarts_failed;
  return out;
}

}  // namespace amsbq
