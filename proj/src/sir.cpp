#include "amsbq/sir.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "amsbq/errors.hpp"
#include "amsbq/log.hpp"

namespace amsbq {

namespace {

using StateVec = std::vector<double>;
using OdeRhs = std::function<void(double, const StateVec&, StateVec&)>;

struct Rk45Step {
  double t0 = 0.0, t1 = 0.0;
  StateVec y0, y1, f0, f1;
};

// Cubic Hermite interpolation inside one accepted step.
StateVec hermite(const Rk45Step& s, double t) {
  const double h = s.t1 - s.t0;
  const double u = (t - s.t0) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  StateVec out(s.y0.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = h00 * s.y0[i] + h * h10 * s.f0[i] + h01 * s.y1[i] + h * h11 * s.f1[i];
  }
  return out;
}

// Dormand-Prince 5(4) with FSAL; calls `on_step` after every accepted step
// and stops early when it returns false.
void rk45(const OdeRhs& rhs, StateVec y, double t0, double t_end,
          const std::function<bool(const Rk45Step&)>& on_step, double rel_tol = 1e-8,
          double abs_tol = 1e-10, double max_step = 0.0) {
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                      e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  const std::size_t n = y.size();
  StateVec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);
  rhs(t0, y, k1);

  double t = t0;
  double h = (t_end - t0) / 100.0;
  if (max_step > 0.0) h = std::min(h, max_step);
  int steps = 0;
  const int max_steps = 1000000;

  while (t < t_end) {
    if (++steps > max_steps) {
      throw std::runtime_error("rk45: step control failed (too many steps)");
    }
    h = std::min(h, t_end - t);

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, y_new, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
      const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(ei) / scale);
    }

    if (err <= 1.0) {
      Rk45Step step;
      step.t0 = t;
      step.t1 = t + h;
      step.y0 = y;
      step.y1 = y_new;
      step.f0 = k1;
      step.f1 = k7;
      t += h;
      y = y_new;
      k1 = k7;
      if (!on_step(step)) return;
    }
    const double factor =
        err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
    h *= factor;
    if (max_step > 0.0) h = std::min(h, max_step);
  }
}

OdeRhs sir_rhs(const SirParams& p) {
  return [p](double, const StateVec& y, StateVec& dy) {
    const double infection = p.a() * y[0] * y[1] / p.population;
    dy[0] = -infection;
    dy[1] = infection - p.b * y[1];
    dy[2] = p.b * y[1];
  };
}

OdeRhs seir_rhs(const SirParams& p) {
  return [p](double, const StateVec& y, StateVec& dy) {
    const double infection = p.a() * y[0] * y[2] / p.population;
    dy[0] = -infection;
    dy[1] = infection - p.gamma() * y[1];
    dy[2] = p.gamma() * y[1] - p.b * y[2];
    dy[3] = p.b * y[2];
  };
}

OdeSolution solve_on_grid(const OdeRhs& rhs, StateVec y0, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("ode: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw std::invalid_argument("ode: time grid must be strictly increasing");
    }
  }
  OdeSolution sol;
  sol.t = t_grid;
  sol.y.resize(t_grid.size());
  std::size_t next = 0;
  while (next < t_grid.size() && t_grid[next] <= 0.0) {
    sol.y[next] = y0;
    ++next;
  }
  if (next == t_grid.size()) return sol;

  const double t_end = t_grid.back();
  rk45(rhs, y0, 0.0, t_end, [&](const Rk45Step& step) {
    while (next < sol.t.size() && sol.t[next] <= step.t1 + 1e-14) {
      sol.y[next] = hermite(step, std::min(sol.t[next], step.t1));
      ++next;
    }
    return next < sol.t.size();
  });
  while (next < sol.t.size()) {
    sol.y[next] = sol.y[next - 1];
    ++next;
  }
  return sol;
}

}  // namespace

OdeSolution ode_sir(const SirParams& params, const std::vector<double>& t_grid) {
  StateVec y0 = {static_cast<double>(params.population - params.initial_infected),
                 static_cast<double>(params.initial_infected), 0.0};
  return solve_on_grid(sir_rhs(params), y0, t_grid);
}

OdeSolution ode_seir(const SirParams& params, const std::vector<double>& t_grid) {
  StateVec y0 = {static_cast<double>(params.initial_susceptible()),
                 static_cast<double>(params.initial_exposed),
                 static_cast<double>(params.initial_infected), 0.0};
  return solve_on_grid(seir_rhs(params), y0, t_grid);
}

OdePeak ode_sir_peak(const SirParams& params) {
  StateVec y0 = {static_cast<double>(params.population - params.initial_infected),
                 static_cast<double>(params.initial_infected), 0.0};
  OdePeak peak{y0[1], 0.0};
  const double horizon = 400.0 / params.b;

  rk45(sir_rhs(params), y0, 0.0, horizon, [&](const Rk45Step& step) {
    // Sample the Hermite interpolant densely, then refine with a
    // three-point parabola around the best sample.
    const int samples = 16;
    double best_t = step.t1, best_i = step.y1[1];
    for (int s = 0; s <= samples; ++s) {
      const double t = step.t0 + (step.t1 - step.t0) * s / samples;
      const double value = hermite(step, t)[1];
      if (value > best_i) {
        best_i = value;
        best_t = t;
      }
    }
    if (best_i > peak.max_infected) {
      const double dt = (step.t1 - step.t0) / samples;
      const double tl = std::max(step.t0, best_t - dt), tr = std::min(step.t1, best_t + dt);
      const double fl = hermite(step, tl)[1], fr = hermite(step, tr)[1];
      double t_ref = best_t;
      const double denom = fl - 2.0 * best_i + fr;
      if (tl < best_t && best_t < tr && denom < 0.0) {
        t_ref = best_t - 0.5 * dt * (fr - fl) / denom;
        t_ref = std::clamp(t_ref, tl, tr);
      }
      const double f_ref = hermite(step, t_ref)[1];
      if (f_ref >= best_i) {
        peak.max_infected = f_ref;
        peak.time_of_max = t_ref;
      } else {
        peak.max_infected = best_i;
        peak.time_of_max = best_t;
      }
    }
    const bool dying = step.y1[1] < 1e-4 && step.f1[1] < 0.0;
    return !dying;
  });
  return peak;
}

GillespieResult gillespie_seir(const SirParams& params, Rng& rng) {
  GillespieResult result;
  int s = params.initial_susceptible();
  int e = params.initial_exposed;
  int i = params.initial_infected;
  int r = 0;
  double t = 0.0;
  result.trajectory.push_back(SeirState{t, s, e, i, r});
  result.max_infected = i;
  result.time_of_max = 0.0;

  const double a = params.a();
  const double gamma = params.gamma();
  const double n = static_cast<double>(params.population);

  while (true) {
    const double rate_infect = a * s * i / n;
    const double rate_progress = gamma * e;
    const double rate_recover = params.b * i;
    const double total = rate_infect + rate_progress + rate_recover;
    if (total <= 0.0) break;

    t += rng.exponential(total);
    const double pick = rng.uniform() * total;
    if (pick < rate_infect) {
      --s;
      ++e;
      result.outbreak = true;
    } else if (pick < rate_infect + rate_progress) {
      --e;
      ++i;
      if (i > result.max_infected) {
        result.max_infected = i;
        result.time_of_max = t;
      }
    } else {
      --i;
      ++r;
    }
    result.trajectory.push_back(SeirState{t, s, e, i, r});
    if (e + i == 0) break;
  }
  return result;
}

SeirState trajectory_at(const std::vector<SeirState>& trajectory, double t) {
  SeirState out = trajectory.front();
  for (const auto& state : trajectory) {
    if (state.t > t) break;
    out = state;
  }
  out.t = t;
  return out;
}

double a_over_b_prior_density(double a_over_b) {
  const double z = a_over_b - 1.0;
  if (z < 0.0) return 0.0;
  // gamma(shape 5, scale 4): z^4 e^{-z/4} / (Gamma(5) 4^5)
  return z * z * z * z * std::exp(-z / 4.0) / (24.0 * 1024.0);
}

double sir_integrand(int source, double a_over_b, SirQoi qoi, int reps, Rng& rng) {
  if (source != 1 && source != 2) {
    throw std::invalid_argument("sir_integrand: source must be 1 or 2");
  }
  if (!(a_over_b >= kSirDomainLow && a_over_b <= kSirDomainHigh)) {
    throw std::invalid_argument("sir_integrand: a/b outside the truncated domain");
  }
  SirParams params;
  params.a_over_b = a_over_b;

  const double weight =
      a_over_b_prior_density(a_over_b) * (kSirDomainHigh - kSirDomainLow);

  if (source == 2) {
    const OdePeak peak = ode_sir_peak(params);
    const double qoi_value = qoi == SirQoi::max_infected ? peak.max_infected : peak.time_of_max;
    return qoi_value * weight;
  }

  if (reps < 1) throw std::invalid_argument("sir_integrand: need reps >= 1 for source 1");
  int batch = reps;
  for (int attempt = 0; attempt < 4; ++attempt) {
    double acc = 0.0;
    int outbreaks = 0;
    for (int rep = 0; rep < batch; ++rep) {
      Rng rep_rng = rng.split(attempt, rep);
      const GillespieResult traj = gillespie_seir(params, rep_rng);
      if (!traj.outbreak) continue;
      ++outbreaks;
      acc += qoi == SirQoi::max_infected ? static_cast<double>(traj.max_infected)
                                         : traj.time_of_max;
    }
    if (outbreaks > 0) return acc / outbreaks * weight;
    log_warn("sir_integrand: no outbreaks in " + std::to_string(batch) +
             " repetitions, doubling");
    batch *= 2;
  }
  throw QueryError("sir_integrand: no outbreak trajectories even after resampling");
}

}  // namespace amsbq
