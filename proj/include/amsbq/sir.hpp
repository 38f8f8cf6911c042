#ifndef AMSBQ_SIR_HPP
#define AMSBQ_SIR_HPP

#include <vector>

#include "amsbq/rng.hpp"

namespace amsbq {

/// Compartmental epidemic model parameters. Time is measured in units of
/// 1/b, so b = 1 by convention and only the ratio a/b matters; the
/// incubation-exit rate is tied to gamma = 10 b.
struct SirParams {
  int population = 100;
  double a_over_b = 10.0;
  double b = 1.0;
  int initial_exposed = 0;
  int initial_infected = 1;
  double gamma_override = 0.0;  // > 0 decouples gamma from b
  double a_override = 0.0;      // > 0 sets the infection rate directly

  double a() const { return a_override > 0.0 ? a_override : a_over_b * b; }
  double gamma() const { return gamma_override > 0.0 ? gamma_override : 10.0 * b; }
  int initial_susceptible() const { return population - initial_exposed - initial_infected; }
};

struct SeirState {
  double t = 0.0;
  int susceptible = 0;
  int exposed = 0;
  int infected = 0;
  int recovered = 0;
};

struct GillespieResult {
  std::vector<SeirState> trajectory;  // piecewise-constant, one entry per event plus t=0
  bool outbreak = false;              // at least one S -> E transmission happened
  int max_infected = 0;
  double time_of_max = 0.0;
};

/// Exact stochastic simulation of the SEIR jump process with events
/// S->E (rate a S I / N), E->I (rate gamma E), I->R (rate b I), run until
/// the infection dies out. Deterministic per rng stream.
GillespieResult gillespie_seir(const SirParams& params, Rng& rng);

/// Compartment counts of a piecewise-constant trajectory at query time t.
SeirState trajectory_at(const std::vector<SeirState>& trajectory, double t);

struct OdeSolution {
  std::vector<double> t;
  std::vector<std::vector<double>> y;  // one state vector per grid time
};

/// Three-compartment SIR ODEs on the given time grid (the deliberately
/// simplified secondary model: no exposed compartment). Adaptive RK45
/// with dense Hermite output.
OdeSolution ode_sir(const SirParams& params, const std::vector<double>& t_grid);

/// Four-compartment SEIR ODEs on the given time grid.
OdeSolution ode_seir(const SirParams& params, const std::vector<double>& t_grid);

struct OdePeak {
  double max_infected = 0.0;
  double time_of_max = 0.0;
};

/// Peak of N_I(t) for the SIR ODE model, refined below grid resolution.
OdePeak ode_sir_peak(const SirParams& params);

enum class SirQoi { max_infected, time_of_max };

/// Density of the shifted gamma prior on a/b (shape 5, scale 4, support
/// starting at 1).
double a_over_b_prior_density(double a_over_b);

/// Domain on which the prior mass is effectively supported.
inline constexpr double kSirDomainLow = 1.0;
inline constexpr double kSirDomainHigh = 61.0;

/// Black-box integrand with the prior folded in: source 1 averages the QoI
/// over `reps` Gillespie outbreak trajectories, source 2 takes it from the
/// SIR ODE peak; both are multiplied by the prior density and the domain
/// width so the integration measure stays uniform. When none of `reps`
/// trajectories is an outbreak the batch is re-sampled with doubled reps,
/// up to 8x, then QueryError is thrown.
double sir_integrand(int source, double a_over_b, SirQoi qoi, int reps, Rng& rng);

}  // namespace amsbq

#endif
