// Recomputes the frozen ground truths of the sir-max / sir-argmax
// benchmarks: <f1> under the folded-weight formulation, estimated on a
// Gauss-Legendre grid over a/b with many Gillespie repetitions per node.
// Usage: sir_ground_truth [nodes] [reps] [seed]

#include <cstdio>
#include <cstdlib>

#include "amsbq/quadrule.hpp"
#include "amsbq/rng.hpp"
#include "amsbq/runner.hpp"
#include "amsbq/sir.hpp"

int main(int argc, char** argv) {
  const int nodes = argc > 1 ? std::atoi(argv[1]) : 96;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 4000;
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 917u;

  const auto [gl_nodes, gl_weights] = amsbq::gauss_legendre(nodes);
  const double lo = amsbq::kSirDomainLow, hi = amsbq::kSirDomainHigh;
  const double mid = 0.5 * (lo + hi), halfw = 0.5 * (hi - lo);

  for (const auto qoi : {amsbq::SirQoi::max_infected, amsbq::SirQoi::time_of_max}) {
    std::vector<double> values(nodes);
    amsbq::parallel_for(nodes, [&](int i) {
      amsbq::Rng rng = amsbq::Rng(seed).split(i);
      const double a_over_b = mid + halfw * gl_nodes[i];
      values[i] = amsbq::sir_integrand(1, a_over_b, qoi, reps, rng);
    });
    double mean = 0.0;
    for (int i = 0; i < nodes; ++i) mean += gl_weights[i] * values[i];
    mean *= 0.5;  // weights sum to 2; uniform measure on the box
    std::printf("%s ground truth (nodes=%d reps=%d seed=%llu): %.10f\n",
                qoi == amsbq::SirQoi::max_infected ? "sir-max" : "sir-argmax", nodes, reps,
                static_cast<unsigned long long>(seed), mean);
  }
  return 0;
}
