// Adds five links to Zachary's karate club with the exact greedy and the
// Fiedler-gap metric, then compares against the degree-product baseline.

#include <cstdio>

#include "algconn/datasets.hpp"
#include "algconn/optimizer.hpp"

int main() {
  using namespace algconn;
  const Graph g = karate_club();
  std::printf("start: mu = %.6f\n", algebraic_connectivity(g).value);

  for (Strategy s : {Strategy::exact_mu, Strategy::metric_omega, Strategy::min_degree_product}) {
    const GreedyTrace t = run_strategy(g, 5, s);
    std::printf("\n%.*s\n", static_cast<int>(tag(s).size()), tag(s).data());
    for (const GreedyStep& step : t.steps)
      std::printf("  %zu: %s-%s  mu = %.6f\n", step.iteration, g.label(step.link.source).c_str(),
                  g.label(step.link.target).c_str(), step.objective);
  }
}
