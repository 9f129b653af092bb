// Scores every absent arc of a directed 6-cycle by the two bound metrics
// and prints them next to the exact change in Re(mu).

#include <cstdio>

#include "algconn/generators.hpp"
#include "algconn/perturb_directed.hpp"

int main() {
  using namespace algconn;
  const Graph g = cycle_graph(6, true);
  const LaplacianMatrix lap = laplacian(g);
  const DirectedBoundContext ctx = build_directed_context(lap);
  const double before = generalized_algebraic_connectivity(g);
  std::printf("Re(mu) = %.6f, lambda1(H) = %.6f\n\n", before, ctx.lambda1_h);
  std::printf("arc     lower-metric upper-metric exact-change\n");
  for (const Link& arc : candidate_links(g)) {
    const double exact = generalized_algebraic_connectivity(g.with_link(arc)) - before;
    std::printf("%zu->%zu  %12.6f %12.6f %12.6f\n", arc.source, arc.target,
                link_score_lower(ctx, arc), link_score_upper(ctx, arc), exact);
  }
}
