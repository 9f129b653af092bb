#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "algconn/datasets.hpp"
#include "algconn/generators.hpp"
#include "algconn/perturb_undirected.hpp"
#include "support.hpp"

using namespace algconn;

namespace {

const double kSqrt2 = std::sqrt(2.0);

SubgraphPerturbation links(std::size_t n, std::vector<Link> l) {
  return make_perturbation(n, std::move(l));
}

/// Operator with a hand-set eigenvector, for formula-level checks.
ShiftOperator synthetic(std::vector<double> z, double theta) {
  ShiftOperator s;
  s.z = Vector::Map(z.data(), static_cast<Eigen::Index>(z.size()));
  s.theta = theta;
  s.epsilon = theta;
  s.lambda1 = 1.0;
  return s;
}

}  // namespace

TEST(ShiftOperator, P3ByHand) {
  const ShiftOperator s = build_shift_operator(path_graph(3), 1.0 / 3.0);
  EXPECT_NEAR(s.lambda1, 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(s.theta, 0.5, 1e-10);
  EXPECT_NEAR(s.mu(), 1.0, 1e-9);
  EXPECT_NEAR(s.z(0), 1.0 / kSqrt2, 1e-9);
  EXPECT_NEAR(s.z(1), 0.0, 1e-9);
  EXPECT_NEAR(s.z(2), -1.0 / kSqrt2, 1e-9);
}

TEST(ShiftOperator, KarateRecoversMu) {
  const ShiftOperator s = build_shift_operator(karate_club());
  EXPECT_NEAR(s.mu(), 0.469, 1e-3);
  EXPECT_NEAR(s.epsilon, 1.0 / 18.0, 1e-15);
}

TEST(ShiftOperator, C4RecoversMu) {
  EXPECT_NEAR(build_shift_operator(cycle_graph(4), 1.0 / 3.0).mu(), 2.0, 1e-8);
}

TEST(ShiftOperator, InvariantsOnRandomGraphs) {
  Rng rng(101);
  for (int t = 0; t < 30; ++t) {
    const Graph g = fixtures::random_instance(rng, 4, 30);
    const ShiftOperator s = build_shift_operator(g);
    EXPECT_NEAR(s.z.sum(), 0.0, 1e-8);
    EXPECT_NEAR(s.z.norm(), 1.0, 1e-12);
    EXPECT_GT(s.theta, 0.0);
    EXPECT_NEAR(s.mu(), algebraic_connectivity(g).value, 1e-6);
  }
}

TEST(ShiftOperator, Errors) {
  // R vanishes for K4 at eps = 1/4
  EXPECT_THROW(build_shift_operator(complete_graph(4)), NumericalError);
  const Graph split = Graph::from_links(4, false, std::vector<Link>{{0, 1}, {2, 3}});
  EXPECT_THROW(build_shift_operator(split), DataError);
  EXPECT_THROW(build_shift_operator(laplacian(cycle_graph(3, true))), UsageError);
  EXPECT_THROW(build_shift_operator(path_graph(3), 0.0), UsageError);
}

TEST(FirstOrder, Examples) {
  const ShiftOperator s = build_shift_operator(path_graph(3), 1.0 / 3.0);
  EXPECT_EQ(estimate_mu_first_order(s, links(3, {})), 0.0);
  EXPECT_NEAR(estimate_mu_first_order(s, links(3, {{0, 2}})), 2.0, 1e-9);
  const ShiftOperator flat = synthetic({0.5, 0.5, -0.5, -0.5}, 0.2);
  EXPECT_EQ(estimate_mu_first_order(flat, links(4, {{0, 1}})), 0.0);
}

TEST(SecondOrder, Examples) {
  const ShiftOperator p3 = build_shift_operator(path_graph(3), 1.0 / 3.0);
  EXPECT_EQ(estimate_mu_second_order(p3, links(3, {})), 0.0);
  EXPECT_NEAR(estimate_mu_second_order(p3, links(3, {{0, 2}})), 0.0, 1e-9);

  const Graph p4 = path_graph(4);
  const ShiftOperator s = build_shift_operator(p4, 1.0 / 3.0);
  const auto p = links(4, {{0, 3}});
  // Fiedler vector of P4 is proportional to cos(pi (2i + 1) / 8)
  const double c1 = std::cos(std::numbers::pi / 8), c3 = std::cos(3 * std::numbers::pi / 8);
  const double gap = 2.0 * c1 / std::sqrt(2.0 * (c1 * c1 + c3 * c3));
  const double theta = (1.0 / 3.0) / (1.0 - (2.0 - kSqrt2) / 3.0);
  EXPECT_NEAR(estimate_mu_second_order(s, p), gap * gap - theta * 2.0 * gap * gap, 1e-9);
  EXPECT_NEAR(estimate_mu_second_order(s, p), 0.29, 0.005);
  const double exact = algebraic_connectivity(p4.with_link({0, 3})).value -
                       algebraic_connectivity(p4).value;
  EXPECT_NEAR(exact, kSqrt2, 1e-9);
  EXPECT_EQ(impact(s, p), estimate_mu_second_order(s, p));
}

TEST(SecondOrder, NeverAboveFirstOrder) {
  Rng rng(103);
  for (int t = 0; t < 200; ++t) {
    const Graph g = fixtures::random_instance(rng, 4, 16);
    const ShiftOperator s = build_shift_operator(g);
    const auto p = make_perturbation(g.node_count(),
                                     fixtures::random_link_subset(g, 1 + uniform_index(rng, 5), rng));
    EXPECT_LE(estimate_mu_second_order(s, p), estimate_mu_first_order(s, p) + 1e-15);
  }
}

TEST(SecondOrder, SandwichedByDelta) {
  Rng rng(107);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const Graph g = fixtures::random_instance(rng, 5, 16);
    const ShiftOperator s = build_shift_operator(g);
    const auto p = make_perturbation(g.node_count(),
                                     fixtures::random_link_subset(g, 1 + uniform_index(rng, 4), rng));
    const double delta = delta_constant(s, p.k());
    if (delta <= 0.0) continue;
    ++checked;
    const double first = estimate_mu_first_order(s, p);
    const double e = impact(s, p);
    EXPECT_LE(delta * first, e + 1e-12);
    EXPECT_LE(e, first + 1e-12);
  }
  EXPECT_GT(checked, 50);
}

TEST(SecondOrder, FirstTermMatchesFullSpectrumExpansion) {
  // For a simple Fiedler value z is the Fiedler vector, and a small scaled
  // perturbation follows the full-spectrum second-order expansion.
  Rng rng(109);
  int checked = 0;
  for (int t = 0; t < 40 && checked < 15; ++t) {
    const Graph g = fixtures::random_instance(rng, 5, 12);
    const Matrix q = laplacian(g).q;
    const auto spec = eig_symmetric(q, false);
    if (spec.values(2) - spec.values(1) < 0.2) continue;
    ++checked;
    const ShiftOperator s = build_shift_operator(g);
    const auto p = make_perturbation(g.node_count(), fixtures::random_link_subset(g, 2, rng));
    const Vector fiedler = eig_symmetric(q).vectors.col(1);
    EXPECT_NEAR(estimate_mu_first_order(s, p), fiedler.dot(p.dq * fiedler), 1e-8);
    const double tiny = 1e-4;
    const double exact = eig_symmetric(q + tiny * p.dq, false).values(1) - spec.values(1);
    const double series = fixtures::full_spectrum_second_order(q, tiny * p.dq);
    EXPECT_NEAR(exact, series, 1e-8);
  }
  EXPECT_GE(checked, 10);
}

TEST(CrossTerm, SingleLink) {
  const ShiftOperator s = build_shift_operator(path_graph(4), 1.0 / 3.0);
  const auto b = multi_link_cross_term(s, links(4, {{0, 3}}));
  const double d = s.z(0) - s.z(3);
  EXPECT_NEAR(b.link_term, 2 * d * d, 1e-12);
  EXPECT_EQ(b.cross_term, 0.0);
}

TEST(CrossTerm, DisjointLinksAdd) {
  Rng rng(113);
  const Graph g = fixtures::random_instance(rng, 8, 8);
  const ShiftOperator s = build_shift_operator(g);
  const auto cands = candidate_links(g);
  for (std::size_t a = 0; a < cands.size(); ++a)
    for (std::size_t c = a + 1; c < cands.size(); ++c) {
      const Link x = cands[a], y = cands[c];
      if (x.source == y.source || x.source == y.target || x.target == y.source ||
          x.target == y.target)
        continue;
      const auto both = multi_link_cross_term(s, links(8, {x, y}));
      EXPECT_EQ(both.cross_term, 0.0);
      EXPECT_NEAR(both.total, multi_link_cross_term(s, links(8, {x})).total +
                                  multi_link_cross_term(s, links(8, {y})).total,
                  1e-12);
    }
}

TEST(CrossTerm, SharedNodeMatchesMatrix) {
  const ShiftOperator s = build_shift_operator(path_graph(5));
  const auto b = multi_link_cross_term(s, links(5, {{0, 2}, {2, 4}}));
  const double expected = 2 * (s.z(0) - s.z(2)) * (s.z(4) - s.z(2));
  EXPECT_NEAR(b.cross_term, expected, 1e-12);
  EXPECT_NEAR(b.total, b.direct, 1e-12);
  Rng rng(127);
  for (int t = 0; t < 50; ++t) {
    const Graph g = fixtures::random_instance(rng, 5, 14);
    const ShiftOperator op = build_shift_operator(g);
    const auto p = make_perturbation(g.node_count(), fixtures::random_link_subset(g, 6, rng));
    EXPECT_NO_THROW(multi_link_cross_term(op, p));
  }
}

TEST(LinkScore, Examples) {
  const ShiftOperator p3 = build_shift_operator(path_graph(3), 1.0 / 3.0);
  EXPECT_NEAR(link_score_undirected(p3, {0, 2}), kSqrt2, 1e-9);
  const ShiftOperator p4 = build_shift_operator(path_graph(4), 1.0 / 3.0);
  const double best = link_score_undirected(p4, {0, 3});
  EXPECT_NEAR(best, 1.31, 0.005);
  for (const Link& c : candidate_links(path_graph(4)))
    EXPECT_LE(link_score_undirected(p4, c), best);
  EXPECT_EQ(link_score_undirected(synthetic({0.5, 0.5, -0.5, -0.5}, 0.1), {0, 1}), 0.0);
}

TEST(LinkScore, SingleLinkArgmaxAgreesWithImpact) {
  // For one link the impact is (z_i - z_j)^2 (1 - 2 theta), which is
  // increasing in |z_i - z_j| only while theta < 1/2. Dense graphs with
  // mu close to d_max (K_{m,m} has theta = 1) fall outside that range.
  Rng rng(131);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const Graph g = fixtures::random_instance(rng, 4, 14);
    const ShiftOperator s = build_shift_operator(g);
    const auto cands = candidate_links(g);
    if (cands.empty() || s.theta >= 0.5) continue;
    ++checked;
    std::size_t by_metric = 0, by_impact = 0;
    for (std::size_t c = 1; c < cands.size(); ++c) {
      if (link_score_undirected(s, cands[c]) > link_score_undirected(s, cands[by_metric]) + 1e-12)
        by_metric = c;
      if (impact(s, links(g.node_count(), {cands[c]})) >
          impact(s, links(g.node_count(), {cands[by_impact]})) + 1e-12)
        by_impact = c;
    }
    // equal up to exact score ties
    EXPECT_NEAR(link_score_undirected(s, cands[by_metric]),
                link_score_undirected(s, cands[by_impact]), 1e-9);
  }
  EXPECT_GE(checked, 30);
}

TEST(Delta, Examples) {
  EXPECT_NEAR(delta_constant(0.1, 4), 0.5, 1e-15);
  EXPECT_EQ(delta_constant(0.5, 1), 0.0);
  EXPECT_NEAR(delta_constant(build_shift_operator(path_graph(3), 1.0 / 3.0), 1), 0.0, 1e-9);
}

TEST(PerformanceBound, Examples) {
  EXPECT_EQ(performance_bound(1.0, 1).value(), 1.0);
  const double expected = (1.0 / (1.0 + 2.0 * 0.19 / 0.81)) * (1.0 - std::pow(0.9, 4) * 0.25);
  EXPECT_NEAR(performance_bound(0.9, 2).value(), expected, 1e-15);
  EXPECT_NEAR(expected, 0.569, 0.001);
  EXPECT_FALSE(performance_bound(0.5, 4).has_value());
  EXPECT_FALSE(performance_bound(0.0, 1).has_value());
  EXPECT_FALSE(performance_bound(1.2, 1).has_value());
}

TEST(Submodularity, FrozenWitnessViolatesInequality) {
  // Path 4 - 0 - 2 - 1 - 3. Adding 2-4 gains more after 2-3 than alone.
  const Graph g = Graph::from_links(5, false, std::vector<Link>{{0, 2}, {0, 4}, {1, 2}, {1, 3}});
  const ShiftOperator s = build_shift_operator(g);
  const double alone = impact_of(s, 5, {{2, 4}});
  const double after = impact_of(s, 5, {{2, 3}, {2, 4}}) - impact_of(s, 5, {{2, 3}});
  EXPECT_LT(alone, after);
  EXPECT_NEAR(alone, 0.0854101965506518, 1e-9);
  EXPECT_NEAR(after, 0.3618033988006728, 1e-9);
}

TEST(Submodularity, SearchFindsTheFrozenWitness) {
  const auto w = find_nonsubmodular_witness(6);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->graph.links(), (std::vector<Link>{{0, 2}, {0, 4}, {1, 2}, {1, 3}}));
  EXPECT_EQ(w->b, (std::vector<Link>{{2, 3}}));
  EXPECT_EQ(w->extra, (Link{2, 4}));
  EXPECT_LT(w->gain_small, w->gain_large);
}
