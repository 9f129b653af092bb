#include <gtest/gtest.h>

#include <cmath>

#include "algconn/centrality.hpp"
#include "algconn/datasets.hpp"
#include "algconn/generators.hpp"
#include "support.hpp"

using namespace algconn;

TEST(Degrees, Examples) {
  EXPECT_EQ(degrees(path_graph(3)).values, (std::vector<double>{1, 2, 1}));
  EXPECT_EQ(degrees(complete_graph(4)).values, (std::vector<double>(4, 3.0)));
  const Graph k = karate_club();
  const auto d = degrees(k);
  for (std::size_t i = 0; i < k.node_count(); ++i)
    if (k.label(i) == "34") {
      EXPECT_EQ(d.values[i], 17.0);
    }
}

TEST(Degrees, DirectedUsesTotalDegree) {
  EXPECT_EQ(degrees(cycle_graph(3, true)).values, (std::vector<double>(3, 2.0)));
}

TEST(EigenvectorCentrality, Examples) {
  for (double x : eigenvector_centrality(cycle_graph(4)).values) EXPECT_NEAR(x, 0.5, 1e-10);
  for (double x : eigenvector_centrality(complete_graph(2)).values)
    EXPECT_NEAR(x, 1.0 / std::sqrt(2.0), 1e-10);
  const auto s = eigenvector_centrality(star_graph(4)).values;
  EXPECT_NEAR(s[0], 1.0 / std::sqrt(2.0), 1e-10);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(s[i], 1.0 / std::sqrt(6.0), 1e-10);
}

TEST(EigenvectorCentrality, PerronEquation) {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const Graph g = fixtures::random_instance(rng, 4, 25);
    const auto s = eigenvector_centrality(g);
    Vector v(static_cast<Eigen::Index>(s.values.size()));
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      EXPECT_GE(s.values[i], 0.0);
      v(static_cast<Eigen::Index>(i)) = s.values[i];
    }
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    const Matrix a = adjacency_matrix(g);
    const double lambda = v.dot(a * v);
    EXPECT_LE((a * v - lambda * v).norm(), 1e-9);
    EXPECT_NEAR(lambda, eig_symmetric(a, false).values.maxCoeff(), 1e-9);
  }
}

TEST(Betweenness, Examples) {
  EXPECT_EQ(betweenness(path_graph(3)).values, (std::vector<double>{0, 1, 0}));
  for (double x : betweenness(cycle_graph(4)).values) EXPECT_NEAR(x, 0.5, 1e-12);
  for (double x : betweenness(complete_graph(4)).values) EXPECT_EQ(x, 0.0);
}

TEST(Betweenness, MatchesPathEnumeration) {
  Rng rng(43);
  for (int t = 0; t < 60; ++t) {
    const bool directed = t % 3 == 0;
    const Graph g = directed ? random_strongly_connected_digraph(2 + uniform_index(rng, 7), 0.2, rng)
                             : random_k_link_graph(2 + uniform_index(rng, 7), 0, rng);
    Graph h = g;
    if (!directed)
      for (const Link& c : candidate_links(g))
        if (uniform01(rng) < 0.35) h = h.with_link(c);
    const auto fast = betweenness(h).values;
    const auto slow = fixtures::naive_betweenness(h);
    ASSERT_EQ(fast.size(), slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-12);
  }
}
