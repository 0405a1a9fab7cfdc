#include <gtest/gtest.h>

#include <random>

#include "dendrite/energy_graph.hpp"
#include "dendrite/errors.hpp"

using namespace dendrite;

TEST(EnergyGraph, LevelZeroAndOne) {
  auto g0 = build_level_graph(0, Rational(1, 2));
  EXPECT_EQ(g0->vertex_count(), 3u);
  ASSERT_EQ(g0->edges().size(), 2u);
  for (const auto& e : g0->edges()) EXPECT_EQ(e.conductance, 1);
  auto g1 = build_level_graph(1, Rational(1, 2));
  EXPECT_EQ(g1->vertex_count(), 9u);
  ASSERT_EQ(g1->edges().size(), 8u);
  for (const auto& e : g1->edges()) EXPECT_EQ(e.conductance, 2);
}

TEST(EnergyGraph, VertexCountAndTree) {
  std::size_t pow4 = 1;
  for (int L = 0; L <= 6; ++L, pow4 *= 4) {
    auto g = build_level_graph(L, Rational(1, 2));
    EXPECT_EQ(g->vertex_count(), 2 * pow4 + 1);
    EXPECT_NO_THROW(assert_tree(*g));
    EXPECT_TRUE(g->uniform());
    for (const auto& e : g->edges()) EXPECT_EQ(e.conductance, pow2(L));
  }
  for (int L : {7, 8}) EXPECT_NO_THROW(assert_tree(*build_level_graph(L, Rational(1, 3))));
}

TEST(EnergyGraph, ConductanceProductRule) {
  auto g = build_level_graph(2, Rational(1, 3));
  for (const auto& c : g->cells()) {
    Rational s(1);
    for (std::size_t i = 0; i < c.word.size(); ++i) s *= c.word[i] <= 1 ? Rational(1, 3) : Rational(2, 3);
    EXPECT_EQ(c.scale, s);
  }
}

TEST(EnergyGraph, ResistanceDistanceExamples) {
  for (int L = 0; L <= 5; ++L) {
    auto g = build_level_graph(L, Rational(1, 2));
    EXPECT_EQ(resistance_distance(*g, q1(), q2()), 1);
    EXPECT_EQ(resistance_distance(*g, q1(), q3()), 1);
    EXPECT_EQ(resistance_distance(*g, q2(), q3()), 2);
    if (L >= 1) EXPECT_EQ(resistance_distance(*g, q0(), q1()), Rational(1, 2));
  }
  auto g = build_level_graph(1, Rational(1, 2));
  EXPECT_THROW(resistance_distance(*g, VertexId::parse("22:1"), q1()), ValidationError);
}

TEST(EnergyGraph, DistanceIndependentOfLevel) {
  auto coarse = build_level_graph(3, Rational(2, 5));
  auto fine = build_level_graph(5, Rational(2, 5));
  auto dc = distances_from(*coarse, coarse->index_of(q0()));
  auto df = distances_from(*fine, fine->index_of(q0()));
  for (std::size_t i = 0; i < coarse->vertex_count(); ++i)
    EXPECT_EQ(dc[i], df[fine->index_of(coarse->vertex(i))]);
}

TEST(EnergyGraph, MetricAxiomsSampled) {
  auto g = build_level_graph(5, Rational(1, 2));
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, g->vertex_count() - 1);
  for (int t = 0; t < 30; ++t) {
    std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    auto da = distances_from(*g, a);
    auto db = distances_from(*g, b);
    EXPECT_EQ(da[b], db[a]);
    EXPECT_EQ(da[a], 0);
    if (a != b) {
      EXPECT_GT(da[b], 0);
    }
    EXPECT_LE(da[c], da[b] + db[c]);
  }
  // Equality along a tree path: q2 -> q0 -> q1.
  EXPECT_EQ(resistance_distance(*g, q2(), q1()),
            resistance_distance(*g, q2(), q0()) + resistance_distance(*g, q0(), q1()));
}

TEST(EnergyGraph, RefinedGraphIsTraceOfUniform) {
  // Distances between kept vertices equal those of the uniform graph.
  auto full = build_level_graph(5, Rational(1, 2));
  auto part = build_anchored_graph(5, Rational(1, 2), {VertexId::parse("02302:1"), VertexId::parse("3322:2")});
  EXPECT_NO_THROW(assert_tree(*part));
  EXPECT_TRUE(part->contains(VertexId::parse("02302:1")));
  EXPECT_TRUE(part->contains(VertexId::parse("3322:2")));
  auto dp = distances_from(*part, part->index_of(q3()));
  auto df = distances_from(*full, full->index_of(q3()));
  for (std::size_t i = 0; i < part->vertex_count(); ++i) EXPECT_EQ(dp[i], df[full->index_of(part->vertex(i))]);
}

TEST(EnergyGraph, BallExamples) {
  auto g = build_level_graph(4, Rational(1, 2));
  auto b = ball(*g, q0(), Rational(1, 2));
  // Lower part: every vertex of K_2 except its bottom line is interior.
  for (std::size_t v = 0; v < g->vertex_count(); ++v) {
    const auto& id = g->vertex(v);
    bool in_k2 = !id.word.empty() && id.word[0] == 2;
    bool bottom = id.word.all_in("23") && (id.corner != Corner::Q1 || id.word.empty());
    if (in_k2 && !bottom) EXPECT_TRUE(b.is_interior[v]) << id.str();
  }
  for (int m = 0; m <= 2; ++m) {
    Word w = Word::repeat(0, m + 1) + Word("2");
    auto v = canonicalize(w, Corner::Q1);
    EXPECT_TRUE(b.is_interior[g->index_of(v)]) << v.str();
  }
  // Frontier: apex F_0(q1) = q1 plus bottom-line points, all at distance exactly r.
  for (std::size_t v : b.frontier) EXPECT_EQ(b.distance[v], Rational(1, 2)) << g->vertex(v).str();
  EXPECT_TRUE(b.is_frontier[g->index_of(q1())]);
  EXPECT_EQ(b.upper_boundary.size() + b.lower_boundary.size(), b.frontier.size());

  auto whole = ball(*g, q1(), Rational(3));
  EXPECT_EQ(whole.interior.size(), g->vertex_count());
  EXPECT_TRUE(whole.frontier.empty());

  auto g5 = build_level_graph(5, Rational(1, 2));
  auto b2 = ball(*g5, q0(), Rational(1, 4));
  EXPECT_TRUE(b2.is_frontier[g5->index_of(canonicalize(Word("02"), Corner::Q1))]);
}

TEST(EnergyGraph, BallMonotone) {
  auto g = build_level_graph(5, Rational(1, 2));
  std::vector<Rational> radii{Rational(1, 16), Rational(1, 10), Rational(1, 4), Rational(3, 8), Rational(1)};
  std::vector<char> prev(g->vertex_count(), 0);
  for (const auto& r : radii) {
    auto b = ball(*g, q0(), r);
    for (std::size_t v = 0; v < g->vertex_count(); ++v)
      if (prev[v]) EXPECT_TRUE(b.is_interior[v]);
    prev = b.is_interior;
    for (const auto& cut : b.cut_edges) {
      EXPECT_GT(cut.fraction, 0);
      EXPECT_LE(cut.fraction, 1);
    }
  }
}

TEST(EnergyGraph, BallGraphMatchesUniformBall) {
  for (int n = 1; n <= 2; ++n) {
    int L = 6;
    Rational r = pow2(-n);
    auto full = build_level_graph(L, Rational(1, 2));
    auto bf = ball(*full, q0(), r);
    auto adaptive = build_ball_graph(L, Rational(1, 2), {q0(), {r, r / 2}, {}, false});
    auto ba = ball(*adaptive, q0(), r);
    // Same frontier.
    std::vector<VertexId> ff, fa;
    for (auto v : bf.frontier) ff.push_back(full->vertex(v));
    for (auto v : ba.frontier) fa.push_back(adaptive->vertex(v));
    EXPECT_EQ(ff, fa);
    EXPECT_LT(adaptive->vertex_count(), full->vertex_count());
  }
}

TEST(EnergyGraph, SchurTraceRenormalization) {
  for (Rational s0 : {Rational(1, 2), Rational(1, 3), Rational(2, 5)}) {
    for (int L = 0; L <= 4; ++L) {
      auto coarse = build_level_graph(L, s0);
      auto fine = build_level_graph(L + 1, s0);
      auto net = schur_trace(*fine, coarse->vertices());
      EXPECT_EQ(net.conductances, as_network(*coarse).conductances) << "L=" << L;
    }
  }
  auto g2 = build_level_graph(2, Rational(1, 2));
  auto g0 = build_level_graph(0, Rational(1, 2));
  EXPECT_EQ(schur_trace(*g2, g0->vertices()).conductances, as_network(*g0).conductances);
  EXPECT_EQ(schur_trace(*g2, g2->vertices()).conductances, as_network(*g2).conductances);
  EXPECT_THROW(schur_trace(*g2, {q1()}), ValidationError);
}

TEST(EnergyGraph, SchurTraceNonTreeKeep) {
  // Keeping the three leaves of a star forces a star-mesh step.
  auto g = build_level_graph(1, Rational(1, 2));
  auto net = schur_trace(*g, {q2(), q3(), q1()});
  Rational total(0);
  for (const auto& [k, c] : net.conductances) total += c;
  EXPECT_EQ(net.conductances.size(), 2u);
  EXPECT_EQ(total, 2);
}

TEST(EnergyGraph, CapacityAndValidation) {
  EXPECT_THROW(build_level_graph(max_level() + 1, Rational(1, 2)), CapacityError);
  EXPECT_THROW(build_level_graph(1, Rational(1)), ValidationError);
  EXPECT_THROW(build_level_graph(1, Rational(0)), ValidationError);
}

TEST(EnergyGraph, JsonExport) {
  auto j = graph_to_json(*build_level_graph(1, Rational(1, 2)));
  EXPECT_EQ(j["level"], 1);
  EXPECT_EQ(j["s0"], "1/2");
  EXPECT_EQ(j["vertices"].size(), 9u);
  EXPECT_EQ(j["edges"][0][2], "2/1");
}
