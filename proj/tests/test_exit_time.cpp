#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dendrite/errors.hpp"
#include "dendrite/exit_time.hpp"

using namespace dendrite;

namespace {

const WeightVector kEqual = WeightVector::equal();

double r0_exact(int n) { return 1.0 / (3 * (std::pow(2.0, n - 1) + std::pow(2.0, 2 * n - 1))); }

}  // namespace

TEST(TypicalPoints, Examples) {
  EXPECT_EQ(typical_point(TypicalPoint::q0(3)), q0());
  EXPECT_EQ(typical_point(TypicalPoint::q0(3)), canonicalize(Word("0"), Corner::Q2));
  EXPECT_EQ(typical_point(TypicalPoint::x(1, 0, 0)).str(), "02:1");
  // y_1 for n = 2 is F_{2 0 2}(q1).
  EXPECT_EQ(typical_point(TypicalPoint::y(2, 1)).str(), "202:1");
  EXPECT_EQ(typical_point(TypicalPoint::x(2, 1, 2)).str(), "020233:1");
  EXPECT_EQ(typical_point(TypicalPoint::reflected_x(2, 1, Word("3"))), typical_point(TypicalPoint::x(2, 1, 2)));
  EXPECT_EQ(typical_point(TypicalPoint::reflected_y(3, Word("00"), Word("22"))), typical_point(TypicalPoint::y(3, 2)));
  EXPECT_EQ(TypicalPoint::parse("x:1:2", 2).str(), "x(1,2)");
  EXPECT_THROW(TypicalPoint::x(1, -1, 0), ValidationError);
  EXPECT_THROW(TypicalPoint::y(1, 0), ValidationError);
  EXPECT_THROW(TypicalPoint::reflected_y(2, Word("2"), Word("2")), ValidationError);
  EXPECT_THROW(TypicalPoint::reflected_x(2, 0, Word("1")), ValidationError);
  EXPECT_THROW(TypicalPoint::parse("z:1", 2), ValidationError);
}

TEST(TypicalPoints, StrictlyInsideBall) {
  for (int n = 1; n <= 3; ++n) {
    std::vector<VertexId> pts{q0()};
    for (int m = 0; m <= 3; ++m)
      for (int k = 0; k <= 3; ++k) pts.push_back(typical_point(TypicalPoint::x(n, m, k)));
    for (int k = 1; k <= 3; ++k) pts.push_back(typical_point(TypicalPoint::y(n, k)));
    auto g = build_anchored_graph(n + 8, Rational(1, 2), pts);
    for (const auto& p : pts) EXPECT_LT(resistance_distance(*g, q0(), p), pow2(-n)) << p.str();
  }
}

TEST(FirstAddress, LeastRepresentation) {
  EXPECT_EQ(first_address(q0(), 5), "02222");
  EXPECT_EQ(first_address(q1(), 3), "000");
  EXPECT_EQ(first_address(VertexId::parse("023:1"), 6), "021333");
  EXPECT_EQ(first_address(VertexId::parse("01:3"), 4), "0133");
}

TEST(BoundaryResistance, QZeroConverges) {
  auto br = boundary_resistance(q0(), 2, 10);
  EXPECT_GE(br.resistance, 1.0 / 30);
  EXPECT_LE(br.resistance, 1.05 / 30);
  EXPECT_LE(br.resistance_lower, 1.0 / 30);
  for (int n = 1; n <= 3; ++n) {
    double prev_hi = 1, prev_lo = 0;
    for (int L = n + 2; L <= n + 7; ++L) {
      auto b = boundary_resistance(q0(), n, L);
      EXPECT_LE(b.resistance, prev_hi + 1e-15);
      EXPECT_GE(b.resistance_lower, prev_lo - 1e-15);
      EXPECT_LE(b.resistance_lower, r0_exact(n) * (1 + 1e-12));
      EXPECT_GE(b.resistance, r0_exact(n) * (1 - 1e-12));
      prev_hi = b.resistance;
      prev_lo = b.resistance_lower;
    }
    EXPECT_NEAR(prev_hi / r0_exact(n), 1.0, 0.05);
  }
}

TEST(BoundaryResistance, ExactAtSmallLevel) {
  // Exact-arithmetic cross-check of the float equilibrium solve.
  auto g = ball_graph(1, 5, {});
  auto b = ball(*g, q0(), Rational(1, 2));
  auto exact = equilibrium_potential<Rational>(g, q0(), b.frontier);
  EXPECT_NEAR(to_double(exact.resistance), boundary_resistance(g, q0(), 1).resistance, 1e-14);
}

TEST(BoundaryResistance, UniformComparabilityOfXmk) {
  std::vector<double> scaled;
  for (int n = 1; n <= 3; ++n) {
    auto br = boundary_resistance(typical_point(TypicalPoint::x(n, 1, 1)), n, n + 8);
    scaled.push_back(br.resistance * std::pow(2.0, n + 2));
  }
  double lo = *std::min_element(scaled.begin(), scaled.end()), hi = *std::max_element(scaled.begin(), scaled.end());
  EXPECT_LT(hi / lo, 1.05);
}

TEST(BoundaryResistance, RejectsNonInterior) {
  EXPECT_THROW(boundary_resistance(q1(), 1, 6), ValidationError);
}

TEST(NetworkReduce, DegenerateAtQZero) {
  auto g = ball_graph(2, 9, {});
  auto red = network_reduce(g, q0(), 2);
  EXPECT_TRUE(red.degenerate);
  EXPECT_EQ(red.zL, q0());
  EXPECT_EQ(red.R_x, boundary_resistance(g, q0(), 2).resistance);
  EXPECT_EQ(red.A_mass, red.D_mass);
}

TEST(NetworkReduce, MatchesDirectSolve) {
  std::mt19937 rng(5);
  for (int n = 1; n <= 3; ++n) {
    const int L = n + 6;
    auto base = ball_graph(n, L, {});
    auto b = ball(*base, q0(), pow2(-n));
    for (int i = 0; i < 20; ++i) {
      auto x = base->vertex(b.interior[rng() % b.interior.size()]);
      auto [zl, zr] = reduction_nodes(x, n);
      auto g = ball_graph(n, L, {x, zl, zr});
      auto red = network_reduce(g, x, n);
      auto direct = boundary_resistance(g, x, n);
      EXPECT_NEAR(red.R_x / direct.resistance, 1.0, 1e-9) << x.str();
      EXPECT_GT(red.rL, 0);
      EXPECT_GT(red.rR, 0);
      for (double p : {red.psi_zL, red.psi_zR}) {
        EXPECT_GE(p, 0);
        EXPECT_LE(p, 1);
      }
      EXPECT_NEAR(red.psi_zL, direct.psi.at(red.zL), 1e-9);
      EXPECT_NEAR(red.psi_zR, direct.psi.at(red.zR), 1e-9);
    }
  }
}

// R(x, B_n^c) is comparable to min(2^-n - R(x,q0), R(x,q0) + 4^-n) with one
// window for all n.
TEST(NetworkReduce, Dichotomy) {
  std::mt19937 rng(9);
  double lo = 1e9, hi = 0;
  for (int n = 1; n <= 4; ++n) {
    auto g = ball_graph(n, n + 6, {});
    auto b = ball(*g, q0(), pow2(-n));
    for (int i = 0; i < 15; ++i) {
      std::size_t v = b.interior[rng() % b.interior.size()];
      double d = to_double(b.distance[v]);
      double pred = std::min(std::pow(2.0, -n) - d, d + std::pow(4.0, -n));
      double r = boundary_resistance(g, g->vertex(v), n).resistance;
      lo = std::min(lo, r / pred);
      hi = std::max(hi, r / pred);
    }
  }
  EXPECT_GT(lo, 1.0 / 8);
  EXPECT_LT(hi, 8.0);
}

TEST(NetworkReduce, MidpointOfUpperArc) {
  // Midpoint in resistance length of q0 -- F_{02}(q1) for n = 2.
  auto x = canonicalize(Word("022"), Corner::Q1);
  auto g = ball_graph(2, 10, {x});
  EXPECT_EQ(resistance_distance(*g, q0(), x), Rational(1, 8));
  auto red = network_reduce(x, 2, 10);
  double pred = std::min(1.0 / 4 - 1.0 / 8, 1.0 / 8 + 1.0 / 16);
  EXPECT_GT(red.R_x / pred, 1.0 / 8);
  EXPECT_LT(red.R_x / pred, 8.0);
  EXPECT_NEAR(red.R_x, boundary_resistance(g, x, 2).resistance, 1e-12);
}

TEST(NetworkReduce, ExitMasses) {
  auto w = WeightVector::symmetric(Rational(1, 6), Rational(1, 3));
  EXPECT_EQ(upper_ball_measure(1, kEqual) + lower_ball_measure(1, kEqual), Rational(1, 3));
  auto [a, d] = exit_masses(typical_point(TypicalPoint::x(2, 0, 1)), 2, w);
  EXPECT_EQ(a, upper_ball_measure(2, w));
  EXPECT_EQ(d, lower_ball_measure(2, w));
  auto [a2, d2] = exit_masses(typical_point(TypicalPoint::y(2, 1)), 2, w);
  EXPECT_EQ(a2, cell_measure(w, Word("20")));
  EXPECT_EQ(d2, upper_ball_measure(2, w) + lower_ball_measure(2, w));
  EXPECT_THROW(exit_masses(q2(), 2, w), ValidationError);
}

TEST(NetworkReduce, BallPartsMatchBallMeasure) {
  for (int n = 1; n <= 3; ++n) {
    auto w = WeightVector::symmetric(Rational(1, 6), Rational(1, 3));
    auto m = ball_measure(w, q0(), pow2(-n), n + 6);
    Rational total = upper_ball_measure(n, w) + lower_ball_measure(n, w);
    EXPECT_LE(m.lower, total);
    EXPECT_GE(m.upper, total);
  }
}

TEST(SpineDecay, PsiAlongLowerSpine) {
  for (int k0 = 1; k0 <= 4; ++k0) {
    auto br = boundary_resistance(typical_point(TypicalPoint::y(2, k0)), 2, 12);
    for (int k = 1; k <= k0; ++k) {
      double v = br.psi.at(typical_point(TypicalPoint::y(2, k))) * std::pow(2.0, k0 - k);
      EXPECT_GT(v, 0.5);
      EXPECT_LE(v, 1.0 + 1e-12);
    }
  }
}

TEST(G1Identity, QZeroWithinReferenceWindow) {
  Rational e0 = epsilon0(kEqual), e1 = epsilon1(kEqual);
  for (int n = 1; n <= 3; ++n) {
    auto g = g1_via_identity(q0(), n, kEqual, n + 7);
    double mu = to_double(upper_ball_measure(n, kEqual) + lower_ball_measure(n, kEqual));
    EXPECT_GE(g.g1_lower, to_double(std::min(e0, e1)) * mu * g.R_lower);
    EXPECT_LE(g.g1_upper, 4 * to_double(std::max(e0, e1)) * mu * g.R_upper);
    EXPECT_LE(g.g1_lower, g.g1_upper);
    EXPECT_LE(g.int_lower, g.int_upper);
    EXPECT_LE(g.R_lower, g.R_upper);
  }
}

TEST(G1Identity, AgreesWithGreenSolve) {
  auto g = ball_graph(1, 8, {});
  auto b = ball(*g, q0(), Rational(1, 2));
  auto direct = green_g1<double>(g, b, interior_masses(kEqual, *g, b));
  std::mt19937 rng(1);
  for (int i = 0; i < 10; ++i) {
    std::size_t v = b.interior[rng() % b.interior.size()];
    auto id = g1_via_identity(g, g->vertex(v), 1, kEqual);
    EXPECT_NEAR(id.g1 / direct.values[v], 1.0, 0.05) << g->vertex(v).str();
    EXPECT_LE(id.g1_lower, direct.values[v] * (1 + 1e-9));
    EXPECT_GE(id.g1_upper, direct.values[v] * (1 - 1e-9));
  }
}

TEST(G1Identity, EOutBoundedNearFrontier) {
  auto rep = exit_ratio_experiment(2, 4, kEqual, 4);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) EXPECT_LE(rep.rows[i].eout_constant, rep.rows[0].eout_constant);
}

TEST(ExitRatio, SingleRowInUnitInterval) {
  auto rep = exit_ratio_experiment(2, 2, kEqual, 4);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_GT(rep.rows[0].ratio, 0);
  EXPECT_LE(rep.rows[0].ratio, 1);
  EXPECT_LE(rep.rows[0].inf_g1, rep.rows[0].inf_vertex_g1);
}

// When the upper half carries the ball's mass the ratio decays like 2^-n.
TEST(ExitRatio, DecaysWhenUpperHalfDominates) {
  auto rep = exit_ratio_experiment(2, 5, WeightVector::with_ratio(Rational(4)), 5);
  EXPECT_NEAR(rep.fit.slope, -1.0, 0.25);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) EXPECT_LT(rep.rows[i].ratio, rep.rows[i - 1].ratio);
}

TEST(ExitRatio, SlopeFit) {
  auto f = fit_log2_slope({1, 2, 3}, {0.5, 0.25, 0.125});
  EXPECT_NEAR(f.slope, -1, 1e-12);
  EXPECT_NEAR(f.stderr_, 0, 1e-12);
  EXPECT_THROW(fit_log2_slope({1}, {1}), ValidationError);
}

TEST(ExitRatio, Reports) {
  auto rep = exit_ratio_experiment(2, 3, kEqual, 3);
  std::ostringstream csv;
  write_csv(csv, rep);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "n,L,inf_g1,inf_vertex_g1,inf_at,sup_g1,sup_at,ratio,mu_ball,eout_constant");
  auto j = to_json(rep);
  EXPECT_EQ(j["n_range"][0], 2);
  EXPECT_TRUE(j.contains("slope"));
  EXPECT_EQ(j["weights"]["w0"], "1/4");
  std::ostringstream g1csv;
  write_csv(g1csv, std::vector<G1Identity>{g1_via_identity(q0(), 1, kEqual, 6)});
  EXPECT_EQ(g1csv.str().substr(0, g1csv.str().find('\n')),
            "n,L,x_kind,R_lower,R_upper,int_lower,int_upper,g1_lower,g1_upper");
  EXPECT_THROW(exit_ratio_experiment(2, 9, kEqual, 5), CapacityError);
}
