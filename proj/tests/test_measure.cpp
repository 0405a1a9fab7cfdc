#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "dendrite/errors.hpp"
#include "dendrite/measure.hpp"

using namespace dendrite;

namespace {

const WeightVector kEqual = WeightVector::equal();

// Random mu-distributed word of the given length.
Word sample_word(std::mt19937_64& rng, const WeightVector& w, int len) {
  std::discrete_distribution<int> digit({to_double(w.w0), to_double(w.w1), to_double(w.w2), to_double(w.w3)});
  Word out;
  for (int i = 0; i < len; ++i) out.push_back(digit(rng));
  return out;
}

}  // namespace

TEST(Weights, Validation) {
  EXPECT_EQ(WeightVector::parse("1/6,1/3").w3, Rational(1, 3));
  EXPECT_THROW(WeightVector::parse("1/4,1/3"), ValidationError);
  EXPECT_THROW(WeightVector::parse("1/4"), ValidationError);
  EXPECT_THROW(WeightVector(Rational(1, 5), Rational(3, 10), Rational(1, 4), Rational(1, 4)), ValidationError);
  EXPECT_THROW(WeightVector::symmetric(Rational(0), Rational(1, 2)), ValidationError);
  EXPECT_EQ(WeightVector::with_ratio(Rational(2)).w2, Rational(1, 3));
  EXPECT_EQ(to_json(kEqual)["w2"], "1/4");
}

TEST(CellMeasure, Examples) {
  EXPECT_EQ(cell_measure(kEqual, Word()), 1);
  EXPECT_EQ(cell_measure(kEqual, Word("02")), Rational(1, 16));
  auto w = WeightVector::symmetric(Rational(1, 6), Rational(1, 3));
  EXPECT_EQ(cell_measure(w, Word("220")), Rational(1, 54));
  Rational sum(0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) sum += cell_measure(w, Word("220") + Word(std::string{char('0' + a), char('0' + b), char('0' + c)}));
  EXPECT_EQ(sum, Rational(1, 54));
}

TEST(CellMeasure, Additivity) {
  auto w = WeightVector::symmetric(Rational(1, 6), Rational(1, 3));
  std::function<void(const Word&)> rec = [&](const Word& u) {
    if (u.size() == 6) return;
    Rational sum(0);
    for (int d = 0; d < 4; ++d) {
      Word c = u;
      c.push_back(d);
      sum += cell_measure(w, c);
      if (u.size() < 3 || d == 2) rec(c);
    }
    ASSERT_EQ(sum, cell_measure(w, u));
  };
  rec(Word());
}

TEST(HarmonicWeights, FixedPoint) {
  for (const auto& w : {kEqual, WeightVector::symmetric(Rational(1, 6), Rational(1, 3)),
                        WeightVector::symmetric(Rational(1, 3), Rational(1, 6))})
    for (const auto& s0 : {Rational(1, 2), Rational(1, 3), Rational(2, 5)}) {
      auto p = harmonic_weights(w, s0);
      EXPECT_EQ(p[0] + p[1] + p[2], 1);
      EXPECT_EQ(p[1], p[2]);
      for (int k = 0; k < 3; ++k) {
        Rational back(0);
        for (int i = 0; i < 4; ++i) {
          auto a = extension_matrix(i, s0);
          for (int j = 0; j < 3; ++j) back += w[i] * p[j] * a[j][k];
        }
        EXPECT_EQ(back, p[k]);
      }
      // The level-1 solve agrees with the closed extension rule.
      for (int i = 0; i < 4; ++i) {
        auto a = extension_matrix(i, s0);
        for (int k = 0; k < 3; ++k) {
          CornerData e{Rational(0), Rational(0), Rational(0)};
          e[k] = 1;
          auto x = extend(i, e, s0);
          for (int j = 0; j < 3; ++j) EXPECT_EQ(a[j][k], x[j]);
        }
      }
    }
  EXPECT_EQ(harmonic_weights(kEqual)[0], Rational(2, 3));
}

// Brute-force subdivision: corner averages over all depth-10 cells.
TEST(HarmonicWeights, SubdivisionOracle) {
  const double s0 = 0.5, s2 = 0.5;
  for (int k = 0; k < 3; ++k) {
    double total = 0;
    std::function<void(int, double, std::array<double, 3>)> rec = [&](int depth, double mu, std::array<double, 3> d) {
      if (depth == 10) {
        total += mu * (d[0] + d[1] + d[2]) / 3;
        return;
      }
      double m2 = s2 * d[0] + s0 * d[1], m3 = s2 * d[0] + s0 * d[2];
      rec(depth + 1, mu / 4, {d[0], m2, d[0]});
      rec(depth + 1, mu / 4, {d[0], d[0], m3});
      rec(depth + 1, mu / 4, {m2, d[1], m2});
      rec(depth + 1, mu / 4, {m3, m3, d[2]});
    };
    std::array<double, 3> e{0, 0, 0};
    e[static_cast<std::size_t>(k)] = 1;
    rec(0, 1.0, e);
    EXPECT_NEAR(total, to_double(harmonic_weights(kEqual)[static_cast<std::size_t>(k)]), 1e-6) << k;
  }
}

TEST(Integrals, ClosedFormsWithinReferenceBounds) {
  auto down = integrate_pw_harmonic(ClosedFormFunction({UDown{}}), kEqual);
  EXPECT_EQ(epsilon0(kEqual), Rational(1, 7));
  EXPECT_GE(down.lower, epsilon0(kEqual));
  EXPECT_LE(down.upper, 4 * epsilon0(kEqual));
  EXPECT_EQ(integral_closed({UDown{}}, kEqual), Rational(1, 2));
  EXPECT_LE(down.lower, Rational(1, 2));
  EXPECT_GE(down.upper, Rational(1, 2));

  EXPECT_EQ(epsilon1(kEqual), Rational(16, 105));
  EXPECT_EQ(integral_closed({UUp{}}, kEqual), Rational(1, 12));
  auto up = integrate_pw_harmonic(ClosedFormFunction({UUp{}}), kEqual);
  EXPECT_LE(up.lower, Rational(1, 12));
  EXPECT_GE(up.upper, Rational(1, 12));
  EXPECT_LT(to_double(up.upper - up.lower), 1e-4 * to_double(up.upper) * 1.0001);
}

TEST(Integrals, ConstantAndHarmonic) {
  auto c = integrate_pw_harmonic(ClosedFormFunction({UMinus{Rational(5), Rational(5), Rational(5)}}), kEqual);
  ASSERT_TRUE(c.exact);
  EXPECT_EQ(*c.exact, 5);
  auto h = integrate_pw_harmonic(ClosedFormFunction({UMinus{Rational(0), Rational(1), Rational(0)}}), kEqual);
  EXPECT_EQ(*h.exact, harmonic_weights(kEqual)[0]);
}

TEST(Integrals, RecursionsMatchQuadrature) {
  for (const auto& w : {kEqual, WeightVector::symmetric(Rational(1, 6), Rational(1, 3)),
                        WeightVector::symmetric(Rational(1, 3), Rational(1, 6))})
    for (const HarmonicSpec& spec : {HarmonicSpec{UDown{}}, HarmonicSpec{UDown{}, Rational(2, 5)}, HarmonicSpec{UUp{}},
                                     HarmonicSpec{UPlus{Rational(1), Rational(-1, 2), Rational(3)}}}) {
      auto q = integrate_pw_harmonic(ClosedFormFunction(spec), w, 12, 1e-9);
      Rational exact = integral_closed(spec, w);
      EXPECT_LE(q.lower, exact);
      EXPECT_GE(q.upper, exact);
    }
}

// Sampling mu directly, without the quadrature weights.
TEST(Integrals, MonteCarloOracle) {
  std::mt19937_64 rng(7);
  for (const HarmonicSpec& spec : {HarmonicSpec{UDown{}}, HarmonicSpec{UUp{}}}) {
    double sum = 0, sq = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      double v = to_double(eval_closed_raw(spec, sample_word(rng, kEqual, 16), Corner::Q1));
      sum += v;
      sq += v * v;
    }
    double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
    EXPECT_NEAR(mean, to_double(integral_closed(spec, kEqual)), 4 * se + 1e-4);
  }
}

TEST(Integrals, GraphFunctionIsExact) {
  auto d = discrete_udown(6, Rational(1, 2));
  GraphFunction f(d.u);
  auto b = integrate_pw_harmonic(f, kEqual, 12, 0.0);
  ASSERT_TRUE(b.exact);
  auto m = lumped_masses(kEqual, *d.u.graph);
  Rational total(0), mass(0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    total += m[i] * d.u.values[i];
    mass += m[i];
  }
  EXPECT_EQ(mass, 1);
  EXPECT_EQ(total, *b.exact);
}

TEST(Integrals, SandwichPerCell) {
  auto w = WeightVector::symmetric(Rational(1, 6), Rational(1, 3));
  auto p = harmonic_weights(w);
  HarmonicSpec spec{UUp{}};
  for (const char* s : {"", "0", "2", "02", "21", "0023", "32"}) {
    Word cell(s);
    if (!harmonic_on(spec, cell)) continue;
    auto d = cell_data(spec, cell);
    Rational v = p[0] * d[0] + p[1] * d[1] + p[2] * d[2];
    EXPECT_LE(v, std::max({d[0], d[1], d[2]}));
    EXPECT_GE(v, std::min({d[0], d[1], d[2]}));
  }
}

TEST(BallMeasure, Examples) {
  EXPECT_EQ(corner_eccentricity()[1], 2);
  Rational prev_gap(1);
  for (int L : {4, 6, 8}) {
    auto b = ball_measure(kEqual, q0(), Rational(1, 2), L);
    EXPECT_LE(b.lower, Rational(1, 3));
    EXPECT_GE(b.upper, Rational(1, 3));
    EXPECT_LT(b.upper - b.lower, prev_gap);
    prev_gap = b.upper - b.lower;
  }
  EXPECT_LT(to_double(prev_gap), 1e-4);
  auto whole = ball_measure(kEqual, q2(), Rational(2), 3);
  EXPECT_EQ(whole.lower, 1);
  EXPECT_EQ(whole.upper, 1);
  auto quarter = ball_measure(kEqual, q0(), Rational(1, 4), 8);
  EXPECT_LE(to_double(quarter.upper / quarter.lower), 1.1);
}

// Eccentricities by direct search over a fine lattice.
TEST(BallMeasure, EccentricityFromGraph) {
  for (const auto& s0 : {Rational(1, 2), Rational(1, 3)}) {
    auto g = build_level_graph(6, s0);
    for (int j = 1; j <= 3; ++j) {
      auto d = distances_from(*g, g->index_of(canonicalize(Word(), corner_from_index(j))));
      Rational mx = *std::max_element(d.begin(), d.end());
      EXPECT_LE(mx, corner_eccentricity()[static_cast<std::size_t>(j - 1)]);
      EXPECT_GT(to_double(mx), 0.95 * to_double(corner_eccentricity()[static_cast<std::size_t>(j - 1)]));
    }
  }
}

TEST(BallMeasure, MonteCarloOracle) {
  std::mt19937_64 rng(11);
  const VertexId x = doubling_point(2);
  const int n = 3000;
  int in_r = 0, in_2r = 0;
  for (int i = 0; i < n; ++i) {
    auto y = canonicalize(sample_word(rng, kEqual, 12), Corner::Q1);
    auto g = build_anchored_graph(12, Rational(1, 2), {x, y});
    Rational d = resistance_distance(*g, x, y);
    in_r += d < Rational(1, 4);
    in_2r += d < Rational(1, 2);
  }
  auto r = doubling_ratio(kEqual, x, Rational(1, 4), 9);
  double p1 = double(in_r) / n, p2 = double(in_2r) / n;
  EXPECT_NEAR(p1, r.inner.midpoint(), 4 * std::sqrt(p1 * (1 - p1) / n));
  EXPECT_NEAR(p2, r.outer.midpoint(), 4 * std::sqrt(p2 * (1 - p2) / n));
}

TEST(Doubling, BlowUpAtTypicalPoints) {
  for (int n = 2; n <= 4; ++n) {
    auto r = doubling_ratio(kEqual, doubling_point(n), pow2(-n), n + 6);
    EXPECT_GT(r.lower, Rational(3, 16) * pow2(n)) << n;
    ASSERT_TRUE(r.upper);
    EXPECT_GE(*r.upper, r.lower);
  }
  EXPECT_EQ(doubling_point(3).str(), "202:1");
}

TEST(Doubling, BoundedAtSmallRadii) {
  auto g = build_level_graph(1, Rational(1, 2));
  for (const auto& x : g->vertices()) {
    auto r = doubling_ratio(kEqual, x, Rational(1, 4), 8);
    EXPECT_GE(r.lower, 1);
    ASSERT_TRUE(r.upper);
    EXPECT_LE(*r.upper, 64);
  }
}

// The blow-up is geometric only asymptotically: consecutive factors dip
// below 2 at small n and climb back towards it.
TEST(Doubling, BlowUpFactorApproachesTwo) {
  std::vector<double> lower;
  for (int n = 2; n <= 6; ++n) lower.push_back(to_double(doubling_ratio(kEqual, doubling_point(n), pow2(-n), n + 6).lower));
  for (std::size_t i = 1; i < lower.size(); ++i) EXPECT_GT(lower[i] / lower[i - 1], 1.5) << i;
  for (std::size_t i = 3; i < lower.size(); ++i) EXPECT_GT(lower[i] / lower[i - 1], lower[i - 1] / lower[i - 2]);
  EXPECT_GT(lower.back() / lower[lower.size() - 2], 1.8);
}
