#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dendrite/closed_harmonics.hpp"

namespace dendrite {

// Digit weights of the self-similar measure; w0 = w1, w2 = w3, sum 1.
struct WeightVector {
  Rational w0, w1, w2, w3;

  WeightVector(Rational a0, Rational a1, Rational a2, Rational a3);  // validates
  static WeightVector symmetric(const Rational& w0, const Rational& w2);
  static WeightVector equal() { return symmetric(Rational(1, 4), Rational(1, 4)); }
  // Weights with w2 / w0 = ratio.
  static WeightVector with_ratio(const Rational& ratio);
  // "w0,w2" with w1 = w0, w3 = w2.
  static WeightVector parse(std::string_view text);

  const Rational& operator[](int digit) const;
  std::string str() const;  // "w0,w2"
};

nlohmann::json to_json(const WeightVector& w);

struct IntegralBounds {
  Rational lower, upper;
  std::optional<Rational> exact;
  double midpoint() const { return (to_double(lower) + to_double(upper)) / 2; }
};

Rational cell_measure(const WeightVector& w, const Word& word);

// Lower bound: cells lying inside the open ball; upper bound adds the cells
// that meet it. Uses the distances stored in the ball.
IntegralBounds ball_measure(const WeightVector& w, const LevelGraph& g, const BallRegion& b);
// Builds a graph refined around the sphere of radius r first.
IntegralBounds ball_measure(const WeightVector& w, const VertexId& center, const Rational& r, int L,
                            const Rational& s0 = Rational(1, 2));

// sup over y in K of R(q_j, y), j = 1, 2, 3; equals (1, 2, 2) for every s0.
std::array<Rational, 3> corner_eccentricity();

// Unique probability vector p with integral of h = p . (h(q1), h(q2), h(q3))
// for every harmonic h, from the level-1 extension maps.
CornerData harmonic_weights(const WeightVector& w, const Rational& s0 = Rational(1, 2));
// The V0 -> V1 extension map of digit i as a 3x3 matrix, from a level-1 solve.
std::array<CornerData, 3> extension_matrix(int digit, const Rational& s0);

// A function that is harmonic on all but a few cells, described cell by cell.
class PiecewiseHarmonic {
 public:
  virtual ~PiecewiseHarmonic() = default;
  virtual Rational s0() const = 0;
  // Corner data on K_w when the function is harmonic on the whole of K_w.
  virtual std::optional<CornerData> harmonic_data(const Word& w) const = 0;
  // An interval containing every value on K_w.
  virtual std::pair<Rational, Rational> range(const Word& w) const = 0;
};

class ClosedFormFunction : public PiecewiseHarmonic {
 public:
  explicit ClosedFormFunction(HarmonicSpec spec) : spec_(std::move(spec)) {}
  Rational s0() const override { return spec_.s0; }
  std::optional<CornerData> harmonic_data(const Word& w) const override;
  std::pair<Rational, Rational> range(const Word& w) const override;

 private:
  HarmonicSpec spec_;
};

// Vertex values on a graph, extended harmonically into every leaf cell.
class GraphFunction : public PiecewiseHarmonic {
 public:
  explicit GraphFunction(VertexFunction<Rational> f);
  Rational s0() const override { return f_.graph->s0(); }
  std::optional<CornerData> harmonic_data(const Word& w) const override;
  std::pair<Rational, Rational> range(const Word& w) const override;

 private:
  VertexFunction<Rational> f_;
  std::map<Word, std::size_t> leaf_;
};

// Harmonic cells contribute their exact integral; the rest are refined until
// the relative gap is below `tolerance` or `max_depth` is reached, and then
// contribute mu(K) * range. `exact` is set when no such cell remains.
IntegralBounds integrate_pw_harmonic(const PiecewiseHarmonic& f, const WeightVector& w, int max_depth = 12,
                                     double tolerance = 1e-4);

// Exact integrals by the self-similar recursions (second oracle).
Rational integral_closed(const HarmonicSpec& spec, const WeightVector& w);
// Reference constants eps0 = w0/(2-w2) and eps1 = (w2/(4-w0))(2+w0+w2 eps0).
Rational epsilon0(const WeightVector& w);
Rational epsilon1(const WeightVector& w);

// Vertex masses m_v = sum over cells K at v of mu(K) p_j.
std::vector<Rational> lumped_masses(const WeightVector& w, const LevelGraph& g);

struct DoublingRatio {
  Rational lower;                 // bounds on mu(B(x,2r)) / mu(B(x,r))
  std::optional<Rational> upper;  // unset when the inner lower bound is 0
  IntegralBounds inner, outer;
};
DoublingRatio doubling_ratio(const WeightVector& w, const VertexId& x, const Rational& r, int L,
                             const Rational& s0 = Rational(1, 2));

// y_n = F_{2 0^{n-1}}(q2)
VertexId doubling_point(int n);

}  // namespace dendrite
