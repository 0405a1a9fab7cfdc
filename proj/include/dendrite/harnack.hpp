#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dendrite/exit_time.hpp"

namespace dendrite {

// Boundary data on the sphere of B_n = B(q0, 2^-n). The sphere is the union of
// the upper pieces P_{n,m} = F_{0 2^{n-1} 0^m 2 3}(C), their limit point
// F_{0 2^{n-1}}(q1), and the lower pieces P_{n,w} = F_{2 w}(C), w in {0,1}^{n-1}.
struct BoundaryProfile {
  enum class Kind { UpperPiece, LowerPiece, Mixture };
  Kind kind = Kind::UpperPiece;
  int m = 0, k = 1;  // UpperPiece: F_{0 2^{n-1} 0^m 2 3^k}(C), k >= 1
  Word omega;        // LowerPiece: F_{2 omega 2^k}(C), k >= 0
  // Mixture: value upper[m] on P_{n,m}; upper_tail on every later upper piece
  // and the limit point; lower[w] on P_{n,w} (missing words are 0).
  std::vector<Rational> upper;
  Rational upper_tail;
  std::map<Word, Rational> lower;

  static BoundaryProfile upper_piece(int m, int k);
  static BoundaryProfile lower_piece(Word omega, int k);
  static BoundaryProfile mixture(std::vector<Rational> upper, Rational upper_tail, std::map<Word, Rational> lower);
  // Constant 1 on the whole sphere of B_n.
  static BoundaryProfile uniform(int n);
  // "upper:m:k", "lower:omega:k", "uniform".
  static BoundaryProfile parse(const std::string& text, int n);

  // Parts carried by the upper and by the lower sphere.
  BoundaryProfile upper_part() const;
  BoundaryProfile lower_part() const;

  void validate(int n) const;
  // Boundary value at a sphere point of B_n.
  Rational value(const VertexId& v, int n) const;
  // Length of the longest designated cylinder word, for the level precondition.
  int depth(int n) const;
  std::string str() const;
};

// Ball graph refined at radius 2^-n and at the extra radii.
GraphPtr harnack_graph(int n, int L, const std::vector<Rational>& extra_radii = {}, bool fill = false,
                       const std::vector<VertexId>& anchors = {});

template <class T>
VertexFunction<T> boundary_harmonic(const GraphPtr& g, int n, const BoundaryProfile& profile);
VertexFunction<double> boundary_harmonic(int n, const BoundaryProfile& profile, int L);

struct EhiResult {
  int n = 0, k = 0, L = 0;
  Rational epsilon;
  double inf = 0, sup = 0;
  double ratio = 0;  // inf / sup
  double model = 0;  // 1 / (2^n eps + 1)
  VertexId inf_at, sup_at;
};

// Extremes over the closed ball eps B_n, vertices and sphere crossings, of the
// harmonic function with data 1 on F_{2 0^{n-1} 2^k}(C).
EhiResult ehi_ratio(int n, int k, const Rational& epsilon, int L);

struct Bounds {
  double lower = 0, upper = 0;
  double midpoint() const { return (lower + upper) / 2; }
};

struct HarnackReport {
  int n = 0, L = 0;
  Rational delta, epsilon = Rational(1, 2);
  WeightVector weights = WeightVector::equal();
  std::string profile;
  Rational rho;                        // set by the threshold scan
  Bounds mean_delta_power;             // mu-average of u^delta over eps B_n
  double inf = 0;                      // inf of u over eps B_n
  Bounds inf_delta_power;
  Bounds ratio;                        // mean / inf^delta, always >= 1
  std::optional<double> growth_factor_per_n;
};

// Harmonic function on B_n together with the geometry needed for averaging
// over the half ball; reused across weights and exponents.
struct HalfBallSolution {
  int n = 0;
  GraphPtr graph;
  BallRegion half;
  VertexFunction<double> u;
  std::string profile;
};
HalfBallSolution solve_on_ball(int n, const BoundaryProfile& profile, int L);
HarnackReport weh_ratio(const HalfBallSolution& s, const Rational& delta, const WeightVector& w);
HarnackReport weh_ratio(int n, const Rational& delta, const WeightVector& w, const BoundaryProfile& profile, int L);

// Weights with w2 / w0 = 2^{1-delta} rho. For irrational ratios the factor
// 2^{1-delta} is replaced by the nearest double, converted exactly.
WeightVector threshold_weights(const Rational& delta, const Rational& rho);

struct ThresholdScan {
  Rational delta;
  int n_min = 0, n_max = 0, L_offset = 0;
  std::string profile;
  std::vector<Rational> rhos;
  std::vector<HarnackReport> rows;  // ordered by rho then n
  std::map<std::string, double> growth;            // rho ("p/q") -> growth_factor
  std::map<std::string, double> growth_loglinear;  // rho ("p/q") -> loglinear_growth
  double growth_for(const Rational& rho) const;
};

ThresholdScan weh_threshold_scan(const Rational& delta, const std::vector<Rational>& rhos, int n_min, int n_max,
                                 int L_offset = 6, const BoundaryProfile& profile = BoundaryProfile::upper_piece(0, 1));

// The ratio behaves like a + b g^n: a bounded part plus an exponential one.
// growth_factor fits g from the trailing run of increases of the ratio
// midpoints and returns it when g > 1; otherwise the ratio settles and the
// log-linear fit is returned. Needs three consecutive n.
double growth_factor(const std::vector<HarnackReport>& rows);
// 2^slope of log2 of the ratio midpoints; biased towards 1 while a dominates.
double loglinear_growth(const std::vector<HarnackReport>& rows);

void write_csv(std::ostream& os, const std::vector<HarnackReport>& rows);
nlohmann::json to_json(const ThresholdScan& s);
void write_csv(std::ostream& os, const std::vector<EhiResult>& rows);

}  // namespace dendrite
