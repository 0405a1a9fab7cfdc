#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dendrite/measure.hpp"

namespace dendrite {

// Named points of the ball B_n = B(q0, 2^-n):
//   x_{m,k} = F_{0 2^{n-1} 0^m 2 3^k}(q1), y_k = F_{2 0^{n-1} 2^k}(q1),
// and their reflected variants F_{0 2^{n-1} 0^m 2 3 tail}(q1), F_{2 w1 w2}(q1).
struct TypicalPoint {
  enum class Kind { Q0, Xmk, Yk, ReflectedXmk, ReflectedYk };
  Kind kind = Kind::Q0;
  int n = 1;
  int m = 0, k = 0;
  Word tail;    // ReflectedXmk: {2,3}^{k-1}
  Word omega1;  // ReflectedYk: {0,1}^{n-1}
  Word omega2;  // ReflectedYk: {2,3}^k

  static TypicalPoint q0(int n);
  static TypicalPoint x(int n, int m, int k);
  static TypicalPoint y(int n, int k);
  static TypicalPoint reflected_x(int n, int m, Word tail);
  static TypicalPoint reflected_y(int n, Word omega1, Word omega2);
  static TypicalPoint parse(const std::string& text, int n);  // q0, x:m:k, y:k
  std::string str() const;
};

VertexId typical_point(const TypicalPoint& tp);

// Lexicographically least infinite address of a lattice point, truncated.
std::string first_address(const VertexId& v, std::size_t length);

// Two networks bracket R(x, B_n^c): grounding only the frontier vertices
// (upper, decreasing in L) and grounding every cell that reaches the sphere
// (lower, increasing in L).
struct BoundaryResistance {
  GraphPtr graph;
  BallRegion ball;
  double resistance = 0;
  double resistance_lower = 0;
  VertexFunction<double> psi;        // upper network
  VertexFunction<double> psi_lower;  // lower network; all zero when x is grounded there
};

// Ball graph of level L around q0, refined at the sphere and with the
// listed points as vertices.
GraphPtr ball_graph(int n, int L, const std::vector<VertexId>& anchors, bool fill = false);
// Vertices of every cell that meets the closed complement of the ball.
std::vector<std::size_t> outer_ground(const LevelGraph& g, const BallRegion& b);

BoundaryResistance boundary_resistance(const VertexId& x, int n, int L);
BoundaryResistance boundary_resistance(const GraphPtr& g, const VertexId& x, int n);

struct ReductionResult {
  VertexId x, zL, zR;
  double R_zL = 0, R_zR = 0;  // measured R(z_a, B_n^c)
  double R_zLzR = 0;          // R(z_L, z_R)
  double rL = 0, rR = 0;      // outer resistances of the reduced network
  double branch = 0;          // R(x, x*), x* the projection of x on the arc z_L z_R
  double R_x = 0;             // reduced-network resistance R(x, B_n^c)
  double psi_zL = 0, psi_zR = 0;
  Rational A_mass, D_mass;    // mu(A_n^x), mu(D_n^x)
  bool degenerate = false;    // x coincides with z_L or z_R
};

// Reduction nodes from the address scan; throws ValidationError if x is not
// an interior point of B_n.
std::pair<VertexId, VertexId> reduction_nodes(const VertexId& x, int n);
ReductionResult network_reduce(const VertexId& x, int n, int L, const WeightVector& w = WeightVector::equal());
ReductionResult network_reduce(const GraphPtr& g, const VertexId& x, int n,
                               const WeightVector& w = WeightVector::equal());

// mu(A_n^x), mu(D_n^x) for x in B_n.
std::pair<Rational, Rational> exit_masses(const VertexId& x, int n, const WeightVector& w);
Rational upper_ball_measure(int n, const WeightVector& w);  // mu(B_n up)
Rational lower_ball_measure(int n, const WeightVector& w);  // mu(B_n down)

struct G1Identity {
  int n = 0, L = 0;
  VertexId x;
  std::string x_kind;  // typical-point label, or the vertex id
  double R_lower = 0, R_upper = 0;
  double int_lower = 0, int_upper = 0;  // integral of psi over B_n
  double g1_lower = 0, g1_upper = 0;
  double g1 = 0;                        // R * integral on the level-L network
};

// Vertex masses of the self-similar measure lumped onto the ball interior.
std::vector<double> interior_masses(const WeightVector& w, const LevelGraph& g, const BallRegion& b);

G1Identity g1_via_identity(const VertexId& x, int n, const WeightVector& w, int L);
G1Identity g1_via_identity(const GraphPtr& g, const VertexId& x, int n, const WeightVector& w);

struct ExitRow {
  int n = 0, L = 0;
  double inf_g1 = 0;   // inf over B(q0, 4^-n 2^-n), cut points included
  double inf_vertex_g1 = 0;
  VertexId inf_at;
  double sup_g1 = 0;
  VertexId sup_at;
  double ratio = 0;
  double mu_ball = 0;
  double eout_constant = 0;  // sup over B_n minus half ball of G1 / (d_R(x, B_n^c) mu(B_n))
};

struct SlopeFit {
  double slope = 0, intercept = 0, stderr_ = 0;
};
SlopeFit fit_log2_slope(const std::vector<int>& n, const std::vector<double>& values);

struct ExitReport {
  WeightVector weights = WeightVector::equal();
  int L_offset = 5;
  std::vector<ExitRow> rows;
  SlopeFit fit;
};

ExitReport exit_ratio_experiment(int n_min, int n_max, const WeightVector& w, int L_offset = 5);

void write_csv(std::ostream& os, const ExitReport& r);
nlohmann::json to_json(const ExitReport& r);
void write_csv(std::ostream& os, const std::vector<G1Identity>& rows);

}  // namespace dendrite
