#pragma once

#include <array>
#include <ostream>
#include <variant>
#include <vector>

#include "dendrite/dirichlet_solver.hpp"

namespace dendrite {

// Boundary data order is (a2, a1, a3): values at q2, q1, q3.
struct UMinus {
  Rational a2, a1, a3;
};
struct UDown {};
struct UUp {};
struct UPlus {
  Rational a, b, c;
};

struct HarmonicSpec {
  std::variant<UMinus, UDown, UUp, UPlus> kind;
  Rational s0 = Rational(1, 2);
};

// Corner values (q1, q2, q3) of a harmonic function on K_w given data on K.
using CornerData = std::array<Rational, 3>;
CornerData extend(int digit, const CornerData& data, const Rational& s0);
CornerData extend(const Word& w, CornerData data, const Rational& s0);

// Corner values of the closed-form function restricted to K_w.
CornerData cell_data(const HarmonicSpec& spec, const Word& w);
// Whether the function is harmonic on the whole cell K_w (no grounded set inside).
bool harmonic_on(const HarmonicSpec& spec, const Word& w);

Rational eval_closed(const HarmonicSpec& spec, const VertexId& v);
Rational eval_closed_raw(const HarmonicSpec& spec, const Word& w, Corner c);
Rational energy_closed(const HarmonicSpec& spec);
// u_down(F_0(q2)) = s2/2.
Rational udown_lambda(const Rational& s0);
// u_up ladder a_m = 4^-(m+1), a_{-1} = 1.
Rational uup_ladder(int m);

// Level-L discrete versions. The graph refines only cells that contain
// grounded level-L points, which is the exact trace of the uniform graph.
struct DiscreteHarmonic {
  VertexFunction<Rational> u;
  Rational energy;
};
DiscreteHarmonic discrete_udown(int L, const Rational& s0);
DiscreteHarmonic discrete_uup(int L);

// Equilibrium potential of a typical point x_{m0,k0} (Xmk) or y_{k0} (Yk)
// against the complement of B(q0, 2^-n), via the exact reduced ladder network.
enum class PsiCase { Xmk, Yk };

struct PsiCoefficients {
  PsiCase kind = PsiCase::Xmk;
  int n = 1, m0 = 0, k0 = 0;
  std::vector<Rational> spine;       // Xmk: a_{m,0}, m = -1..m0 (index m+1)
  std::vector<Rational> chain;       // Xmk: a_{m0,k}, k = 0..k0; Yk: b_k, k = 0..k0
  std::vector<Rational> side;        // Xmk: a_{m,1} = a_{m,0}/4, m = 0..m0-1
  std::vector<Rational> chain_side;  // a'_{m0,k} (Xmk) or b'_k (Yk) = value/4, k = 1..k0-1
  Rational resistance;               // R(x, B_n^c)

  const Rational& a(int m) const { return spine.at(static_cast<std::size_t>(m + 1)); }
  const Rational& ak(int k) const { return chain.at(static_cast<std::size_t>(k)); }
  const Rational& b(int k) const { return chain.at(static_cast<std::size_t>(k)); }
};

PsiCoefficients psi_coefficients(PsiCase kind, int n, int m0, int k0);
// Closed form for k0 = 0: a_{m,0} = f(m)/f(m0), f(m) = 24(1+2^-n)2^m - (3-4*2^-n)4^-m.
std::vector<Rational> psi_case1_closed_form(int n, int m0);

// CSV: case,n,m0,k0,index,value_exact,value_float
void write_csv(std::ostream& os, const PsiCoefficients& c, bool header = true);

}  // namespace dendrite
