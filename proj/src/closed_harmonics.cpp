#include "dendrite/closed_harmonics.hpp"

#include "dendrite/errors.hpp"

namespace dendrite {

namespace {

void require_half(const Rational& s0, const char* what) {
  if (s0 != Rational(1, 2)) throw ValidationError(std::string(what) + " is only available for s0 = 1/2");
}

CornerData scaled(const Rational& k, CornerData d) {
  for (auto& x : d) x *= k;
  return d;
}

CornerData udown_data(const Word& w, const Rational& s0) {
  Rational lambda = udown_lambda(s0);
  Rational factor(1);
  std::size_t i = 0;
  while (i < w.size() && w[i] >= 2) {
    factor *= lambda;
    ++i;
  }
  if (i == w.size()) return {factor, Rational(0), Rational(0)};
  CornerData start = w[i] == 0 ? CornerData{Rational(1), lambda, Rational(1)}
                               : CornerData{Rational(1), Rational(1), lambda};
  return scaled(factor, extend(w.suffix(i + 1), start, s0));
}

CornerData uplus_data(const UPlus& p, const Word& w, const Rational& s0) {
  if (w.empty()) return {p.b, p.a, Rational(0)};
  Rational s2 = 1 - s0;
  Rational mid = s0 * p.a + s2 * p.b;
  Word rest = w.suffix(1);
  switch (w[0]) {
    case 0: return extend(rest, {p.b, mid, p.b}, s0);
    case 1: return extend(rest, {p.b, p.b, p.c}, s0);
    case 2: return extend(rest, {mid, p.a, mid}, s0);
    default: return scaled(p.c, udown_data(rest, s0));
  }
}

CornerData uup_data(const Word& w) {
  const Rational half(1, 2);
  std::size_t m = 0;
  while (m < w.size() && w[m] == 0) ++m;
  int mi = static_cast<int>(m);
  if (m == w.size()) return {Rational(0), uup_ladder(mi - 1), Rational(0)};
  if (w[m] == 1 || w[m] == 3) return {Rational(0), Rational(0), Rational(0)};
  Rational am = uup_ladder(mi);
  return uplus_data({uup_ladder(mi - 1), am, am / 4}, w.suffix(m + 1), half);
}

bool udown_harmonic(const Word& w) { return !w.all_in("23"); }

bool uplus_harmonic(const Word& w) { return !w.empty() && (w[0] != 3 || udown_harmonic(w.suffix(1))); }

}  // namespace

CornerData extend(int digit, const CornerData& d, const Rational& s0) {
  Rational s2 = 1 - s0;
  switch (digit) {
    case 0: return {d[0], s2 * d[0] + s0 * d[1], d[0]};
    case 1: return {d[0], d[0], s2 * d[0] + s0 * d[2]};
    case 2: return {s2 * d[0] + s0 * d[1], d[1], s2 * d[0] + s0 * d[1]};
    default: return {s2 * d[0] + s0 * d[2], s2 * d[0] + s0 * d[2], d[2]};
  }
}

CornerData extend(const Word& w, CornerData data, const Rational& s0) {
  for (std::size_t i = 0; i < w.size(); ++i) data = extend(w[i], data, s0);
  return data;
}

Rational udown_lambda(const Rational& s0) { return (1 - s0) / 2; }

Rational uup_ladder(int m) { return power(Rational(1, 4), m + 1); }

CornerData cell_data(const HarmonicSpec& spec, const Word& w) {
  const Rational& s0 = spec.s0;
  if (s0 <= 0 || s0 >= 1) throw ValidationError("s0 must lie in (0,1)");
  return std::visit(
      [&](const auto& k) -> CornerData {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, UMinus>) {
          return extend(w, {k.a1, k.a2, k.a3}, s0);
        } else if constexpr (std::is_same_v<K, UDown>) {
          return udown_data(w, s0);
        } else if constexpr (std::is_same_v<K, UUp>) {
          require_half(s0, "u_up");
          return uup_data(w);
        } else {
          return uplus_data(k, w, s0);
        }
      },
      spec.kind);
}

bool harmonic_on(const HarmonicSpec& spec, const Word& w) {
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, UMinus>) {
          return true;
        } else if constexpr (std::is_same_v<K, UDown>) {
          return udown_harmonic(w);
        } else if constexpr (std::is_same_v<K, UUp>) {
          std::size_t m = 0;
          while (m < w.size() && w[m] == 0) ++m;
          if (m == w.size()) return false;
          if (w[m] != 2) return true;
          return uplus_harmonic(w.suffix(m + 1));
        } else {
          return uplus_harmonic(w);
        }
      },
      spec.kind);
}

Rational eval_closed_raw(const HarmonicSpec& spec, const Word& w, Corner c) {
  return cell_data(spec, w)[corner_index(c) - 1];
}

Rational eval_closed(const HarmonicSpec& spec, const VertexId& v) { return eval_closed_raw(spec, v.word, v.corner); }

Rational energy_closed(const HarmonicSpec& spec) {
  const Rational& s0 = spec.s0;
  if (s0 <= 0 || s0 >= 1) throw ValidationError("s0 must lie in (0,1)");
  Rational s2 = 1 - s0;
  return std::visit(
      [&](const auto& k) -> Rational {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, UMinus>) {
          Rational d2 = k.a1 - k.a2, d3 = k.a1 - k.a3;
          return d2 * d2 + d3 * d3;
        } else if constexpr (std::is_same_v<K, UDown>) {
          return 1 / s0 + 1;
        } else if constexpr (std::is_same_v<K, UUp>) {
          require_half(s0, "u_up");
          return Rational(3, 2);
        } else {
          Rational ab = k.a - k.b, bc = k.b - k.c;
          return ab * ab + bc * bc / s0 + (1 / s0 + 1) * k.c * k.c / s2;
        }
      },
      spec.kind);
}

DiscreteHarmonic discrete_udown(int L, const Rational& s0) {
  auto g = build_refined_graph(L, s0, [](const Word& w) { return w.all_in("23"); });
  Constraints<Rational> c;
  c.pin(*g, q1(), Rational(1));
  for (std::size_t v = 0; v < g->vertex_count(); ++v)
    if (in_cantor_piece(g->vertex(v), Word())) c.pin(v, Rational(0));
  auto u = solve_dirichlet(g, c);
  Rational e = dirichlet_energy(u);
  return {std::move(u), std::move(e)};
}

DiscreteHarmonic discrete_uup(int L) {
  // Grounded: q1 and every F_{0^m 2 3}(C); value 1 at q2.
  auto refine = [](const Word& w) {
    std::size_t m = 0;
    while (m < w.size() && w[m] == 0) ++m;
    Word rest = w.suffix(m);
    return rest.empty() || rest == Word("2") || (rest.size() >= 2 && rest[0] == 2 && rest[1] == 3 && rest.all_in("23"));
  };
  auto g = build_refined_graph(L, Rational(1, 2), refine);
  Constraints<Rational> c;
  c.pin(*g, q1(), Rational(0));
  c.pin(*g, q2(), Rational(1));
  for (std::size_t v = 0; v < g->vertex_count(); ++v) {
    const auto& id = g->vertex(v);
    std::size_t m = 0;
    while (m < id.word.size() && id.word[m] == 0) ++m;
    if (in_cantor_piece(id, Word::repeat(0, m) + Word("23"))) c.pin(v, Rational(0));
  }
  auto u = solve_dirichlet(g, c);
  Rational e = dirichlet_energy(u);
  return {std::move(u), std::move(e)};
}

namespace {

// Path q0 = node 0, ..., x = node N. shunt[i]: conductance to ground hanging
// off node i on the q0 side (or beyond x for node N); series[i]: resistance
// between nodes i and i+1.
struct Ladder {
  std::vector<Rational> shunt;
  std::vector<Rational> series;
};

struct LadderSolution {
  std::vector<Rational> value;
  Rational resistance;
};

LadderSolution solve_ladder(const Ladder& l) {
  const std::size_t n = l.shunt.size();
  std::vector<Rational> y(n);  // conductance to ground of nodes 0..i seen from i
  y[0] = l.shunt[0];
  for (std::size_t i = 1; i < n; ++i) y[i] = l.shunt[i] + 1 / (l.series[i - 1] + 1 / y[i - 1]);
  LadderSolution s;
  s.value.assign(n, Rational(0));
  s.value[n - 1] = 1;
  for (std::size_t i = n - 1; i > 0; --i) s.value[i - 1] = s.value[i] / (1 + l.series[i - 1] * y[i - 1]);
  s.resistance = 1 / y[n - 1];
  return s;
}

}  // namespace

PsiCoefficients psi_coefficients(PsiCase kind, int n, int m0, int k0) {
  if (n < 1) throw ValidationError("psi_coefficients needs n >= 1");
  if (kind == PsiCase::Xmk && (m0 < 0 || k0 < 0)) throw ValidationError("Xmk needs m0, k0 >= 0");
  if (kind == PsiCase::Yk && k0 < 1) throw ValidationError("Yk needs k0 >= 1");
  PsiCoefficients out;
  out.kind = kind;
  out.n = n;
  out.m0 = kind == PsiCase::Xmk ? m0 : 0;
  out.k0 = k0;
  const Rational t = pow2(-n);
  const Rational third(1, 3);
  Ladder l;
  if (kind == PsiCase::Xmk) {
    // q0: the whole lower fan, 2^{n-1} u_down cells of resistance 2^-n/3.
    l.shunt.push_back(3 * pow2(2 * n - 1));
    for (int m = 0; m <= m0; ++m) {
      Rational sm = pow2(-(n + m + 1));
      l.series.push_back(sm);
      // Branch p_m -> x_{m,1} -> u_down cell: s/2 + s/6.
      l.shunt.push_back(m < m0 ? 1 / (Rational(2, 3) * sm) : Rational(0));
    }
    Rational s = pow2(-(n + m0 + 1));
    // Everything beyond C_{m0} seen from p_{m0}: resistance (2/3)s.
    l.shunt.back() += 1 / (Rational(2, 3) * s);
    if (k0 == 0) {
      l.shunt.back() += 1 / (Rational(2, 3) * s);
    } else {
      for (int k = 1; k <= k0; ++k) {
        l.series.push_back(s * pow2(-k));
        // Side branch at x_{m0,k}, or the u_down cell below x_{m0,k0}.
        l.shunt.push_back(k < k0 ? 1 / (Rational(4, 3) * s * pow2(-k - 1)) : 1 / (s * pow2(-k0) * third));
      }
    }
  } else {
    Rational q0_shunt = 1 / (Rational(2, 3) * t) + (pow2(n - 1) - 1) * 3 * pow2(n) + 1 / (Rational(4, 3) * t / 2);
    l.shunt.push_back(q0_shunt);
    for (int k = 1; k <= k0; ++k) {
      l.series.push_back(t * pow2(-k));
      l.shunt.push_back(k < k0 ? 1 / (Rational(4, 3) * t * pow2(-k - 1)) : 1 / (t * pow2(-k0) * third));
    }
  }
  auto sol = solve_ladder(l);
  out.resistance = sol.resistance;
  if (kind == PsiCase::Xmk) {
    out.spine.assign(sol.value.begin(), sol.value.begin() + m0 + 2);
    out.chain.push_back(out.spine.back());
    out.chain.insert(out.chain.end(), sol.value.begin() + m0 + 2, sol.value.end());
    for (int m = 0; m < m0; ++m) out.side.push_back(out.a(m) / 4);
  } else {
    out.chain = sol.value;
  }
  for (int k = 1; k < k0; ++k) out.chain_side.push_back(out.chain[static_cast<std::size_t>(k)] / 4);
  return out;
}

std::vector<Rational> psi_case1_closed_form(int n, int m0) {
  if (n < 1 || m0 < 0) throw ValidationError("psi_case1_closed_form needs n >= 1, m0 >= 0");
  Rational p = 1 + pow2(-n), q = 3 - 4 * pow2(-n);
  auto f = [&](int m) -> Rational { return 24 * p * pow2(m) - q * power(Rational(4), -m); };
  std::vector<Rational> out;
  Rational d = f(m0);
  for (int m = -1; m <= m0; ++m) out.push_back(f(m) / d);
  return out;
}

void write_csv(std::ostream& os, const PsiCoefficients& c, bool header) {
  if (header) os << "case,n,m0,k0,index,value_exact,value_float\n";
  std::string name = c.kind == PsiCase::Xmk ? "Xmk" : "Yk";
  auto row = [&](const std::string& index, const Rational& v) {
    os << name << ',' << c.n << ',' << c.m0 << ',' << c.k0 << ',' << index << ',' << to_string(v) << ','
       << format_double(to_double(v)) << '\n';
  };
  if (c.kind == PsiCase::Xmk) {
    for (int m = -1; m <= c.m0; ++m) row("a_m0:" + std::to_string(m), c.a(m));
    for (int k = 0; k <= c.k0; ++k) row("a_m0k:" + std::to_string(k), c.ak(k));
    for (int m = 0; m < c.m0; ++m) row("a_m1:" + std::to_string(m), c.side[static_cast<std::size_t>(m)]);
    for (int k = 1; k < c.k0; ++k) row("a_prime:" + std::to_string(k), c.chain_side[static_cast<std::size_t>(k - 1)]);
  } else {
    for (int k = 0; k <= c.k0; ++k) row("b:" + std::to_string(k), c.b(k));
    for (int k = 1; k < c.k0; ++k) row("b_prime:" + std::to_string(k), c.chain_side[static_cast<std::size_t>(k - 1)]);
  }
  row("resistance", c.resistance);
}

}  // namespace dendrite
