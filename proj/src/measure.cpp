#include "dendrite/measure.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <string>

#include "dendrite/errors.hpp"

namespace dendrite {

WeightVector::WeightVector(Rational a0, Rational a1, Rational a2, Rational a3)
    : w0(std::move(a0)), w1(std::move(a1)), w2(std::move(a2)), w3(std::move(a3)) {
  if (w0 <= 0 || w1 <= 0 || w2 <= 0 || w3 <= 0) throw ValidationError("weights must be positive");
  if (w0 != w1 || w2 != w3) throw ValidationError("weights must satisfy w0 = w1 and w2 = w3");
  if (w0 + w1 + w2 + w3 != 1) throw ValidationError("weights must sum to 1");
}

WeightVector WeightVector::symmetric(const Rational& a0, const Rational& a2) { return {a0, a0, a2, a2}; }

WeightVector WeightVector::with_ratio(const Rational& ratio) {
  if (ratio <= 0) throw ValidationError("weight ratio must be positive");
  Rational a0 = 1 / (2 * (1 + ratio));
  return symmetric(a0, ratio * a0);
}

WeightVector WeightVector::parse(std::string_view text) {
  auto comma = text.find(',');
  if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
    throw ValidationError("weights must be given as \"w0,w2\"");
  return symmetric(parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1)));
}

const Rational& WeightVector::operator[](int digit) const {
  switch (digit) {
    case 0: return w0;
    case 1: return w1;
    case 2: return w2;
    case 3: return w3;
    default: throw ValidationError("digit out of range");
  }
}

std::string WeightVector::str() const { return to_string(w0) + "," + to_string(w2); }

nlohmann::json to_json(const WeightVector& w) {
  return {{"w0", to_string(w.w0)}, {"w1", to_string(w.w1)}, {"w2", to_string(w.w2)}, {"w3", to_string(w.w3)}};
}

Rational cell_measure(const WeightVector& w, const Word& word) {
  Rational m(1);
  for (std::size_t i = 0; i < word.size(); ++i) m *= w[word[i]];
  return m;
}

std::array<Rational, 3> corner_eccentricity() { return {Rational(1), Rational(2), Rational(2)}; }

IntegralBounds ball_measure(const WeightVector& w, const LevelGraph& g, const BallRegion& b) {
  if (b.radius >= 2) return {Rational(1), Rational(1), Rational(1)};
  const auto ecc = corner_eccentricity();
  IntegralBounds out{Rational(0), Rational(0), std::nullopt};
  for (const auto& c : g.cells()) {
    int entry = 0;
    for (int j = 1; j < 3; ++j)
      if (b.distance[c.corners[j]] < b.distance[c.corners[entry]]) entry = j;
    const Rational& near = b.distance[c.corners[entry]];
    if (near >= b.radius) continue;
    Rational mu = cell_measure(w, c.word);
    out.upper += mu;
    // Every geodesic into the cell passes its nearest corner; spheres are null.
    if (near + c.scale * ecc[entry] <= b.radius) out.lower += mu;
  }
  if (out.lower == out.upper) out.exact = out.lower;
  return out;
}

IntegralBounds ball_measure(const WeightVector& w, const VertexId& center, const Rational& r, int L,
                            const Rational& s0) {
  check_level(L);
  auto g = build_ball_graph(L, s0, {center, {r}, {}, true});
  return ball_measure(w, *g, ball(*g, center, r));
}

std::array<CornerData, 3> extension_matrix(int digit, const Rational& s0) {
  auto g = build_level_graph(1, s0);
  Word child;
  child.push_back(digit);
  std::array<CornerData, 3> a;
  for (int k = 0; k < 3; ++k) {
    Constraints<Rational> c;
    for (int j = 1; j <= 3; ++j) c.pin(*g, canonicalize(Word(), corner_from_index(j)), Rational(j - 1 == k ? 1 : 0));
    auto u = solve_dirichlet(g, c);
    for (int j = 1; j <= 3; ++j) a[j - 1][k] = u.at(canonicalize(child, corner_from_index(j)));
  }
  return a;
}

CornerData harmonic_weights(const WeightVector& w, const Rational& s0) {
  // (sum_i w_i A_i^T - I) p = 0 with the last row replaced by sum p = 1.
  std::array<std::array<Rational, 4>, 3> m;
  for (auto& row : m) row.fill(Rational(0));
  for (int i = 0; i < 4; ++i) {
    auto a = extension_matrix(i, s0);
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) m[k][j] += w[i] * a[j][k];
  }
  for (int k = 0; k < 3; ++k) m[k][k] -= 1;
  m[2] = {Rational(1), Rational(1), Rational(1), Rational(1)};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    while (m[piv][col] == 0) ++piv;
    std::swap(m[piv], m[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  CornerData p;
  for (int k = 0; k < 3; ++k) p[k] = m[k][3] / m[k][k];
  return p;
}

namespace {

Rational dot(const CornerData& p, const CornerData& d) { return p[0] * d[0] + p[1] * d[1] + p[2] * d[2]; }

std::pair<Rational, Rational> hull(const CornerData& d, std::initializer_list<Rational> extra) {
  Rational lo = d[0], hi = d[0];
  for (const auto& x : d) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  for (const auto& x : extra) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi};
}

}  // namespace

std::optional<CornerData> ClosedFormFunction::harmonic_data(const Word& w) const {
  if (!harmonic_on(spec_, w)) return std::nullopt;
  return cell_data(spec_, w);
}

std::pair<Rational, Rational> ClosedFormFunction::range(const Word& w) const {
  // Off the harmonic cells every closed form is harmonic away from a null set
  // where it vanishes, except u+ at the root, which is glued at F_3(q1).
  auto d = cell_data(spec_, w);
  if (auto* p = std::get_if<UPlus>(&spec_.kind); p && w.size() == 0) return hull(d, {Rational(0), p->c});
  return hull(d, {Rational(0)});
}

GraphFunction::GraphFunction(VertexFunction<Rational> f) : f_(std::move(f)) {
  const auto& cells = f_.graph->cells();
  for (std::size_t i = 0; i < cells.size(); ++i) leaf_.emplace(cells[i].word, i);
}

std::optional<CornerData> GraphFunction::harmonic_data(const Word& w) const {
  for (std::size_t len = 0; len <= w.size(); ++len) {
    auto it = leaf_.find(w.prefix(len));
    if (it == leaf_.end()) continue;
    const auto& c = f_.graph->cells()[it->second];
    CornerData d{f_.values[c.corners[0]], f_.values[c.corners[1]], f_.values[c.corners[2]]};
    return extend(w.suffix(len), d, s0());
  }
  return std::nullopt;
}

std::pair<Rational, Rational> GraphFunction::range(const Word& w) const {
  std::optional<std::pair<Rational, Rational>> out;
  for (auto it = leaf_.lower_bound(w); it != leaf_.end() && w.is_prefix_of(it->first); ++it) {
    const auto& c = f_.graph->cells()[it->second];
    auto h = hull({f_.values[c.corners[0]], f_.values[c.corners[1]], f_.values[c.corners[2]]}, {});
    if (!out) out = h;
    out->first = std::min(out->first, h.first);
    out->second = std::max(out->second, h.second);
  }
  if (!out) throw ValidationError("cell " + w.str() + " is not covered by the graph");
  return *out;
}

IntegralBounds integrate_pw_harmonic(const PiecewiseHarmonic& f, const WeightVector& w, int max_depth,
                                     double tolerance) {
  if (max_depth < 0) throw ValidationError("depth must be non-negative");
  const CornerData p = harmonic_weights(w, f.s0());
  Rational exact_part(0);
  std::vector<Word> open{Word()};
  for (int depth = 0;; ++depth) {
    std::vector<Word> pending;
    for (const auto& cell : open) {
      if (auto d = f.harmonic_data(cell)) {
        exact_part += cell_measure(w, cell) * dot(p, *d);
      } else {
        pending.push_back(cell);
      }
    }
    Rational lo = exact_part, hi = exact_part;
    for (const auto& cell : pending) {
      auto [a, b] = f.range(cell);
      Rational mu = cell_measure(w, cell);
      lo += mu * a;
      hi += mu * b;
    }
    if (pending.empty()) return {exact_part, exact_part, exact_part};
    double gap = to_double(hi - lo);
    double scale = std::max(std::abs(to_double(lo)), std::abs(to_double(hi)));
    if (depth >= max_depth || gap <= tolerance * scale) return {lo, hi, std::nullopt};
    open.clear();
    for (const auto& cell : pending)
      for (int d = 0; d < 4; ++d) {
        Word child = cell;
        child.push_back(d);
        open.push_back(std::move(child));
      }
  }
}

namespace {

Rational integral_udown(const WeightVector& w, const Rational& s0, const CornerData& p) {
  Rational lambda = udown_lambda(s0);
  // I = w0 p.(1,l,1) + w1 p.(1,1,l) + 2 w2 l I
  Rational head = w.w0 * dot(p, {Rational(1), lambda, Rational(1)}) + w.w1 * dot(p, {Rational(1), Rational(1), lambda});
  return head / (1 - (w.w2 + w.w3) * lambda);
}

Rational integral_uplus(const UPlus& u, const WeightVector& w, const Rational& s0, const CornerData& p) {
  Rational mid = s0 * u.a + (1 - s0) * u.b;
  return w.w0 * dot(p, {u.b, mid, u.b}) + w.w1 * dot(p, {u.b, u.b, u.c}) + w.w2 * dot(p, {mid, u.a, mid}) +
         w.w3 * u.c * integral_udown(w, s0, p);
}

}  // namespace

Rational integral_closed(const HarmonicSpec& spec, const WeightVector& w) {
  const CornerData p = harmonic_weights(w, spec.s0);
  return std::visit(
      [&](const auto& k) -> Rational {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, UMinus>) {
          return dot(p, {k.a1, k.a2, k.a3});
        } else if constexpr (std::is_same_v<K, UDown>) {
          return integral_udown(w, spec.s0, p);
        } else if constexpr (std::is_same_v<K, UPlus>) {
          return integral_uplus(k, w, spec.s0, p);
        } else {
          if (spec.s0 != Rational(1, 2)) throw ValidationError("u_up requires s0 = 1/2");
          // I = w0 I / 4 + w2 J, J the integral of u+(1, 1/4, 1/16).
          Rational j = integral_uplus({Rational(1), Rational(1, 4), Rational(1, 16)}, w, spec.s0, p);
          return w.w2 * j / (1 - w.w0 / 4);
        }
      },
      spec.kind);
}

Rational epsilon0(const WeightVector& w) { return w.w0 / (2 - w.w2); }

Rational epsilon1(const WeightVector& w) { return (w.w2 / (4 - w.w0)) * (2 + w.w0 + w.w2 * epsilon0(w)); }

std::vector<Rational> lumped_masses(const WeightVector& w, const LevelGraph& g) {
  const CornerData p = harmonic_weights(w, g.s0());
  std::vector<Rational> m(g.vertex_count(), Rational(0));
  for (const auto& c : g.cells()) {
    Rational mu = cell_measure(w, c.word);
    for (int j = 0; j < 3; ++j) m[c.corners[j]] += mu * p[j];
  }
  return m;
}

DoublingRatio doubling_ratio(const WeightVector& w, const VertexId& x, const Rational& r, int L, const Rational& s0) {
  check_level(L);
  if (r <= 0) throw ValidationError("radius must be positive");
  auto g = build_ball_graph(L, s0, {x, {r, 2 * r}, {}, true});
  DoublingRatio out;
  out.inner = ball_measure(w, *g, ball(*g, x, r));
  out.outer = ball_measure(w, *g, ball(*g, x, 2 * r));
  out.lower = out.outer.lower / out.inner.upper;
  if (out.inner.lower > 0) out.upper = out.outer.upper / out.inner.lower;
  return out;
}

VertexId doubling_point(int n) {
  if (n < 1) throw ValidationError("n must be >= 1");
  return canonicalize(Word("2") + Word::repeat(0, n - 1), Corner::Q2);
}

}  // namespace dendrite
