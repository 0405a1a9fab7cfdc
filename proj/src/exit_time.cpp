#include "dendrite/exit_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dendrite/errors.hpp"

namespace dendrite {

namespace {

void require_n(int n) {
  if (n < 1) throw ValidationError("ball index n must be >= 1");
}

bool digits_in(const Word& w, int a, int b) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != a && w[i] != b) return false;
  return true;
}

// Infinite address as a finite prefix followed by a repeated digit.
struct Address {
  std::string head;
  char tail;
  char operator[](std::size_t i) const { return i < head.size() ? head[i] : tail; }
};

Address least_address(const VertexId& v) {
  std::string w = v.word.str();
  if (w == "-") w.clear();
  if (v.corner == Corner::Q2) return {w, '2'};
  if (v.corner == Corner::Q3) return {w, '3'};
  if (w.empty()) return {w, '0'};
  // F_{u2}(q1) = F_{u0}(q2) and F_{u3}(q1) = F_{u1}(q3).
  char last = w.back();
  w.back() = last == '2' ? '0' : '1';
  return {w, last};
}

VertexId at(const std::string& word, Corner c) { return canonicalize(Word(word), c); }

}  // namespace

TypicalPoint TypicalPoint::q0(int n) {
  require_n(n);
  TypicalPoint t;
  t.n = n;
  return t;
}

TypicalPoint TypicalPoint::x(int n, int m, int k) {
  require_n(n);
  if (m < 0 || k < 0) throw ValidationError("x_{m,k} needs m, k >= 0");
  TypicalPoint t;
  t.kind = Kind::Xmk;
  t.n = n;
  t.m = m;
  t.k = k;
  return t;
}

TypicalPoint TypicalPoint::y(int n, int k) {
  require_n(n);
  if (k < 1) throw ValidationError("y_k needs k >= 1");
  TypicalPoint t;
  t.kind = Kind::Yk;
  t.n = n;
  t.k = k;
  return t;
}

TypicalPoint TypicalPoint::reflected_x(int n, int m, Word tail) {
  require_n(n);
  if (m < 0) throw ValidationError("reflected x_{m,k} needs m >= 0");
  if (!digits_in(tail, 2, 3)) throw ValidationError("reflected x tail must be a word over {2,3}");
  TypicalPoint t;
  t.kind = Kind::ReflectedXmk;
  t.n = n;
  t.m = m;
  t.k = static_cast<int>(tail.size()) + 1;
  t.tail = std::move(tail);
  return t;
}

TypicalPoint TypicalPoint::reflected_y(int n, Word omega1, Word omega2) {
  require_n(n);
  if (static_cast<int>(omega1.size()) != n - 1 || !digits_in(omega1, 0, 1))
    throw ValidationError("reflected y needs omega1 in {0,1}^(n-1)");
  if (omega2.size() == 0 || !digits_in(omega2, 2, 3)) throw ValidationError("reflected y needs omega2 in {2,3}^k, k >= 1");
  TypicalPoint t;
  t.kind = Kind::ReflectedYk;
  t.n = n;
  t.k = static_cast<int>(omega2.size());
  t.omega1 = std::move(omega1);
  t.omega2 = std::move(omega2);
  return t;
}

TypicalPoint TypicalPoint::parse(const std::string& text, int n) {
  if (text == "q0") return q0(n);
  std::vector<int> parts;
  std::stringstream ss(text.size() > 2 ? text.substr(2) : "");
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ValidationError("bad typical point '" + text + "'");
    }
  }
  if (text.rfind("x:", 0) == 0 && parts.size() == 2) return x(n, parts[0], parts[1]);
  if (text.rfind("y:", 0) == 0 && parts.size() == 1) return y(n, parts[0]);
  throw ValidationError("typical point must be q0, x:m:k or y:k, got '" + text + "'");
}

std::string TypicalPoint::str() const {
  switch (kind) {
    case Kind::Q0: return "q0";
    case Kind::Xmk: return "x(" + std::to_string(m) + "," + std::to_string(k) + ")";
    case Kind::Yk: return "y(" + std::to_string(k) + ")";
    case Kind::ReflectedXmk: return "x(" + std::to_string(m) + ",3" + tail.str() + ")";
    case Kind::ReflectedYk: return "y(" + omega1.str() + "," + omega2.str() + ")";
  }
  return "";
}

VertexId typical_point(const TypicalPoint& tp) {
  require_n(tp.n);
  Word w;
  switch (tp.kind) {
    case TypicalPoint::Kind::Q0: return q0();
    case TypicalPoint::Kind::Xmk:
      w = Word("0") + Word::repeat(2, tp.n - 1) + Word::repeat(0, tp.m) + Word("2") + Word::repeat(3, tp.k);
      break;
    case TypicalPoint::Kind::Yk: w = Word("2") + Word::repeat(0, tp.n - 1) + Word::repeat(2, tp.k); break;
    case TypicalPoint::Kind::ReflectedXmk:
      w = Word("0") + Word::repeat(2, tp.n - 1) + Word::repeat(0, tp.m) + Word("23") + tp.tail;
      break;
    case TypicalPoint::Kind::ReflectedYk: w = Word("2") + tp.omega1 + tp.omega2; break;
  }
  check_level(static_cast<int>(w.size()));
  return canonicalize(w, Corner::Q1);
}

std::string first_address(const VertexId& v, std::size_t length) {
  Address a = least_address(v);
  std::string out;
  for (std::size_t i = 0; i < length; ++i) out.push_back(a[i]);
  return out;
}

GraphPtr ball_graph(int n, int L, const std::vector<VertexId>& anchors, bool fill) {
  require_n(n);
  check_level(L);
  return build_ball_graph(L, Rational(1, 2), {q0(), {pow2(-n)}, anchors, fill});
}

std::vector<std::size_t> outer_ground(const LevelGraph& g, const BallRegion& b) {
  const auto ecc = corner_eccentricity();
  std::vector<char> mark(g.vertex_count(), 0);
  for (std::size_t v : b.frontier) mark[v] = 1;
  for (const auto& c : g.cells()) {
    int entry = 0;
    for (int j = 1; j < 3; ++j)
      if (b.distance[c.corners[j]] < b.distance[c.corners[entry]]) entry = j;
    if (b.distance[c.corners[entry]] + c.scale * ecc[entry] >= b.radius)
      for (auto v : c.corners) mark[v] = 1;
  }
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < mark.size(); ++v)
    if (mark[v]) out.push_back(v);
  return out;
}

BoundaryResistance boundary_resistance(const GraphPtr& g, const VertexId& x, int n) {
  require_n(n);
  BoundaryResistance out;
  out.graph = g;
  out.ball = ball(*g, q0(), pow2(-n));
  std::size_t xi = g->index_of(x);
  if (!out.ball.is_interior[xi]) throw ValidationError(x.str() + " is not interior to B_" + std::to_string(n));
  auto upper = equilibrium_potential<double>(g, x, out.ball.frontier);
  out.resistance = upper.resistance;
  out.psi = std::move(upper.psi);
  auto ground = outer_ground(*g, out.ball);
  if (std::binary_search(ground.begin(), ground.end(), xi)) {
    out.resistance_lower = 0;
    out.psi_lower = {g, std::vector<double>(g->vertex_count(), 0.0)};
  } else {
    auto lower = equilibrium_potential<double>(g, x, ground);
    out.resistance_lower = lower.resistance;
    out.psi_lower = std::move(lower.psi);
  }
  return out;
}

BoundaryResistance boundary_resistance(const VertexId& x, int n, int L) {
  return boundary_resistance(ball_graph(n, L, {x}), x, n);
}

std::pair<VertexId, VertexId> reduction_nodes(const VertexId& x, int n) {
  require_n(n);
  const Address a = least_address(x);
  auto fail = [&] { return ValidationError(x.str() + " is not an interior point of B_" + std::to_string(n)); };
  // Length of the run of digits in {p, q} starting at i; -1 if it never ends.
  auto run = [&](std::size_t i, char p, char q) -> long {
    std::size_t j = i;
    while (j < a.head.size() && (a.head[j] == p || a.head[j] == q)) ++j;
    if (j >= a.head.size() && (a.tail == p || a.tail == q)) return -1;
    return static_cast<long>(j - i);
  };
  auto prefix = [&](std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(a[i]);
    return s;
  };
  const std::size_t un = static_cast<std::size_t>(n);
  if (a[0] == '0') {
    for (std::size_t i = 1; i < un; ++i)
      if (a[i] != '2') throw fail();
    long m = run(un, '0', '0');
    if (m < 0 || a[un + static_cast<std::size_t>(m)] != '2') throw fail();
    const std::size_t p_len = un + static_cast<std::size_t>(m) + 1;
    const std::string p = prefix(p_len);
    char d = a[p_len];
    if (d == '0' || d == '2') return {at(p, Corner::Q2), at(p, Corner::Q1)};
    if (d == '1') return {at(p, Corner::Q1), at(p + "3", Corner::Q1)};
    // A run 3w, w over {2,3}, then i in {0,1}: x lies in K_{P3wi}.
    long k = run(p_len, '2', '3');
    if (k < 0) throw fail();
    const std::string q = prefix(p_len + static_cast<std::size_t>(k));
    char i = a[q.size()];
    return {at(q, Corner::Q1), at(q + i, i == '0' ? Corner::Q2 : Corner::Q3)};
  }
  if (a[0] == '2') {
    for (std::size_t i = 1; i < un; ++i)
      if (a[i] != '0' && a[i] != '1') throw fail();
    long m = run(un, '2', '3');
    if (m < 0) throw fail();
    const std::size_t q_len = un + static_cast<std::size_t>(m);
    const std::string q = prefix(q_len);
    char i = a[q_len];
    return {at(q, Corner::Q1), at(q + i, i == '0' ? Corner::Q2 : Corner::Q3)};
  }
  throw fail();
}

Rational upper_ball_measure(int n, const WeightVector& w) {
  require_n(n);
  return w.w0 * power(w.w2, n) / (1 - w.w0);
}

Rational lower_ball_measure(int n, const WeightVector& w) {
  require_n(n);
  return w.w2 * power(w.w0 + w.w1, n - 1);
}

std::pair<Rational, Rational> exit_masses(const VertexId& x, int n, const WeightVector& w) {
  Rational up = upper_ball_measure(n, w), down = lower_ball_measure(n, w);
  if (x == q0()) return {up + down, up + down};
  reduction_nodes(x, n);  // validates membership
  if (first_address(x, 1) == "0") return {up, down};
  return {w.w2 * power(w.w0, n - 1), up + down};
}

namespace {

// Outer resistances (r_L, r_R) of the triangle {z_L, z_R, ground} with
// z_L-z_R side d, from R(z_L, ground) = RL and R(z_R, ground) = RR.
std::pair<double, double> solve_outer(double RL, double RR, double d) {
  const double inf = std::numeric_limits<double>::infinity();
  double delta = (RL - RR) / d, sigma = RL + RR;
  double A = 1 - delta * delta;
  if (A <= 1e-12) return delta > 0 ? std::make_pair(inf, RR) : std::make_pair(RL, inf);
  double B = -2 * delta * delta * d - 2 * sigma + 2 * d;
  double C = -delta * delta * d * d - 2 * sigma * d;
  double t = (-B + std::sqrt(B * B - 4 * A * C)) / (2 * A);
  double u = delta * (t + d);
  return {(t + u) / 2, (t - u) / 2};
}

}  // namespace

ReductionResult network_reduce(const GraphPtr& g, const VertexId& x, int n, const WeightVector& w) {
  ReductionResult out;
  out.x = x;
  std::tie(out.zL, out.zR) = reduction_nodes(x, n);
  std::tie(out.A_mass, out.D_mass) = exit_masses(x, n, w);
  BallRegion b = ball(*g, q0(), pow2(-n));
  auto measured = [&](const VertexId& z) { return equilibrium_potential<double>(g, z, b.frontier).resistance; };
  out.R_zL = measured(out.zL);
  out.R_zR = measured(out.zR);
  const std::size_t xi = g->index_of(x);
  auto dist = distances_from_f(*g, xi);
  double xl = dist[g->index_of(out.zL)], xr = dist[g->index_of(out.zR)];
  out.R_zLzR = to_double(resistance_distance(*g, out.zL, out.zR));
  out.branch = std::max(0.0, (xl + xr - out.R_zLzR) / 2);
  double al = xl - out.branch, ar = xr - out.branch;
  std::tie(out.rL, out.rR) = solve_outer(out.R_zL, out.R_zR, out.R_zLzR);
  out.degenerate = x == out.zL || x == out.zR;
  if (out.degenerate) {
    out.R_x = x == out.zL ? out.R_zL : out.R_zR;
  } else {
    out.R_x = out.branch + 1 / (1 / (al + out.rL) + 1 / (ar + out.rR));
  }
  // The whole current passes the branch x -> x*, then divides.
  double at_projection = 1 - out.branch / out.R_x;
  auto divider = [](double r, double a) { return std::isinf(r) ? 1.0 : r / (a + r); };
  out.psi_zL = at_projection * divider(out.rL, al);
  out.psi_zR = at_projection * divider(out.rR, ar);
  return out;
}

ReductionResult network_reduce(const VertexId& x, int n, int L, const WeightVector& w) {
  auto [zl, zr] = reduction_nodes(x, n);
  return network_reduce(ball_graph(n, L, {x, zl, zr}), x, n, w);
}

std::vector<double> interior_masses(const WeightVector& w, const LevelGraph& g, const BallRegion& b) {
  auto m = lumped_masses(w, g);
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t v = 0; v < m.size(); ++v)
    if (b.is_interior[v]) out[v] = to_double(m[v]);
  return out;
}

G1Identity g1_via_identity(const GraphPtr& g, const VertexId& x, int n, const WeightVector& w) {
  auto br = boundary_resistance(g, x, n);
  auto m = lumped_masses(w, *g);
  G1Identity out;
  out.n = n;
  out.L = g->level();
  out.x = x;
  out.x_kind = x.str();
  out.R_lower = br.resistance_lower;
  out.R_upper = br.resistance;
  for (std::size_t v = 0; v < m.size(); ++v) {
    double mv = to_double(m[v]);
    out.int_upper += mv * br.psi.values[v];
    out.int_lower += mv * br.psi_lower.values[v];
  }
  out.g1 = out.R_upper * out.int_upper;
  out.g1_lower = out.R_lower * out.int_lower;
  out.g1_upper = out.g1;
  return out;
}

G1Identity g1_via_identity(const VertexId& x, int n, const WeightVector& w, int L) {
  return g1_via_identity(ball_graph(n, L, {x}), x, n, w);
}

SlopeFit fit_log2_slope(const std::vector<int>& n, const std::vector<double>& values) {
  if (n.size() != values.size() || n.size() < 2) throw ValidationError("slope fit needs at least two points");
  const double k = static_cast<double>(n.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> y;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(values[i] > 0)) throw ValidationError("slope fit needs positive values");
    y.push_back(std::log2(values[i]));
    sx += n[i];
    sy += y.back();
    sxx += double(n[i]) * n[i];
    sxy += n[i] * y.back();
  }
  SlopeFit f;
  double den = k * sxx - sx * sx;
  f.slope = (k * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / k;
  if (n.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
      double e = y[i] - f.intercept - f.slope * n[i];
      rss += e * e;
    }
    f.stderr_ = std::sqrt(rss / (k - 2) * k / den);
  }
  return f;
}

ExitReport exit_ratio_experiment(int n_min, int n_max, const WeightVector& w, int L_offset) {
  require_n(n_min);
  if (n_max < n_min) throw ValidationError("empty n range");
  if (L_offset < 0) throw ValidationError("L offset must be non-negative");
  check_level(n_max + L_offset);
  ExitReport rep;
  rep.weights = w;
  rep.L_offset = L_offset;
  for (int n = n_min; n <= n_max; ++n) {
    const int L = n + L_offset;
    const Rational r = pow2(-n), small = pow2(-3 * n);
    auto g = build_ball_graph(L, Rational(1, 2), {q0(), {r, small, r / 2}, {}, true});
    BallRegion b = ball(*g, q0(), r);
    BallRegion inner = ball(*g, q0(), small);
    auto g1 = green_g1<double>(g, b, interior_masses(w, *g, b));
    ExitRow row;
    row.n = n;
    row.L = L;
    row.inf_vertex_g1 = std::numeric_limits<double>::infinity();
    for (std::size_t v : inner.interior)
      if (g1.values[v] < row.inf_vertex_g1) {
        row.inf_vertex_g1 = g1.values[v];
        row.inf_at = g->vertex(v);
      }
    row.inf_g1 = row.inf_vertex_g1;
    for (const auto& e : inner.cut_edges) {
      double f = to_double(e.fraction);
      row.inf_g1 = std::min(row.inf_g1, g1.values[e.inside] + f * (g1.values[e.outside] - g1.values[e.inside]));
    }
    auto mu = ball_measure(w, *g, b);
    row.mu_ball = mu.midpoint();
    for (std::size_t v : b.interior) {
      if (g1.values[v] > row.sup_g1) {
        row.sup_g1 = g1.values[v];
        row.sup_at = g->vertex(v);
      }
      if (b.distance[v] >= r / 2) {
        double dr = to_double(r - b.distance[v]);
        row.eout_constant = std::max(row.eout_constant, g1.values[v] / (dr * row.mu_ball));
      }
    }
    row.ratio = row.inf_g1 / row.sup_g1;
    rep.rows.push_back(row);
  }
  if (rep.rows.size() >= 2) {
    std::vector<int> ns;
    std::vector<double> ratios;
    for (const auto& row : rep.rows) {
      ns.push_back(row.n);
      ratios.push_back(row.ratio);
    }
    rep.fit = fit_log2_slope(ns, ratios);
  }
  return rep;
}

void write_csv(std::ostream& os, const ExitReport& r) {
  os << "n,L,inf_g1,inf_vertex_g1,inf_at,sup_g1,sup_at,ratio,mu_ball,eout_constant\n";
  for (const auto& row : r.rows)
    os << row.n << ',' << row.L << ',' << format_double(row.inf_g1) << ',' << format_double(row.inf_vertex_g1) << ','
       << row.inf_at.str() << ',' << format_double(row.sup_g1) << ',' << row.sup_at.str() << ','
       << format_double(row.ratio) << ',' << format_double(row.mu_ball) << ',' << format_double(row.eout_constant)
       << '\n';
}

nlohmann::json to_json(const ExitReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  std::vector<int> ns;
  for (const auto& row : r.rows) {
    ns.push_back(row.n);
    rows.push_back({{"n", row.n},
                    {"L", row.L},
                    {"inf_g1", row.inf_g1},
                    {"sup_g1", row.sup_g1},
                    {"ratio", row.ratio},
                    {"inf_at", row.inf_at.str()},
                    {"sup_at", row.sup_at.str()},
                    {"eout_constant", row.eout_constant}});
  }
  return {{"weights", to_json(r.weights)},
          {"L_offset", r.L_offset},
          {"rows", rows},
          {"slope", r.fit.slope},
          {"stderr", r.fit.stderr_},
          {"n_range", ns.empty() ? nlohmann::json::array() : nlohmann::json::array({ns.front(), ns.back()})}};
}

void write_csv(std::ostream& os, const std::vector<G1Identity>& rows) {
  os << "n,L,x_kind,R_lower,R_upper,int_lower,int_upper,g1_lower,g1_upper\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.L << ',' << r.x_kind << ',' << format_double(r.R_lower) << ',' << format_double(r.R_upper)
       << ',' << format_double(r.int_lower) << ',' << format_double(r.int_upper) << ',' << format_double(r.g1_lower)
       << ',' << format_double(r.g1_upper) << '\n';
}

}  // namespace dendrite
