#include "dendrite/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "dendrite/errors.hpp"
#include "dendrite/harnack.hpp"

namespace dendrite {

namespace {

// Collects failed checks and the measurements worth printing.
class Ledger {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (failures_++ < 3) failed_ += (failed_.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : " ") + s; }
  bool pass() const { return pass_; }
  std::string detail() const {
    std::string d = notes_;
    if (!pass_) {
      d += (d.empty() ? "" : " ") + std::string("| failed: ") + failed_;
      if (failures_ > 3) d += " (+" + std::to_string(failures_ - 3) + " more)";
    }
    return d;
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::string failed_, notes_;
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool monotone(const std::vector<double>& v, bool increasing) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (increasing ? v[i] < v[i - 1] : v[i] > v[i - 1]) return false;
  return true;
}

const Rational kHalf(1, 2);
const std::vector<Rational> kScales{Rational(1, 2), Rational(1, 3), Rational(2, 5)};

void c1_boundary_resistances(Ledger& out) {
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& s0 : kScales)
    for (int L = 0; L <= 6; ++L) {
      auto g = build_level_graph(L, s0);
      auto r2 = effective_resistance<Rational>(g, {q2()}, {q1()});
      auto r3 = effective_resistance<Rational>(g, {q3()}, {q1()});
      out.check(r2 == 1 && r3 == 1, "s0=" + to_string(s0) + " L=" + std::to_string(L) + " R=" + to_string(r2) + "," +
                                        to_string(r3));
    }
  double t = seconds_since(t0);
  out.check(t < 1.0, "runtime " + fmt(t) + " s >= 1 s");
  out.note("R(q2,q1)=R(q3,q1)=1/1 at L=0..6 for s0 in {1/2,1/3,2/5}; " + fmt(t, 2) + " s");
}

void c2_renormalization(Ledger& out) {
  int compared = 0;
  for (const auto& s0 : kScales)
    for (int L = 0; L <= 5; ++L) {
      auto coarse = build_level_graph(L, s0);
      auto fine = build_level_graph(L + 1, s0);
      auto net = schur_trace(*fine, coarse->vertices());
      auto ref = as_network(*coarse);
      out.check(net.vertices == ref.vertices && net.conductances == ref.conductances,
                "trace mismatch s0=" + to_string(s0) + " L=" + std::to_string(L));
      compared += static_cast<int>(ref.conductances.size());
    }
  out.note(std::to_string(compared) + " edges identical, L=0..5, three s0");
}

void c3_energies(Ledger& out) {
  for (const auto& s0 : kScales) {
    auto e = energy_closed({UDown{}, s0});
    out.check(e == 1 / s0 + 1, "E(u_down) s0=" + to_string(s0) + " is " + to_string(e));
  }
  auto eu = energy_closed({UUp{}, kHalf});
  out.check(eu == Rational(3, 2), "E(u_up)=" + to_string(eu));
  std::vector<double> down, up;
  for (int L = 1; L <= 12; ++L) {
    down.push_back(to_double(discrete_udown(L, kHalf).energy));
    up.push_back(to_double(discrete_uup(L).energy));
  }
  out.check(monotone(down, true), "discrete E(u_down) not increasing");
  out.check(monotone(up, true), "discrete E(u_up) not increasing");
  out.check(std::abs(down.back() / 3 - 1) <= 0.02, "E_12(u_down)=" + fmt(down.back(), 6));
  out.check(std::abs(up.back() / 1.5 - 1) <= 0.02, "E_12(u_up)=" + fmt(up.back(), 6));
  out.note("E(u_down)=3/1 E(u_up)=3/2 exact; L=12: " + fmt(down.back(), 6) + ", " + fmt(up.back(), 6));
}

void c4_ladder(Ledger& out) {
  std::vector<double> lam;
  std::vector<std::vector<double>> a(5);
  for (int L = 1; L <= 12; ++L) {
    lam.push_back(to_double(discrete_udown(L, kHalf).u.at(q0())));
    auto up = discrete_uup(L);
    for (int m = 0; m <= 4; ++m) {
      auto v = canonicalize(Word::repeat(0, static_cast<std::size_t>(m)) + Word("2"), Corner::Q1);
      if (up.u.graph->contains(v)) a[static_cast<std::size_t>(m)].push_back(to_double(up.u.at(v)));
    }
  }
  out.check(std::abs(lam.back() / 0.25 - 1) <= 0.02, "u_down(F0(q2)) at L=12 is " + fmt(lam.back(), 6));
  out.check(monotone(lam, true) || monotone(lam, false), "u_down(F0(q2)) not monotone in L");
  std::string vals;
  for (int m = 0; m <= 4; ++m) {
    const auto& s = a[static_cast<std::size_t>(m)];
    double target = std::pow(4.0, -(m + 1));
    out.check(!s.empty() && std::abs(s.back() / target - 1) <= 0.02, "a_" + std::to_string(m) + "=" + fmt(s.back(), 6));
    out.check(monotone(s, true) || monotone(s, false), "a_" + std::to_string(m) + " not monotone in L");
    vals += (m ? "," : "") + fmt(s.back() / target, 5);
  }
  out.note("L=12: u_down(F0(q2))=" + fmt(lam.back(), 6) + "; a_m*4^(m+1), m=0..4: " + vals);
}

void c5_ball_resistance(Ledger& out) {
  auto t0 = std::chrono::steady_clock::now();
  std::string vals;
  for (int n = 1; n <= 3; ++n) {
    const double exact = 1.0 / (3 * (std::ldexp(1.0, n - 1) + std::ldexp(1.0, 2 * n - 1)));
    std::vector<double> r;
    for (int L = n + 3; L <= n + 7; ++L) r.push_back(boundary_resistance(q0(), n, L).resistance);
    out.check(monotone(r, false), "n=" + std::to_string(n) + " not decreasing in L");
    out.check(r.back() >= exact * (1 - 1e-12), "n=" + std::to_string(n) + " below the limit");
    out.check(r.back() / exact - 1 <= 0.05, "n=" + std::to_string(n) + " R=" + fmt(r.back(), 6));
    vals += (n > 1 ? "," : "") + fmt(r.back() / exact, 5);
  }
  double t = seconds_since(t0);
  out.check(t < 30, "runtime " + fmt(t) + " s");
  out.note("R(q0)/limit at L=n+7, n=1..3: " + vals + "; " + fmt(t, 3) + " s");
}

void c6_coefficients(Ledger& out) {
  double worst = 0;
  int points = 0;
  for (int n = 1; n <= 3; ++n) {
    const Rational r = pow2(-n);
    for (int m0 = 0; m0 <= 3; ++m0)
      for (int k0 = 0; k0 <= 3; ++k0) {
        auto word = [&](int m, int k) {
          return Word("0") + Word::repeat(2, static_cast<std::size_t>(n - 1)) +
                 Word::repeat(0, static_cast<std::size_t>(m)) + Word("2") + Word::repeat(3, static_cast<std::size_t>(k));
        };
        auto x = canonicalize(word(m0, k0), Corner::Q1);
        std::vector<std::pair<VertexId, Rational>> expect;
        auto c = psi_coefficients(PsiCase::Xmk, n, m0, k0);
        expect.emplace_back(q0(), c.a(-1));
        for (int m = 0; m <= m0; ++m) expect.emplace_back(canonicalize(word(m, 0), Corner::Q1), c.a(m));
        for (int k = 1; k <= k0; ++k) expect.emplace_back(canonicalize(word(m0, k), Corner::Q1), c.ak(k));
        if (k0 == 0)
          for (int m = 0; m < m0; ++m)
            out.check(4 * c.a(m + 1) - 9 * c.a(m) + 2 * c.a(m - 1) == 0,
                      "recurrence n=" + std::to_string(n) + " m0=" + std::to_string(m0));
        std::vector<VertexId> anchors{x};
        for (const auto& [v, val] : expect) anchors.push_back(v);
        const int L = std::min(n + m0 + k0 + 4, max_level());
        auto g = build_ball_graph(L, kHalf, {q0(), {r}, anchors, false});
        auto b = ball(*g, q0(), r);
        auto eq = equilibrium_potential<double>(g, x, b.frontier);
        for (const auto& [v, val] : expect) {
          double e = std::abs(eq.psi.at(v) / to_double(val) - 1);
          worst = std::max(worst, e);
          ++points;
          out.check(e <= 0.05, "Xmk n=" + std::to_string(n) + " m0=" + std::to_string(m0) + " k0=" +
                                   std::to_string(k0) + " at " + v.str());
        }
        double er = std::abs(eq.resistance / to_double(c.resistance) - 1);
        worst = std::max(worst, er);
        out.check(er <= 0.05, "R mismatch n=" + std::to_string(n));
      }
    for (int k0 = 1; k0 <= 3; ++k0) {
      auto c = psi_coefficients(PsiCase::Yk, n, 0, k0);
      auto x = typical_point(TypicalPoint::y(n, k0));
      std::vector<std::pair<VertexId, Rational>> expect{{q0(), c.b(0)}};
      for (int k = 1; k <= k0; ++k) expect.emplace_back(typical_point(TypicalPoint::y(n, k)), c.b(k));
      std::vector<VertexId> anchors{x};
      for (const auto& [v, val] : expect) anchors.push_back(v);
      auto g = build_ball_graph(std::min(n + k0 + 5, max_level()), kHalf, {q0(), {r}, anchors, false});
      auto b = ball(*g, q0(), r);
      auto eq = equilibrium_potential<double>(g, x, b.frontier);
      for (const auto& [v, val] : expect) {
        double e = std::abs(eq.psi.at(v) / to_double(val) - 1);
        worst = std::max(worst, e);
        ++points;
        out.check(e <= 0.05, "Yk n=" + std::to_string(n) + " k0=" + std::to_string(k0) + " at " + v.str());
      }
    }
  }
  out.note(std::to_string(points) + " ladder values, worst relative error " + fmt(worst, 3) +
           "; recurrence residuals exactly 0");
}

void c7_exit(Ledger& out) {
  auto rep = exit_ratio_experiment(2, 5, WeightVector::equal(), 5);
  std::string ratios;
  for (const auto& row : rep.rows) ratios += (ratios.empty() ? "" : ",") + fmt(row.ratio, 4);
  out.check(rep.fit.slope >= -1.25 && rep.fit.slope <= -0.75, "slope " + fmt(rep.fit.slope, 4) + " outside [-1.25,-0.75]");
  out.note("equal weights, n=2..5: ratio " + ratios + "; log2 slope " + fmt(rep.fit.slope, 4));
}

void c8_ehi(Ledger& out) {
  std::vector<int> ns;
  std::vector<double> ratios;
  std::string vals;
  for (int n = 2; n <= 5; ++n) {
    auto e = ehi_ratio(n, 1, kHalf, n + 7);
    ns.push_back(n);
    ratios.push_back(e.ratio);
    vals += (n > 2 ? "," : "") + fmt(e.ratio, 4);
  }
  double slope = fit_log2_slope(ns, ratios).slope;
  out.check(std::abs(slope + 1) <= 0.25, "slope " + fmt(slope, 4));
  out.note("inf/sup over B(q0,2^-n/2), n=2..5: " + vals + "; log2 slope " + fmt(slope, 4));
}

void c9_weh(Ledger& out) {
  const std::vector<Rational> rhos{Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};
  for (const auto& delta : {kHalf, Rational(1)}) {
    auto scan = weh_threshold_scan(delta, rhos, 2, 5, 6);
    std::string vals;
    for (const auto& rho : rhos) {
      double g = scan.growth_for(rho);
      vals += (vals.empty() ? "" : ",") + fmt(g, 4);
      if (rho <= 1)
        out.check(g <= 1.15, "delta=" + to_string(delta) + " rho=" + to_string(rho) + " factor " + fmt(g, 4));
      else
        out.check(g >= to_double(rho) * 0.8,
                  "delta=" + to_string(delta) + " rho=" + to_string(rho) + " factor " + fmt(g, 4));
    }
    out.note("delta=" + to_string(delta) + " rho=1/2,1,3/2,2 growth " + vals + ";");
  }
}

void c10_measure(Ledger& out) {
  const auto w = WeightVector::equal();
  const Rational e0 = epsilon0(w), e1 = epsilon1(w);
  auto down = integrate_pw_harmonic(ClosedFormFunction({UDown{}, kHalf}), w);
  auto up = integrate_pw_harmonic(ClosedFormFunction({UUp{}, kHalf}), w);
  out.check(down.lower >= e0 && down.upper <= 4 * e0, "int u_down=[" + to_string(down.lower) + "," +
                                                          to_string(down.upper) + "] vs [" + to_string(e0) + "," +
                                                          to_string(4 * e0) + "]");
  out.check(up.lower >= e1 && up.upper <= 4 * e1, "int u_up=[" + to_string(up.lower) + "," + to_string(up.upper) +
                                                      "] vs [" + to_string(e1) + "," + to_string(4 * e1) + "]");
  std::string blow;
  for (int n = 2; n <= 6; ++n) {
    auto r = doubling_ratio(w, doubling_point(n), pow2(-n), n + 6);
    out.check(r.lower > Rational(3, 16) * pow2(n), "doubling at y_" + std::to_string(n) + " = " + to_string(r.lower));
    blow += (n > 2 ? "," : "") + fmt(to_double(r.lower), 4);
  }
  std::mt19937 rng(20240601);
  double worst = 0;
  int samples = 0;
  for (int n = 1; n <= 3; ++n) {
    auto vn = build_level_graph(n, kHalf);
    for (int i = 0; i < 4; ++i) {
      const auto& x = vn->vertex(rng() % vn->vertex_count());
      for (int j = 1; j <= 2; ++j) {
        auto r = doubling_ratio(w, x, pow2(-n - j), n + j + 5);
        ++samples;
        out.check(r.upper.has_value() && *r.upper <= 64, "doubling at " + x.str() + " r=2^-" + std::to_string(n + j));
        if (r.upper) worst = std::max(worst, to_double(*r.upper));
      }
    }
  }
  out.note("int u_down=" + to_string(down.lower) + " in [" + to_string(e0) + "," + to_string(4 * e0) +
           "]; int u_up=" + to_string(up.lower) + " vs [" + to_string(e1) + "," + to_string(4 * e1) +
           "]; doubling lower bound at y_n, n=2..6: " + blow + "; lattice max " + fmt(worst, 4) + " over " +
           std::to_string(samples) + " samples");
}

// Property suites.
void p_tree(Ledger& out) {
  int graphs = 0;
  auto tree = [&](const GraphPtr& g, const std::string& what) {
    try {
      assert_tree(*g);
    } catch (const std::exception& e) {
      out.check(false, what + ": " + e.what());
    }
    ++graphs;
  };
  for (const auto& s0 : kScales)
    for (int L = 0; L <= 6; ++L) tree(build_level_graph(L, s0), "level " + std::to_string(L));
  for (int n = 1; n <= 4; ++n) {
    tree(ball_graph(n, n + 6, {}), "ball " + std::to_string(n));
    tree(harnack_graph(n, n + 5, {pow2(-n) / 2}, true), "half ball " + std::to_string(n));
  }
  out.note("tree: " + std::to_string(graphs) + " graphs;");
}

void p_geometry(Ledger& out) {
  std::mt19937 rng(5);
  int checked = 0;
  for (int i = 0; i < 4000; ++i) {
    Word w;
    int len = static_cast<int>(rng() % 9);
    for (int j = 0; j < len; ++j) w.push_back(static_cast<int>(rng() % 4));
    Corner c = corner_from_index(static_cast<int>(rng() % 3) + 1);
    VertexId v = canonicalize(w, c);
    Point a = coordinates(v), b = apply_map(w, corner_point(c));
    out.check(std::hypot(a.x - b.x, a.y - b.y) < 1e-12, "coordinates differ for " + w.str());
    out.check(canonicalize(v.word, v.corner) == v, "canonical form not idempotent for " + w.str());
    ++checked;
  }
  // Distinct lattice points have distinct coordinates.
  auto g = build_level_graph(5, kHalf);
  std::vector<std::pair<double, double>> pts;
  for (const auto& v : g->vertices()) {
    Point p = coordinates(v);
    pts.emplace_back(std::round(p.x * 1e9), std::round(p.y * 1e9));
  }
  std::sort(pts.begin(), pts.end());
  out.check(std::adjacent_find(pts.begin(), pts.end()) == pts.end(), "two vertex ids share coordinates");
  out.note("geometry: " + std::to_string(checked) + " words;");
}

void p_maximum(Ledger& out) {
  std::mt19937 rng(9);
  int solves = 0;
  for (int n = 1; n <= 3; ++n) {
    auto g = harnack_graph(n, n + 5);
    auto b = ball(*g, q0(), pow2(-n));
    for (int t = 0; t < 4; ++t) {
      Constraints<double> c;
      double lo = 1e300, hi = -1e300;
      for (std::size_t v = 0; v < g->vertex_count(); ++v)
        if (!b.is_interior[v]) {
          double x = std::uniform_real_distribution<double>(-1, 2)(rng);
          c.pin(v, x);
          if (b.is_frontier[v]) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
          }
        }
      auto u = solve_dirichlet<double>(g, c);
      for (std::size_t v : b.interior)
        out.check(u.values[v] >= lo - 1e-12 && u.values[v] <= hi + 1e-12, "maximum principle at " + g->vertex(v).str());
      ++solves;
    }
    auto g1 = green_g1<double>(g, b, interior_masses(WeightVector::equal(), *g, b));
    for (std::size_t v : b.interior) out.check(g1.values[v] > 0, "G1 not positive");
    auto eq = equilibrium_potential<double>(g, typical_point(TypicalPoint::x(n, 1, 1)), b.frontier);
    for (double x : eq.psi.values) out.check(x >= -1e-12 && x <= 1 + 1e-12, "equilibrium potential outside [0,1]");
  }
  out.note("maximum principle: " + std::to_string(solves) + " random solves;");
}

void p_green(Ledger& out) {
  double worst = 0;
  int points = 0;
  std::mt19937 rng(1);
  for (int n = 1; n <= 2; ++n) {
    auto g = ball_graph(n, n + 6, {});
    auto b = ball(*g, q0(), pow2(-n));
    for (const auto& w : {WeightVector::equal(), WeightVector::symmetric(Rational(1, 6), Rational(1, 3))}) {
      auto direct = green_g1<double>(g, b, interior_masses(w, *g, b));
      for (int i = 0; i < 8; ++i) {
        std::size_t v = b.interior[rng() % b.interior.size()];
        auto id = g1_via_identity(g, g->vertex(v), n, w);
        double e = std::abs(id.g1 / direct.values[v] - 1);
        worst = std::max(worst, e);
        ++points;
        out.check(e <= 0.05, "identity vs direct at " + g->vertex(v).str());
        out.check(id.g1_lower <= direct.values[v] * (1 + 1e-9) && id.g1_upper >= direct.values[v] * (1 - 1e-9),
                  "identity bracket misses the direct value at " + g->vertex(v).str());
      }
    }
  }
  out.note("Green identity: " + std::to_string(points) + " points, worst " + fmt(worst, 3) + ";");
}

void p_superposition(Ledger& out) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-9, 9);
  auto g = build_level_graph(3, Rational(2, 5));
  std::vector<std::size_t> pins;
  for (std::size_t v = 0; v < g->vertex_count(); v += 5) pins.push_back(v);
  for (int t = 0; t < 3; ++t) {
    Constraints<Rational> f, h, s;
    const Rational a(d(rng), 7), c(d(rng), 3);
    for (auto v : pins) {
      Rational x(d(rng), 5), y(d(rng), 11);
      f.pin(v, x);
      h.pin(v, y);
      s.pin(v, a * x + c * y);
    }
    auto uf = solve_dirichlet<Rational>(g, f);
    auto uh = solve_dirichlet<Rational>(g, h);
    auto us = solve_dirichlet<Rational>(g, s);
    for (std::size_t v = 0; v < g->vertex_count(); ++v)
      out.check(us.values[v] == a * uf.values[v] + c * uh.values[v], "superposition at " + g->vertex(v).str());
  }
  for (int n = 1; n <= 3; ++n) {
    auto gb = harnack_graph(n, n + 6);
    std::vector<Rational> up{Rational(d(rng) + 10, 3), Rational(1, 2), Rational(2)};
    std::map<Word, Rational> lo;
    for (const auto& [w, one] : BoundaryProfile::uniform(n).lower) lo[w] = Rational(d(rng) + 10, 4);
    auto p = BoundaryProfile::mixture(up, Rational(1, 3), lo);
    auto whole = boundary_harmonic<Rational>(gb, n, p);
    auto u1 = boundary_harmonic<Rational>(gb, n, p.upper_part());
    auto u2 = boundary_harmonic<Rational>(gb, n, p.lower_part());
    for (std::size_t v = 0; v < gb->vertex_count(); ++v)
      out.check(whole.values[v] == u1.values[v] + u2.values[v], "u = u' + u'' fails at " + gb->vertex(v).str());
  }
  out.note("superposition exact (rational);");
}

void c11_properties(Ledger& out) {
  auto t0 = std::chrono::steady_clock::now();
  p_tree(out);
  p_geometry(out);
  p_maximum(out);
  p_green(out);
  p_superposition(out);
  double t = seconds_since(t0);
  out.check(t < 300, "runtime " + fmt(t) + " s");
}

struct Entry {
  const char* title;
  void (*run)(Ledger&);
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e{
      {"exact boundary resistances", c1_boundary_resistances},
      {"renormalization by Schur trace", c2_renormalization},
      {"closed-form energies", c3_energies},
      {"ladder values", c4_ladder},
      {"exact ball resistance", c5_ball_resistance},
      {"coefficient oracles", c6_coefficients},
      {"exit-time anomaly", c7_exit},
      {"EHI failure", c8_ehi},
      {"wEH threshold", c9_weh},
      {"measure facts", c10_measure},
      {"property suites", c11_properties},
  };
  return e;
}

}  // namespace

int criterion_count() { return static_cast<int>(entries().size()); }

std::string criterion_title(int id) {
  if (id < 1 || id > criterion_count()) throw ValidationError("no criterion " + std::to_string(id));
  return entries()[static_cast<std::size_t>(id - 1)].title;
}

CriterionResult run_criterion(int id) {
  CriterionResult r;
  r.id = id;
  r.title = criterion_title(id);
  Ledger out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    entries()[static_cast<std::size_t>(id - 1)].run(out);
  } catch (const std::exception& e) {
    out.check(false, std::string("exception: ") + e.what());
  }
  r.seconds = seconds_since(t0);
  r.pass = out.pass();
  r.detail = out.detail();
  return r;
}

std::vector<int> suite_criteria(const std::string& suite) {
  auto range = [](int a, int b) {
    std::vector<int> v;
    for (int i = a; i <= b; ++i) v.push_back(i);
    return v;
  };
  if (suite == "all") return range(1, criterion_count());
  if (suite == "exact") return range(1, 6);
  if (suite == "experiments") return range(7, 10);
  if (suite == "properties") return {11};
  std::vector<int> ids;
  std::stringstream ss(suite);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      int id = std::stoi(item, &used);
      if (used != item.size() || id < 1 || id > criterion_count()) throw ValidationError("");
      ids.push_back(id);
    } catch (const std::exception&) {
      throw ValidationError("unknown suite '" + suite + "'; use all, exact, experiments, properties or a list like 1,5");
    }
  }
  if (ids.empty()) throw ValidationError("empty suite");
  return ids;
}

std::string format_result(const CriterionResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + " " + std::to_string(r.id) + " " + r.title + " [" +
         fmt(r.seconds, 3) + " s] " + r.detail;
}

bool run_suite(const std::vector<int>& ids, std::ostream& os, std::vector<CriterionResult>* results) {
  bool all = true;
  for (int id : ids) {
    auto r = run_criterion(id);
    os << format_result(r) << std::endl;
    all = all && r.pass;
    if (results) results->push_back(r);
  }
  return all;
}

}  // namespace dendrite
