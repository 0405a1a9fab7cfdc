#include "dendrite/harnack.hpp"

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

Word upper_prefix(int n) { return Word("0") + Word::repeat(2, static_cast<std::size_t>(n - 1)); }

// Which sphere piece a frontier point of B_n lies on.
struct SpherePiece {
  enum class Part { None, Upper, UpperLimit, Lower } part = Part::None;
  int m = 0;
  Word omega;
};

SpherePiece classify(const VertexId& v, int n) {
  const std::size_t un = static_cast<std::size_t>(n);
  SpherePiece out;
  // F_{0 2^{n-1}}(q1); its least address does not show the 0^inf tail.
  if (v == canonicalize(upper_prefix(n), Corner::Q1)) {
    out.part = SpherePiece::Part::UpperLimit;
    return out;
  }
  const std::string a = first_address(v, v.word.size() + un + 4);
  if (a[0] == '0') {
    for (std::size_t i = 1; i < un; ++i)
      if (a[i] != '2') return out;
    std::size_t j = un;
    while (j < a.size() && a[j] == '0') ++j;
    if (j == a.size()) return out;
    if (a[j] != '2' || j + 1 >= a.size() || a[j + 1] != '3') return out;
    for (std::size_t i = j + 1; i < a.size(); ++i)
      if (a[i] != '2' && a[i] != '3') return out;
    out.part = SpherePiece::Part::Upper;
    out.m = static_cast<int>(j - un);
    return out;
  }
  if (a[0] == '2') {
    for (std::size_t i = 1; i < un; ++i)
      if (a[i] != '0' && a[i] != '1') return out;
    for (std::size_t i = un; i < a.size(); ++i)
      if (a[i] != '2' && a[i] != '3') return out;
    out.part = SpherePiece::Part::Lower;
    out.omega = Word(a.substr(1, un - 1));
  }
  return out;
}

double ipow(double x, double d) { return d == 1.0 ? x : std::pow(x, d); }

}  // namespace

BoundaryProfile BoundaryProfile::upper_piece(int m, int k) {
  BoundaryProfile p;
  p.kind = Kind::UpperPiece;
  p.m = m;
  p.k = k;
  return p;
}

BoundaryProfile BoundaryProfile::lower_piece(Word omega, int k) {
  BoundaryProfile p;
  p.kind = Kind::LowerPiece;
  p.omega = std::move(omega);
  p.k = k;
  return p;
}

BoundaryProfile BoundaryProfile::mixture(std::vector<Rational> upper, Rational upper_tail,
                                         std::map<Word, Rational> lower) {
  BoundaryProfile p;
  p.kind = Kind::Mixture;
  p.upper = std::move(upper);
  p.upper_tail = std::move(upper_tail);
  p.lower = std::move(lower);
  return p;
}

BoundaryProfile BoundaryProfile::uniform(int n) {
  require_n(n);
  std::map<Word, Rational> lower;
  const std::size_t len = static_cast<std::size_t>(n - 1);
  for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
    std::string w;
    for (std::size_t i = 0; i < len; ++i) w.push_back((bits >> (len - 1 - i)) & 1 ? '1' : '0');
    lower[Word(w)] = 1;
  }
  return mixture({}, Rational(1), std::move(lower));
}

BoundaryProfile BoundaryProfile::parse(const std::string& text, int n) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) throw ValidationError("");
      return v;
    } catch (const std::exception&) {
      throw ValidationError("bad profile '" + text + "'");
    }
  };
  BoundaryProfile p;
  if (parts.size() == 1 && parts[0] == "uniform") {
    p = uniform(n);
  } else if (parts.size() == 3 && parts[0] == "upper") {
    p = upper_piece(to_int(parts[1]), to_int(parts[2]));
  } else if (parts.size() == 3 && parts[0] == "lower") {
    Word omega;
    try {
      omega = Word(parts[1]);
    } catch (const std::exception&) {
      throw ValidationError("bad profile '" + text + "'");
    }
    p = lower_piece(omega, to_int(parts[2]));
  } else {
    throw ValidationError("profile must be upper:m:k, lower:omega:k or uniform, got '" + text + "'");
  }
  p.validate(n);
  return p;
}

BoundaryProfile BoundaryProfile::upper_part() const {
  switch (kind) {
    case Kind::UpperPiece: return *this;
    case Kind::LowerPiece: return mixture({}, Rational(0), {});
    case Kind::Mixture: return mixture(upper, upper_tail, {});
  }
  return *this;
}

BoundaryProfile BoundaryProfile::lower_part() const {
  switch (kind) {
    case Kind::UpperPiece: return mixture({}, Rational(0), {});
    case Kind::LowerPiece: return *this;
    case Kind::Mixture: return mixture({}, Rational(0), lower);
  }
  return *this;
}

void BoundaryProfile::validate(int n) const {
  require_n(n);
  switch (kind) {
    case Kind::UpperPiece:
      if (m < 0) throw ValidationError("upper piece needs m >= 0");
      // k = 0 would take in F_{... 0^m 2 2}(C), which lies off the sphere.
      if (k < 1) throw ValidationError("upper piece needs k >= 1; F_{0 2^{n-1} 0^m 2}(C) is not on the sphere");
      return;
    case Kind::LowerPiece:
      if (k < 0) throw ValidationError("lower piece needs k >= 0");
      if (omega.size() != static_cast<std::size_t>(n - 1) || !omega.all_in("01"))
        throw ValidationError("lower piece word must lie in {0,1}^" + std::to_string(n - 1));
      return;
    case Kind::Mixture: {
      // Zero mixtures are allowed so that the two parts of a profile can be
      // solved separately; their sum is validated through the caller.
      auto check = [](const Rational& c) {
        if (c < 0) throw ValidationError("mixture coefficients must be non-negative");
      };
      for (const auto& c : upper) check(c);
      check(upper_tail);
      for (const auto& [w, c] : lower) {
        if (w.size() != static_cast<std::size_t>(n - 1) || !w.all_in("01"))
          throw ValidationError("lower piece word must lie in {0,1}^" + std::to_string(n - 1));
        check(c);
      }
      return;
    }
  }
}

Rational BoundaryProfile::value(const VertexId& v, int n) const {
  switch (kind) {
    case Kind::UpperPiece: {
      Word psi = upper_prefix(n) + Word::repeat(0, static_cast<std::size_t>(m)) + Word("2") +
                 Word::repeat(3, static_cast<std::size_t>(k));
      return in_cantor_piece(v, psi) ? Rational(1) : Rational(0);
    }
    case Kind::LowerPiece: {
      Word psi = Word("2") + omega + Word::repeat(2, static_cast<std::size_t>(k));
      return in_cantor_piece(v, psi) ? Rational(1) : Rational(0);
    }
    case Kind::Mixture: {
      SpherePiece s = classify(v, n);
      switch (s.part) {
        case SpherePiece::Part::Upper:
          return static_cast<std::size_t>(s.m) < upper.size() ? upper[static_cast<std::size_t>(s.m)] : upper_tail;
        case SpherePiece::Part::UpperLimit: return upper_tail;
        case SpherePiece::Part::Lower: {
          auto it = lower.find(s.omega);
          return it == lower.end() ? Rational(0) : it->second;
        }
        case SpherePiece::Part::None: return Rational(0);
      }
    }
  }
  return Rational(0);
}

int BoundaryProfile::depth(int n) const {
  switch (kind) {
    case Kind::UpperPiece: return n + m + k + 1;
    case Kind::LowerPiece: return n + k;
    case Kind::Mixture: return n + static_cast<int>(upper.size()) + 1;
  }
  return n;
}

std::string BoundaryProfile::str() const {
  switch (kind) {
    case Kind::UpperPiece: return "upper:" + std::to_string(m) + ":" + std::to_string(k);
    case Kind::LowerPiece: return "lower:" + omega.str() + ":" + std::to_string(k);
    case Kind::Mixture: {
      bool all_one = upper.empty() && upper_tail == 1 && !lower.empty();
      for (const auto& [w, c] : lower) all_one = all_one && c == 1;
      if (all_one) return "uniform";
      std::string s = "mixture[";
      for (std::size_t i = 0; i < upper.size(); ++i) s += (i ? " " : "") + to_string(upper[i]);
      s += "|" + to_string(upper_tail) + "|";
      bool first = true;
      for (const auto& [w, c] : lower) {
        s += (first ? "" : " ") + w.str() + "=" + to_string(c);
        first = false;
      }
      return s + "]";
    }
  }
  return "";
}

GraphPtr harnack_graph(int n, int L, const std::vector<Rational>& extra_radii, bool fill,
                       const std::vector<VertexId>& anchors) {
  require_n(n);
  check_level(L);
  std::vector<Rational> radii{pow2(-n)};
  for (const auto& r : extra_radii) {
    if (r <= 0 || r > pow2(-n)) throw ValidationError("extra radius must lie in (0, 2^-n]");
    radii.push_back(r);
  }
  return build_ball_graph(L, Rational(1, 2), {q0(), radii, anchors, fill});
}

template <class T>
VertexFunction<T> boundary_harmonic(const GraphPtr& g, int n, const BoundaryProfile& profile) {
  profile.validate(n);
  const int need = profile.kind == BoundaryProfile::Kind::LowerPiece ? n + profile.k + 3 : profile.depth(n) + 2;
  if (g->level() < need)
    throw ValidationError("level " + std::to_string(g->level()) + " too coarse for profile " + profile.str() +
                          "; need L >= " + std::to_string(need));
  BallRegion b = ball(*g, q0(), pow2(-n));
  Constraints<T> c;
  bool hit = false;
  for (std::size_t v : b.frontier) {
    if (b.distance[v] != b.radius) throw std::logic_error("frontier point off the sphere: " + g->vertex(v).str());
    Rational val = profile.value(g->vertex(v), n);
    if (val != 0) hit = true;
    c.pin(v, from_rational<T>(val));
  }
  for (std::size_t v = 0; v < g->vertex_count(); ++v)
    if (!b.is_interior[v] && !b.is_frontier[v]) c.pin(v, T(0));
  const bool zero_mixture = profile.kind == BoundaryProfile::Kind::Mixture;
  if (!hit && !zero_mixture) throw ValidationError("profile " + profile.str() + " has no points on the sphere of B_" +
                                                   std::to_string(n));
  return solve_dirichlet<T>(g, c);
}

template VertexFunction<double> boundary_harmonic<double>(const GraphPtr&, int, const BoundaryProfile&);
template VertexFunction<Rational> boundary_harmonic<Rational>(const GraphPtr&, int, const BoundaryProfile&);

VertexFunction<double> boundary_harmonic(int n, const BoundaryProfile& profile, int L) {
  return boundary_harmonic<double>(harnack_graph(n, L), n, profile);
}

EhiResult ehi_ratio(int n, int k, const Rational& epsilon, int L) {
  require_n(n);
  if (epsilon <= 0 || epsilon > Rational(1, 2)) throw ValidationError("epsilon must lie in (0, 1/2]");
  const Rational r = pow2(-n);
  auto profile = BoundaryProfile::lower_piece(Word::repeat(0, static_cast<std::size_t>(n - 1)), k);
  auto g = harnack_graph(n, L, {epsilon * r});
  auto u = boundary_harmonic<double>(g, n, profile);
  BallRegion inner = ball(*g, q0(), epsilon * r);
  EhiResult out;
  out.n = n;
  out.k = k;
  out.L = L;
  out.epsilon = epsilon;
  out.inf = std::numeric_limits<double>::infinity();
  out.sup = -out.inf;
  auto visit = [&](double value, std::size_t at) {
    if (value < out.inf) {
      out.inf = value;
      out.inf_at = g->vertex(at);
    }
    if (value > out.sup) {
      out.sup = value;
      out.sup_at = g->vertex(at);
    }
  };
  for (std::size_t v : inner.interior) visit(u.values[v], v);
  for (const auto& e : inner.cut_edges) {
    double f = to_double(e.fraction);
    double value = u.values[e.inside] + f * (u.values[e.outside] - u.values[e.inside]);
    visit(value, f < 0.5 ? e.inside : e.outside);
  }
  out.ratio = out.inf / out.sup;
  out.model = 1.0 / (std::ldexp(to_double(epsilon), n) + 1.0);
  return out;
}

HalfBallSolution solve_on_ball(int n, const BoundaryProfile& profile, int L) {
  HalfBallSolution s;
  s.n = n;
  s.graph = harnack_graph(n, L, {pow2(-n) / 2}, true);
  s.u = boundary_harmonic<double>(s.graph, n, profile);
  s.half = ball(*s.graph, q0(), pow2(-n) / 2);
  s.profile = profile.str();
  return s;
}

HarnackReport weh_ratio(const HalfBallSolution& s, const Rational& delta, const WeightVector& w) {
  if (delta <= 0 || delta > 1) throw ValidationError("delta must lie in (0, 1]");
  const LevelGraph& g = *s.graph;
  const BallRegion& b = s.half;
  const double d = to_double(delta);
  const auto ecc = corner_eccentricity();
  const CornerData pr = harmonic_weights(w, g.s0());
  const std::array<double, 3> p{to_double(pr[0]), to_double(pr[1]), to_double(pr[2])};
  const std::array<double, 4> wd{to_double(w.w0), to_double(w.w1), to_double(w.w2), to_double(w.w3)};

  // Cells inside the half ball are integrated with exact averages; a cell cut
  // by the half sphere contributes an unknown share of its mass, with values
  // between its extreme corner values.
  double int_lo = 0, int_hi = 0, mu_in = 0;
  std::vector<std::pair<double, double>> cut_lo, cut_hi;  // (value^delta, mass)
  for (const auto& c : g.cells()) {
    int entry = 0;
    for (int j = 1; j < 3; ++j)
      if (b.distance[c.corners[j]] < b.distance[c.corners[entry]]) entry = j;
    const Rational& dmin = b.distance[c.corners[entry]];
    if (dmin >= b.radius) continue;
    double mu = 1;
    for (std::size_t i = 0; i < c.word.size(); ++i) mu *= wd[static_cast<std::size_t>(c.word[i])];
    double a = std::numeric_limits<double>::infinity(), hi = -a, avg = 0;
    for (int j = 0; j < 3; ++j) {
      double x = std::max(0.0, s.u.values[c.corners[j]]);
      a = std::min(a, x);
      hi = std::max(hi, x);
      avg += p[j] * x;
    }
    if (dmin + c.scale * ecc[entry] > b.radius) {
      cut_lo.emplace_back(ipow(a, d), mu);
      cut_hi.emplace_back(ipow(hi, d), mu);
      continue;
    }
    mu_in += mu;
    if (d == 1.0) {
      int_lo += mu * avg;
      int_hi += mu * avg;
    } else {
      // Concavity: chord below, Jensen above; the cell average is exact.
      double chord = hi > a ? ipow(a, d) + (avg - a) * (ipow(hi, d) - ipow(a, d)) / (hi - a) : ipow(a, d);
      int_lo += mu * chord;
      int_hi += mu * ipow(avg, d);
    }
  }
  // Extreme averages over the unknown shares: take whole cells greedily while
  // they move the average.
  auto extreme = [&](double total, std::vector<std::pair<double, double>> cut, bool lower) {
    std::sort(cut.begin(), cut.end());
    if (!lower) std::reverse(cut.begin(), cut.end());
    double mass = mu_in;
    for (const auto& [v, m] : cut) {
      if (mass > 0 && (lower ? v >= total / mass : v <= total / mass)) break;
      total += v * m;
      mass += m;
    }
    return total / mass;
  };
  const double mean_lo = extreme(int_lo, cut_lo, true), mean_hi = extreme(int_hi, cut_hi, false);

  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t v : b.interior) inf = std::min(inf, s.u.values[v]);
  for (const auto& e : b.cut_edges) {
    double f = to_double(e.fraction);
    inf = std::min(inf, s.u.values[e.inside] + f * (s.u.values[e.outside] - s.u.values[e.inside]));
  }

  HarnackReport r;
  r.n = s.n;
  r.L = g.level();
  r.delta = delta;
  r.weights = w;
  r.profile = s.profile;
  r.mean_delta_power = {mean_lo, mean_hi};
  r.inf = inf;
  const double inf_d = ipow(inf, d);
  r.inf_delta_power = {inf_d, inf_d};
  r.ratio = {r.mean_delta_power.lower / inf_d, r.mean_delta_power.upper / inf_d};
  return r;
}

HarnackReport weh_ratio(int n, const Rational& delta, const WeightVector& w, const BoundaryProfile& profile, int L) {
  return weh_ratio(solve_on_ball(n, profile, L), delta, w);
}

WeightVector threshold_weights(const Rational& delta, const Rational& rho) {
  if (delta <= 0 || delta > 1) throw ValidationError("delta must lie in (0, 1]");
  if (rho <= 0) throw ValidationError("rho must be positive");
  Rational e = 1 - delta;
  Rational factor;
  if (e == 0) {
    factor = 1;
  } else {
    factor = Rational(std::pow(2.0, to_double(e)));
  }
  factor.canonicalize();
  return WeightVector::with_ratio(factor * rho);
}

double growth_factor(const std::vector<HarnackReport>& rows) {
  if (rows.size() < 3) throw ValidationError("growth factor needs at least three values of n");
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    if (rows[i + 1].n != rows[i].n + 1) throw ValidationError("growth factor needs consecutive n");
  // Trailing run of increases of the ratio.
  std::vector<int> ns;
  std::vector<double> diffs;
  for (std::size_t i = rows.size() - 1; i > 0; --i) {
    double d = rows[i].ratio.midpoint() - rows[i - 1].ratio.midpoint();
    if (!(d > 0)) break;
    ns.insert(ns.begin(), rows[i - 1].n);
    diffs.insert(diffs.begin(), d);
  }
  if (diffs.size() >= 2) {
    double g = std::exp2(fit_log2_slope(ns, diffs).slope);
    if (g > 1) return g;
  }
  return loglinear_growth(rows);
}

double loglinear_growth(const std::vector<HarnackReport>& rows) {
  std::vector<int> ns;
  std::vector<double> v;
  for (const auto& r : rows) {
    ns.push_back(r.n);
    v.push_back(r.ratio.midpoint());
  }
  return std::exp2(fit_log2_slope(ns, v).slope);
}

double ThresholdScan::growth_for(const Rational& rho) const {
  auto it = growth.find(to_string(rho));
  if (it == growth.end()) throw ValidationError("rho " + to_string(rho) + " not in scan");
  return it->second;
}

ThresholdScan weh_threshold_scan(const Rational& delta, const std::vector<Rational>& rhos, int n_min, int n_max,
                                 int L_offset, const BoundaryProfile& profile) {
  require_n(n_min);
  if (n_max < n_min + 2) throw ValidationError("threshold scan needs at least three values of n");
  if (L_offset < 0) throw ValidationError("L offset must be non-negative");
  if (rhos.empty()) throw ValidationError("empty rho list");
  check_level(n_max + L_offset);
  ThresholdScan scan;
  scan.delta = delta;
  scan.n_min = n_min;
  scan.n_max = n_max;
  scan.L_offset = L_offset;
  scan.profile = profile.str();
  scan.rhos = rhos;
  std::sort(scan.rhos.begin(), scan.rhos.end());
  scan.rhos.erase(std::unique(scan.rhos.begin(), scan.rhos.end()), scan.rhos.end());
  std::vector<WeightVector> weights;
  for (const auto& rho : scan.rhos) weights.push_back(threshold_weights(delta, rho));

  std::vector<std::vector<HarnackReport>> per_rho(scan.rhos.size());
  for (int n = n_min; n <= n_max; ++n) {
    auto s = solve_on_ball(n, profile, n + L_offset);
    for (std::size_t i = 0; i < scan.rhos.size(); ++i) {
      auto r = weh_ratio(s, delta, weights[i]);
      r.rho = scan.rhos[i];
      per_rho[i].push_back(r);
    }
  }
  for (std::size_t i = 0; i < scan.rhos.size(); ++i) {
    double f = growth_factor(per_rho[i]);
    scan.growth[to_string(scan.rhos[i])] = f;
    scan.growth_loglinear[to_string(scan.rhos[i])] = loglinear_growth(per_rho[i]);
    for (auto& r : per_rho[i]) {
      r.growth_factor_per_n = f;
      scan.rows.push_back(r);
    }
  }
  return scan;
}

void write_csv(std::ostream& os, const std::vector<HarnackReport>& rows) {
  os << "n,delta,rho,profile,mean_lower,mean_upper,inf,ratio_lower,ratio_upper\n";
  for (const auto& r : rows)
    os << r.n << ',' << to_string(r.delta) << ',' << (r.rho == 0 ? std::string() : to_string(r.rho)) << ','
       << r.profile << ',' << format_double(r.mean_delta_power.lower) << ','
       << format_double(r.mean_delta_power.upper) << ',' << format_double(r.inf) << ','
       << format_double(r.ratio.lower) << ',' << format_double(r.ratio.upper) << '\n';
}

nlohmann::json to_json(const ThresholdScan& s) {
  nlohmann::json rhos = nlohmann::json::array();
  for (const auto& rho : s.rhos) {
    auto w = threshold_weights(s.delta, rho);
    rhos.push_back({{"rho", to_string(rho)}, {"weights", to_json(w)}, {"growth_factor", s.growth_for(rho)},
                    {"loglinear_growth", s.growth_loglinear.at(to_string(rho))}});
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"n", r.n},
                    {"L", r.L},
                    {"rho", to_string(r.rho)},
                    {"mean_lower", r.mean_delta_power.lower},
                    {"mean_upper", r.mean_delta_power.upper},
                    {"inf", r.inf},
                    {"ratio_lower", r.ratio.lower},
                    {"ratio_upper", r.ratio.upper}});
  return {{"delta", to_string(s.delta)}, {"n_range", {s.n_min, s.n_max}}, {"L_offset", s.L_offset},
          {"profile", s.profile},        {"scan", rhos},                  {"rows", rows}};
}

void write_csv(std::ostream& os, const std::vector<EhiResult>& rows) {
  os << "n,k,L,epsilon,inf,sup,ratio,model,inf_at,sup_at\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.k << ',' << r.L << ',' << to_string(r.epsilon) << ',' << format_double(r.inf) << ','
       << format_double(r.sup) << ',' << format_double(r.ratio) << ',' << format_double(r.model) << ','
       << r.inf_at.str() << ',' << r.sup_at.str() << '\n';
}

}  // namespace dendrite
