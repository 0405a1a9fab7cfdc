#include "dendrite/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "dendrite/errors.hpp"
#include "dendrite/harnack.hpp"
#include "dendrite/verify.hpp"

namespace dendrite {

TolerancePreset TolerancePreset::named(const std::string& name) {
  if (name == "strict") return {name, 14, 1e-6};
  if (name == "default") return {name, 12, 1e-4};
  if (name == "loose") return {name, 8, 1e-2};
  throw ValidationError("tolerance preset must be strict, default or loose, got '" + name + "'");
}

void RunConfig::validate() const {
  if (s0 <= 0 || s0 >= 1) throw ValidationError("s0 must lie in (0,1)");
  if (max_level < 0 || max_level > 30) throw ValidationError("max_level must lie in 0..30");
  TolerancePreset::named(tolerance);
  if (output_dir.empty()) throw ValidationError("output directory must not be empty");
  // Re-running the constructor checks the weight invariants.
  WeightVector(weights.w0, weights.w1, weights.w2, weights.w3);
}

nlohmann::json RunConfig::to_json() const {
  return {{"s0", to_string(s0)},        {"weights", weights.str()},      {"max_level", max_level},
          {"tolerance", tolerance},     {"output_dir", output_dir},      {"seed", seed}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known{"s0", "weights", "max_level", "tolerance", "output_dir", "seed"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ValidationError("unknown config key '" + key + "'");
  RunConfig c;
  try {
    if (j.contains("s0")) c.s0 = parse_rational(j.at("s0").get<std::string>());
    if (j.contains("weights")) c.weights = WeightVector::parse(j.at("weights").get<std::string>());
    if (j.contains("max_level")) c.max_level = j.at("max_level").get<int>();
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<std::string>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

void RunConfig::apply_environment() {
  if (const char* env = std::getenv("DENDRITE_MAX_LEVEL")) {
    std::string_view sv(env);
    int v = 0;
    auto r = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (r.ec != std::errc() || r.ptr != sv.data() + sv.size())
      throw ValidationError("DENDRITE_MAX_LEVEL must be an integer, got '" + std::string(sv) + "'");
    max_level = v;
  }
}

std::pair<int, int> parse_range(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    int v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw ValidationError("bad range '" + text + "'");
    return v;
  };
  auto dots = text.find("..");
  std::pair<int, int> r = dots == std::string::npos
                              ? std::pair{to_int(text), to_int(text)}
                              : std::pair{to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
  if (r.first > r.second) throw ValidationError("empty range '" + text + "'");
  return r;
}

namespace {

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_rational(item));
  if (out.empty()) throw ValidationError("empty list '" + text + "'");
  return out;
}

VertexId parse_point(const std::string& text, int n) {
  if (text == "q0" || text.rfind("x:", 0) == 0 || text.rfind("y:", 0) == 0)
    return typical_point(TypicalPoint::parse(text, n));
  return VertexId::parse(text);
}

std::string num(double x) { return format_double(x); }

// Where a report goes: a file under the output directory, or the given stream.
class Sink {
 public:
  Sink(const RunConfig& cfg, const std::string& target, std::ostream& fallback) : fallback_(fallback) {
    if (target.empty()) return;
    std::filesystem::path p(target);
    if (p.is_relative()) p = std::filesystem::path(cfg.output_dir) / p;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    file_ = std::make_unique<std::ofstream>(p);
    if (!*file_) throw ValidationError("cannot write '" + p.string() + "'");
  }
  std::ostream& os() { return file_ ? *file_ : fallback_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::ostream& fallback_;
  std::unique_ptr<std::ofstream> file_;
};

void echo_config(std::ostream& os, const RunConfig& cfg) { os << "# config " << cfg.to_json().dump() << '\n'; }

void print_json(std::ostream& os, nlohmann::json j, const RunConfig& cfg) {
  j["config"] = cfg.to_json();
  os << j.dump(2) << '\n';
}

void require_half(const RunConfig& cfg, const std::string& what) {
  if (cfg.s0 != Rational(1, 2)) throw ValidationError(what + " is defined for s0 = 1/2 only");
}

HarmonicSpec harmonic_spec(const std::string& kind, const std::string& data, const Rational& s0) {
  auto abc = [&] {
    auto v = parse_rational_list(data);
    if (v.size() != 3) throw ValidationError("--data needs three values a,b,c for " + kind);
    return v;
  };
  if (kind == "udown") return {UDown{}, s0};
  if (kind == "uup") return {UUp{}, s0};
  if (kind == "uminus") {
    auto v = abc();
    return {UMinus{v[0], v[1], v[2]}, s0};
  }
  if (kind == "uplus") {
    auto v = abc();
    return {UPlus{v[0], v[1], v[2]}, s0};
  }
  throw ValidationError("unknown harmonic kind '" + kind + "'");
}

struct Options {
  std::string config_file, s0, weights, tolerance, output_dir;
  std::optional<int> max_level;
  std::optional<std::uint64_t> seed;
  bool print_config = false;
};

RunConfig resolve(const Options& o) {
  RunConfig cfg;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw ValidationError("cannot read config '" + o.config_file + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("config is not JSON: ") + e.what());
    }
    cfg = RunConfig::from_json(j);
  }
  cfg.apply_environment();
  if (!o.s0.empty()) cfg.s0 = parse_rational(o.s0);
  if (!o.weights.empty()) cfg.weights = WeightVector::parse(o.weights);
  if (o.max_level) cfg.max_level = *o.max_level;
  if (!o.tolerance.empty()) cfg.tolerance = o.tolerance;
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  if (o.seed) cfg.seed = *o.seed;
  cfg.validate();
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet-space computations on the tree-like fractal"};
  app.name(args.empty() ? "dendrite" : args[0]);
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_file, "JSON config file");
  app.add_option("--s0", o.s0, "energy scale s0 in (0,1), default 1/2");
  app.add_option("--weights", o.weights, "measure weights \"w0,w2\", default 1/4,1/4");
  app.add_option("--max-level", o.max_level, "largest graph level, default 12");
  app.add_option("--tolerance", o.tolerance, "quadrature preset: strict, default, loose");
  app.add_option("--output-dir", o.output_dir, "directory for report files");
  app.add_option("--seed", o.seed, "seed for sampled points");
  app.add_flag("--print-config", o.print_config, "print the resolved config before running");

  std::function<int(const RunConfig&)> action;

  // graph
  int g_level = 2;
  std::string g_out;
  auto* graph = app.add_subcommand("graph", "level-L graph as JSON");
  graph->add_option("--level", g_level, "level L")->required();
  graph->add_option("--out", g_out, "output file");
  graph->callback([&] {
    action = [&](const RunConfig& cfg) {
      check_level(g_level);
      Sink s(cfg, g_out, out);
      print_json(s.os(), graph_to_json(*build_level_graph(g_level, cfg.s0)), cfg);
      return 0;
    };
  });

  // resistance
  std::string r_from, r_to;
  int r_level = 0;
  bool r_float = false;
  auto* resistance = app.add_subcommand("resistance", "exact effective resistance between two vertices");
  resistance->add_option("--from", r_from, "vertex word:corner")->required();
  resistance->add_option("--to", r_to, "vertex word:corner")->required();
  resistance->add_option("--level", r_level, "level L");
  resistance->add_flag("--float", r_float, "also print the decimal value");
  resistance->callback([&] {
    action = [&](const RunConfig& cfg) {
      check_level(r_level);
      auto a = VertexId::parse(r_from), b = VertexId::parse(r_to);
      auto g = build_anchored_graph(r_level, cfg.s0, {a, b});
      if (a == b) throw ValidationError("--from and --to must differ");
      auto r = effective_resistance<Rational>(g, {a}, {b});
      out << to_string(r);
      if (r_float) out << ' ' << num(to_double(r));
      out << '\n';
      return 0;
    };
  });

  // ball
  int b_n = 1, b_level = -1;
  std::string b_point = "q0", b_psi, b_out;
  auto* ballc = app.add_subcommand("ball", "resistance from a point to the complement of B(q0, 2^-n)");
  ballc->add_option("--n", b_n, "ball index n >= 1");
  ballc->add_option("--level", b_level, "level L, default n+7 capped at max_level");
  ballc->add_option("--x", b_point, "q0, x:m:k, y:k or word:corner");
  ballc->add_option("--psi", b_psi, "print the exact coefficient table for x:m0:k0 or y:k0 instead");
  ballc->add_option("--out", b_out, "output file");
  ballc->callback([&] {
    action = [&](const RunConfig& cfg) {
      require_half(cfg, "ball");
      if (b_n < 1) throw ValidationError("--n must be >= 1");
      Sink s(cfg, b_out, out);
      if (!b_psi.empty()) {
        auto tp = TypicalPoint::parse(b_psi, b_n);
        if (tp.kind != TypicalPoint::Kind::Xmk && tp.kind != TypicalPoint::Kind::Yk)
          throw ValidationError("--psi needs x:m0:k0 or y:k0");
        echo_config(s.os(), cfg);
        auto c = tp.kind == TypicalPoint::Kind::Xmk ? psi_coefficients(PsiCase::Xmk, b_n, tp.m, tp.k)
                                                    : psi_coefficients(PsiCase::Yk, b_n, 0, tp.k);
        write_csv(s.os(), c);
        return 0;
      }
      const int L = b_level >= 0 ? b_level : std::min(b_n + 7, cfg.max_level);
      auto x = parse_point(b_point, b_n);
      auto r = boundary_resistance(x, b_n, L);
      auto mu = ball_measure(cfg.weights, *r.graph, r.ball);
      nlohmann::json j{{"n", b_n},
                       {"level", L},
                       {"x", x.str()},
                       {"resistance", r.resistance},
                       {"resistance_lower", r.resistance_lower},
                       {"interior_vertices", r.ball.interior.size()},
                       {"frontier_vertices", r.ball.frontier.size()},
                       {"mu_ball", {{"lower", to_string(mu.lower)}, {"upper", to_string(mu.upper)}}}};
      if (x == q0()) {
        Rational limit = 1 / (3 * (pow2(b_n - 1) + pow2(2 * b_n - 1)));
        j["limit"] = to_string(limit);
        j["relative_excess"] = r.resistance / to_double(limit) - 1;
      }
      print_json(s.os(), j, cfg);
      return 0;
    };
  });

  // harmonics
  std::string h_kind = "udown", h_data, h_out;
  int h_level = 4, h_n = 1, h_m = 0, h_k = 0;
  auto* harm = app.add_subcommand("harmonics", "closed-form harmonic functions and psi coefficient tables");
  harm->add_option("--kind", h_kind, "udown, uup, uminus, uplus, psi-x, psi-y");
  harm->add_option("--level", h_level, "graph level for function values");
  harm->add_option("--data", h_data, "a,b,c boundary data for uminus and uplus");
  harm->add_option("--n", h_n, "ball index for psi tables");
  harm->add_option("--m", h_m, "m0 for psi-x");
  harm->add_option("--k", h_k, "k0 for psi tables");
  harm->add_option("--out", h_out, "output file");
  harm->callback([&] {
    action = [&](const RunConfig& cfg) {
      Sink s(cfg, h_out, out);
      if (h_kind == "psi-x" || h_kind == "psi-y") {
        echo_config(s.os(), cfg);
        write_csv(s.os(), psi_coefficients(h_kind == "psi-x" ? PsiCase::Xmk : PsiCase::Yk, h_n, h_m, h_k));
        return 0;
      }
      check_level(h_level);
      auto spec = harmonic_spec(h_kind, h_data, cfg.s0);
      std::optional<DiscreteHarmonic> disc;
      if (h_kind == "udown") disc = discrete_udown(h_level, cfg.s0);
      if (h_kind == "uup") {
        require_half(cfg, "uup");
        disc = discrete_uup(h_level);
      }
      auto g = disc ? disc->u.graph : build_level_graph(h_level, cfg.s0);
      auto& os = s.os();
      echo_config(os, cfg);
      os << "# energy_closed " << to_string(energy_closed(spec));
      if (disc) os << " energy_level_" << h_level << ' ' << to_string(disc->energy);
      os << '\n' << "vertex,x,y,closed_exact,closed_float";
      if (disc) os << ",discrete_exact,discrete_float";
      os << '\n';
      for (std::size_t i = 0; i < g->vertex_count(); ++i) {
        const auto& v = g->vertex(i);
        auto p = coordinates(v);
        auto c = eval_closed(spec, v);
        os << v.str() << ',' << num(p.x) << ',' << num(p.y) << ',' << to_string(c) << ',' << num(to_double(c));
        if (disc) os << ',' << to_string(disc->u.values[i]) << ',' << num(to_double(disc->u.values[i]));
        os << '\n';
      }
      return 0;
    };
  });

  // measure
  std::string m_integrand = "udown", m_data, m_center, m_radius, m_out;
  int m_level = 8;
  auto* meas = app.add_subcommand("measure", "certified integrals and ball measures");
  meas->add_option("--integrand", m_integrand, "udown, uup, uminus, uplus");
  meas->add_option("--data", m_data, "a,b,c for uminus and uplus");
  meas->add_option("--center", m_center, "ball centre word:corner; switches to ball-measure mode");
  meas->add_option("--radius", m_radius, "ball radius (rational)");
  meas->add_option("--level", m_level, "graph level for ball measures");
  meas->add_option("--out", m_out, "output file");
  meas->callback([&] {
    action = [&](const RunConfig& cfg) {
      Sink s(cfg, m_out, out);
      if (!m_center.empty()) {
        if (m_radius.empty()) throw ValidationError("--center needs --radius");
        check_level(m_level);
        auto c = VertexId::parse(m_center);
        auto r = parse_rational(m_radius);
        auto mu = ball_measure(cfg.weights, c, r, m_level, cfg.s0);
        print_json(s.os(),
                   {{"center", c.str()},
                    {"radius", to_string(r)},
                    {"level", m_level},
                    {"lower", to_string(mu.lower)},
                    {"upper", to_string(mu.upper)},
                    {"exact", mu.exact ? nlohmann::json(to_string(*mu.exact)) : nlohmann::json(nullptr)}},
                   cfg);
        return 0;
      }
      auto spec = harmonic_spec(m_integrand, m_data, cfg.s0);
      auto tol = cfg.preset();
      auto b = integrate_pw_harmonic(ClosedFormFunction(spec), cfg.weights, tol.max_depth, tol.relative_gap);
      nlohmann::json j{{"integrand", m_integrand},
                       {"lower", to_string(b.lower)},
                       {"upper", to_string(b.upper)},
                       {"midpoint", b.midpoint()},
                       {"self_similar", to_string(integral_closed(spec, cfg.weights))},
                       {"epsilon0", to_string(epsilon0(cfg.weights))},
                       {"epsilon1", to_string(epsilon1(cfg.weights))}};
      print_json(s.os(), j, cfg);
      return 0;
    };
  });

  // doubling
  std::string d_n = "2..6", d_points = "yn", d_out;
  int d_offset = 6, d_samples = 4;
  auto* doub = app.add_subcommand("doubling", "bounds on mu(B(x,2r)) / mu(B(x,r))");
  doub->add_option("--n", d_n, "range of n, e.g. 2..6");
  doub->add_option("--points", d_points, "yn: x = y_n, r = 2^-n; lattice: seeded x in V_n, r = 2^-n-1");
  doub->add_option("--samples", d_samples, "lattice points per n");
  doub->add_option("--level-offset", d_offset, "graph level n + offset");
  doub->add_option("--out", d_out, "output file");
  doub->callback([&] {
    action = [&](const RunConfig& cfg) {
      auto [lo, hi] = parse_range(d_n);
      if (lo < 1) throw ValidationError("--n must start at 1 or above");
      if (d_points != "yn" && d_points != "lattice") throw ValidationError("--points must be yn or lattice");
      if (d_samples < 1) throw ValidationError("--samples must be >= 1");
      Sink s(cfg, d_out, out);
      auto& os = s.os();
      echo_config(os, cfg);
      os << "n,x,r,L,lower,upper,bound\n";
      std::mt19937_64 rng(cfg.seed);
      for (int n = lo; n <= hi; ++n) {
        std::vector<std::pair<VertexId, Rational>> jobs;
        if (d_points == "yn") {
          jobs.emplace_back(doubling_point(n), pow2(-n));
        } else {
          auto vn = build_level_graph(n, cfg.s0);
          for (int i = 0; i < d_samples; ++i) jobs.emplace_back(vn->vertex(rng() % vn->vertex_count()), pow2(-n - 1));
        }
        for (const auto& [x, r] : jobs) {
          const int L = n + d_offset + (d_points == "lattice" ? 1 : 0);
          auto d = doubling_ratio(cfg.weights, x, r, L, cfg.s0);
          Rational bound = d_points == "yn" ? Rational(3, 16) * pow2(n) : Rational(64);
          os << n << ',' << x.str() << ',' << to_string(r) << ',' << L << ',' << num(to_double(d.lower)) << ','
             << (d.upper ? num(to_double(*d.upper)) : "") << ',' << to_string(bound) << '\n';
        }
      }
      return 0;
    };
  });

  // exit-ratio
  std::string e_n = "2..5", e_out, e_summary;
  int e_offset = 5;
  auto* exitc = app.add_subcommand("exit-ratio", "inf/sup of G1 on the small ball against n");
  exitc->add_option("--n", e_n, "range of n");
  exitc->add_option("--level-offset", e_offset, "graph level n + offset");
  exitc->add_option("--out", e_out, "CSV file; the JSON summary then goes to stdout");
  exitc->add_option("--summary", e_summary, "JSON summary file");
  exitc->callback([&] {
    action = [&](const RunConfig& cfg) {
      require_half(cfg, "exit-ratio");
      auto [lo, hi] = parse_range(e_n);
      auto rep = exit_ratio_experiment(lo, hi, cfg.weights, e_offset);
      Sink csv(cfg, e_out, out);
      echo_config(csv.os(), cfg);
      write_csv(csv.os(), rep);
      if (csv.to_file() || !e_summary.empty()) {
        Sink sum(cfg, e_summary, out);
        print_json(sum.os(), to_json(rep), cfg);
      }
      return 0;
    };
  });

  // ehi
  std::string h2_n = "2..5", h2_eps = "1/2", h2_out, h2_summary;
  int h2_k = 1, h2_offset = 7;
  auto* ehi = app.add_subcommand("ehi", "elliptic Harnack ratio inf/sup on eps B_n");
  ehi->add_option("--n", h2_n, "range of n");
  ehi->add_option("--k", h2_k, "boundary piece depth k");
  ehi->add_option("--epsilon", h2_eps, "ball fraction eps");
  ehi->add_option("--level-offset", h2_offset, "graph level n + offset");
  ehi->add_option("--out", h2_out, "CSV file; the JSON summary then goes to stdout");
  ehi->add_option("--summary", h2_summary, "JSON summary file");
  ehi->callback([&] {
    action = [&](const RunConfig& cfg) {
      require_half(cfg, "ehi");
      auto [lo, hi] = parse_range(h2_n);
      auto eps = parse_rational(h2_eps);
      std::vector<EhiResult> rows;
      std::vector<int> ns;
      std::vector<double> ratios;
      for (int n = lo; n <= hi; ++n) {
        rows.push_back(ehi_ratio(n, h2_k, eps, n + h2_offset));
        ns.push_back(n);
        ratios.push_back(rows.back().ratio);
      }
      Sink csv(cfg, h2_out, out);
      echo_config(csv.os(), cfg);
      write_csv(csv.os(), rows);
      if (csv.to_file() || !h2_summary.empty()) {
        nlohmann::json j{{"n_range", {lo, hi}}, {"k", h2_k}, {"epsilon", to_string(eps)}, {"L_offset", h2_offset}};
        if (ns.size() >= 2) j["log2_slope"] = fit_log2_slope(ns, ratios).slope;
        Sink sum(cfg, h2_summary, out);
        print_json(sum.os(), j, cfg);
      }
      return 0;
    };
  });

  // weh
  std::string w_n = "2..5", w_delta = "1", w_rho, w_profile = "upper:0:1", w_out, w_summary;
  int w_offset = 6;
  auto* weh = app.add_subcommand("weh", "weak Harnack ratio and its growth in n");
  weh->add_option("--n", w_n, "range of n (at least three values)");
  weh->add_option("--delta", w_delta, "exponent delta in (0,1]");
  weh->add_option("--rho", w_rho, "comma list of rho; weights w2/w0 = 2^(1-delta) rho. Without it the config weights are used");
  weh->add_option("--profile", w_profile, "boundary data: upper:m:k, lower:omega:k, uniform");
  weh->add_option("--level-offset", w_offset, "graph level n + offset");
  weh->add_option("--out", w_out, "CSV file; the JSON summary then goes to stdout");
  weh->add_option("--summary", w_summary, "JSON summary file");
  weh->callback([&] {
    action = [&](const RunConfig& cfg) {
      require_half(cfg, "weh");
      auto [lo, hi] = parse_range(w_n);
      auto delta = parse_rational(w_delta);
      if (delta <= 0 || delta > 1) throw ValidationError("--delta must lie in (0,1]");
      auto profile = BoundaryProfile::parse(w_profile, lo);
      for (int n = lo; n <= hi; ++n) profile.validate(n);
      nlohmann::json summary;
      std::vector<HarnackReport> rows;
      if (!w_rho.empty()) {
        auto scan = weh_threshold_scan(delta, parse_rational_list(w_rho), lo, hi, w_offset, profile);
        rows = scan.rows;
        summary = to_json(scan);
      } else {
        if (hi - lo < 2) throw ValidationError("--n needs at least three values");
        for (int n = lo; n <= hi; ++n) rows.push_back(weh_ratio(n, delta, cfg.weights, profile, n + w_offset));
        summary = {{"delta", to_string(delta)},
                   {"n_range", {lo, hi}},
                   {"L_offset", w_offset},
                   {"profile", profile.str()},
                   {"weights", to_json(cfg.weights)},
                   {"growth_factor", growth_factor(rows)},
                   {"loglinear_growth", loglinear_growth(rows)}};
      }
      Sink csv(cfg, w_out, out);
      echo_config(csv.os(), cfg);
      write_csv(csv.os(), rows);
      if (csv.to_file() || !w_summary.empty()) {
        Sink sum(cfg, w_summary, out);
        print_json(sum.os(), summary, cfg);
      }
      return 0;
    };
  });

  // verify
  std::string v_suite = "all";
  auto* verify = app.add_subcommand("verify", "run the acceptance checks; exit 1 on any failure");
  verify->add_option("--suite", v_suite, "all, exact, experiments, properties, or a list like 1,3,8");
  verify->callback([&] {
    action = [&](const RunConfig&) { return run_suite(suite_criteria(v_suite), out) ? 0 : 1; };
  });

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());  // CLI11 consumes a reversed vector
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 3;
  }

  try {
    RunConfig cfg = resolve(o);
    set_max_level(cfg.max_level);
    if (o.print_config) echo_config(out, cfg);
    return action(cfg);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 3;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dendrite
