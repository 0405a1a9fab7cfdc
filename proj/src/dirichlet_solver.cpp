#include "dendrite/dirichlet_solver.hpp"

#include <cmath>
#include <deque>

#include "dendrite/errors.hpp"

namespace dendrite {

namespace {

template <class T>
T conductance_of(const Edge& e);
template <>
Rational conductance_of<Rational>(const Edge& e) {
  return e.conductance;
}
template <>
double conductance_of<double>(const Edge& e) {
  return e.conductance_f;
}

}  // namespace

template <class T>
VertexFunction<T> solve_dirichlet(const GraphPtr& gp, const Constraints<T>& c, const std::vector<T>* masses) {
  if (c.empty()) throw ValidationError("solve_dirichlet needs at least one pinned vertex");
  const LevelGraph& g = *gp;
  const std::size_t n = g.vertex_count();
  if (masses && masses->size() != n) throw ValidationError("mass vector size mismatch");

  std::vector<char> pinned(n, 0);
  VertexFunction<T> out{gp, std::vector<T>(n)};
  for (const auto& [v, val] : c.pinned()) {
    if (v >= n) throw ValidationError("pinned vertex out of range");
    pinned[v] = 1;
    out.values[v] = val;
  }
  if (c.pinned().size() == n) return out;

  // BFS from a pinned root gives every free vertex a parent.
  const std::size_t root = c.pinned().begin()->first;
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<std::size_t> parent(n, n), parent_edge(n, 0);
  std::vector<char> seen(n, 0);
  order.push_back(root);
  seen[root] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    std::size_t v = order[head];
    for (auto it = g.adjacency_begin(v); it != g.adjacency_end(v); ++it) {
      if (seen[it->neighbor]) continue;
      seen[it->neighbor] = 1;
      parent[it->neighbor] = v;
      parent_edge[it->neighbor] = it->edge;
      order.push_back(it->neighbor);
    }
  }
  if (order.size() != n) throw std::logic_error("graph is not connected");

  // u_v = alpha_v + beta_v * u_parent for free v.
  std::vector<T> alpha(n), beta(n);
  for (std::size_t k = order.size(); k-- > 1;) {
    std::size_t v = order[k];
    if (pinned[v]) continue;
    T gp_ = conductance_of<T>(g.edges()[parent_edge[v]]);
    T denom = gp_;
    T numer = masses ? (*masses)[v] : T(0);
    for (auto it = g.adjacency_begin(v); it != g.adjacency_end(v); ++it) {
      std::size_t ch = it->neighbor;
      if (ch == parent[v]) continue;
      T gc = conductance_of<T>(g.edges()[it->edge]);
      if (pinned[ch]) {
        denom += gc;
        numer += gc * out.values[ch];
      } else {
        denom += gc * (1 - beta[ch]);
        numer += gc * alpha[ch];
      }
    }
    alpha[v] = numer / denom;
    beta[v] = gp_ / denom;
  }
  for (std::size_t k = 1; k < order.size(); ++k) {
    std::size_t v = order[k];
    if (!pinned[v]) out.values[v] = alpha[v] + beta[v] * out.values[parent[v]];
  }
  return out;
}

VertexFunction<double> solve_dirichlet_cg(const GraphPtr& gp, const Constraints<double>& c,
                                          const std::vector<double>* masses, double tol, CgStats* stats) {
  if (c.empty()) throw ValidationError("solve_dirichlet needs at least one pinned vertex");
  const LevelGraph& g = *gp;
  const std::size_t n = g.vertex_count();
  std::vector<char> pinned(n, 0);
  VertexFunction<double> out{gp, std::vector<double>(n, 0.0)};
  for (const auto& [v, val] : c.pinned()) {
    pinned[v] = 1;
    out.values[v] = val;
  }
  std::vector<double> diag(n, 0.0), b(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (pinned[v]) continue;
    b[v] = masses ? (*masses)[v] : 0.0;
    for (auto it = g.adjacency_begin(v); it != g.adjacency_end(v); ++it) {
      double w = g.edges()[it->edge].conductance_f;
      diag[v] += w;
      if (pinned[it->neighbor]) b[v] += w * out.values[it->neighbor];
    }
  }
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t v = 0; v < n; ++v) {
      if (pinned[v]) {
        y[v] = 0.0;
        continue;
      }
      double s = diag[v] * x[v];
      for (auto it = g.adjacency_begin(v); it != g.adjacency_end(v); ++it)
        if (!pinned[it->neighbor]) s -= g.edges()[it->edge].conductance_f * x[it->neighbor];
      y[v] = s;
    }
  };
  std::vector<double> x(n, 0.0), r = b, z(n), p(n), q(n);
  double bnorm = 0.0;
  for (double v : b) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) bnorm = 1.0;
  for (std::size_t v = 0; v < n; ++v) z[v] = pinned[v] ? 0.0 : r[v] / diag[v];
  p = z;
  double rz = 0.0;
  for (std::size_t v = 0; v < n; ++v) rz += r[v] * z[v];
  int it = 0;
  double rel = 0.0;
  for (; it < static_cast<int>(10 * n + 100); ++it) {
    double rn = 0.0;
    for (double v : r) rn += v * v;
    rel = std::sqrt(rn) / bnorm;
    if (rel < tol) break;
    apply(p, q);
    double pq = 0.0;
    for (std::size_t v = 0; v < n; ++v) pq += p[v] * q[v];
    double a = rz / pq;
    for (std::size_t v = 0; v < n; ++v) {
      x[v] += a * p[v];
      r[v] -= a * q[v];
    }
    for (std::size_t v = 0; v < n; ++v) z[v] = pinned[v] ? 0.0 : r[v] / diag[v];
    double rz2 = 0.0;
    for (std::size_t v = 0; v < n; ++v) rz2 += r[v] * z[v];
    for (std::size_t v = 0; v < n; ++v) p[v] = z[v] + (rz2 / rz) * p[v];
    rz = rz2;
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!pinned[v]) out.values[v] = x[v];
  if (stats) *stats = {it, rel};
  return out;
}

template <class T>
T dirichlet_energy(const LevelGraph& g, const std::vector<T>& f) {
  T e(0);
  for (const auto& edge : g.edges()) {
    T d = f[edge.u] - f[edge.v];
    e += conductance_of<T>(edge) * d * d;
  }
  return e;
}

template <class T>
T effective_resistance(const GraphPtr& g, const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  if (a.empty() || b.empty()) throw ValidationError("effective_resistance needs nonempty sets");
  Constraints<T> c;
  for (const auto& v : a) c.pin(*g, v, T(0));
  for (const auto& v : b) {
    std::size_t i = g->index_of(v);
    if (c.pinned().count(i)) throw ValidationError("effective_resistance sets overlap at " + v.str());
    c.pin(i, T(1));
  }
  auto u = solve_dirichlet(g, c);
  return T(1) / dirichlet_energy(u);
}

template <class T>
Equilibrium<T> equilibrium_potential(const GraphPtr& g, const VertexId& x, const std::vector<std::size_t>& grounded) {
  std::size_t xi = g->index_of(x);
  if (grounded.empty()) throw ValidationError("equilibrium potential needs a grounded set");
  Constraints<T> c;
  for (std::size_t v : grounded) {
    if (v == xi) throw ValidationError("source vertex " + x.str() + " is grounded");
    c.pin(v, T(0));
  }
  c.pin(xi, T(1));
  auto psi = solve_dirichlet(g, c);
  T e = dirichlet_energy(psi);
  return {std::move(psi), T(1) / e};
}

template <class T>
VertexFunction<T> green_g1(const GraphPtr& g, const BallRegion& ball, const std::vector<T>& masses) {
  if (masses.size() != g->vertex_count()) throw ValidationError("mass vector size mismatch");
  for (std::size_t v = 0; v < masses.size(); ++v)
    if (!ball.is_interior[v] && masses[v] != 0)
      throw ValidationError("mass on non-interior vertex " + g->vertex(v).str());
  if (ball.frontier.empty()) throw ValidationError("ball has empty frontier");
  Constraints<T> c;
  for (std::size_t v : ball.frontier) c.pin(v, T(0));
  return solve_dirichlet(g, c, &masses);
}

void write_csv(std::ostream& os, const VertexFunction<Rational>& f) {
  os << "vertex,value_exact,value_float\n";
  for (std::size_t i = 0; i < f.values.size(); ++i)
    os << f.graph->vertex(i).str() << ',' << to_string(f.values[i]) << ',' << format_double(to_double(f.values[i]))
       << '\n';
}

void write_csv(std::ostream& os, const VertexFunction<double>& f) {
  os << "vertex,value_exact,value_float\n";
  for (std::size_t i = 0; i < f.values.size(); ++i)
    os << f.graph->vertex(i).str() << ",," << format_double(f.values[i]) << '\n';
}

template VertexFunction<Rational> solve_dirichlet(const GraphPtr&, const Constraints<Rational>&,
                                                  const std::vector<Rational>*);
template VertexFunction<double> solve_dirichlet(const GraphPtr&, const Constraints<double>&,
                                                const std::vector<double>*);
template Rational dirichlet_energy(const LevelGraph&, const std::vector<Rational>&);
template double dirichlet_energy(const LevelGraph&, const std::vector<double>&);
template Rational effective_resistance<Rational>(const GraphPtr&, const std::vector<VertexId>&,
                                                 const std::vector<VertexId>&);
template double effective_resistance<double>(const GraphPtr&, const std::vector<VertexId>&,
                                             const std::vector<VertexId>&);
template Equilibrium<Rational> equilibrium_potential<Rational>(const GraphPtr&, const VertexId&,
                                                               const std::vector<std::size_t>&);
template Equilibrium<double> equilibrium_potential<double>(const GraphPtr&, const VertexId&,
                                                           const std::vector<std::size_t>&);
template VertexFunction<Rational> green_g1(const GraphPtr&, const BallRegion&, const std::vector<Rational>&);
template VertexFunction<double> green_g1(const GraphPtr&, const BallRegion&, const std::vector<double>&);

}  // namespace dendrite
