#pragma once

#include <map>
#include <ostream>
#include <vector>

#include "dendrite/energy_graph.hpp"

namespace dendrite {

template <class T>
struct VertexFunction {
  GraphPtr graph;
  std::vector<T> values;  // indexed like graph->vertices()

  const T& at(const VertexId& v) const { return values[graph->index_of(v)]; }
  const T& operator[](std::size_t i) const { return values[i]; }
};

template <class T>
class Constraints {
 public:
  void pin(std::size_t vertex, T value) { pinned_[vertex] = std::move(value); }
  void pin(const LevelGraph& g, const VertexId& v, T value) { pin(g.index_of(v), std::move(value)); }
  const std::map<std::size_t, T>& pinned() const { return pinned_; }
  bool empty() const { return pinned_.empty(); }

 private:
  std::map<std::size_t, T> pinned_;
};

// Exact two-pass tree elimination. `masses`, when given, is the right-hand
// side: at a free vertex sum_y c_xy (u(x) - u(y)) = masses[x].
template <class T>
VertexFunction<T> solve_dirichlet(const GraphPtr& g, const Constraints<T>& c, const std::vector<T>* masses = nullptr);

// Jacobi-preconditioned conjugate gradients; cross-check only.
struct CgStats {
  int iterations = 0;
  double relative_residual = 0.0;
};
VertexFunction<double> solve_dirichlet_cg(const GraphPtr& g, const Constraints<double>& c,
                                          const std::vector<double>* masses = nullptr, double tol = 1e-12,
                                          CgStats* stats = nullptr);

template <class T>
T dirichlet_energy(const LevelGraph& g, const std::vector<T>& f);
template <class T>
T dirichlet_energy(const VertexFunction<T>& f) {
  return dirichlet_energy(*f.graph, f.values);
}

template <class T>
T effective_resistance(const GraphPtr& g, const std::vector<VertexId>& a, const std::vector<VertexId>& b);

template <class T>
struct Equilibrium {
  VertexFunction<T> psi;
  T resistance;
};

template <class T>
Equilibrium<T> equilibrium_potential(const GraphPtr& g, const VertexId& x, const std::vector<std::size_t>& grounded);

template <class T>
VertexFunction<T> green_g1(const GraphPtr& g, const BallRegion& ball, const std::vector<T>& masses);

// CSV: vertex,value_exact,value_float. Float-mode functions leave value_exact empty.
void write_csv(std::ostream& os, const VertexFunction<Rational>& f);
void write_csv(std::ostream& os, const VertexFunction<double>& f);

}  // namespace dendrite
