#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dendrite/addressing.hpp"
#include "dendrite/rational.hpp"

namespace dendrite {

struct Edge {
  std::size_t u = 0;  // vertex indices, u < v
  std::size_t v = 0;
  Rational conductance;
  double conductance_f = 0.0;
};

// A leaf cell of the partition the graph was built from; corners[j-1] is the
// vertex index of F_word(q_j).
struct Cell {
  Word word;
  std::array<std::size_t, 3> corners{};
  Rational scale;  // s_word
};

// Electrical network of a prefix-free cell partition whose cells all have
// depth <= level. The uniform level-L graph is the partition into all words of
// length L. Every cell contributes the two edges q1-q2 and q1-q3 with
// conductance 1/s_word, so the network is the exact trace of the level-L
// network on the kept vertices.
class LevelGraph {
 public:
  LevelGraph(int level, Rational s0, std::vector<Word> cells);

  int level() const { return level_; }
  const Rational& s0() const { return s0_; }
  bool uniform() const { return uniform_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  const VertexId& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Cell>& cells() const { return cells_; }

  std::optional<std::size_t> find(const VertexId& v) const;
  std::size_t index_of(const VertexId& v) const;  // throws ValidationError
  bool contains(const VertexId& v) const { return find(v).has_value(); }

  // Incident (neighbour, edge index) pairs of vertex i.
  struct Incidence {
    std::size_t neighbor;
    std::size_t edge;
  };
  const Incidence* adjacency_begin(std::size_t i) const { return adj_.data() + offsets_[i]; }
  const Incidence* adjacency_end(std::size_t i) const { return adj_.data() + offsets_[i + 1]; }
  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

 private:
  int level_;
  Rational s0_;
  bool uniform_ = false;
  std::vector<VertexId> vertices_;
  std::unordered_map<VertexId, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<Cell> cells_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> adj_;
};

using GraphPtr = std::shared_ptr<const LevelGraph>;

Rational digit_scale(const Rational& s0, int digit);
Rational cell_scale(const Rational& s0, const Word& w);

GraphPtr build_level_graph(int L, const Rational& s0);
// Refines from the root while `refine(word)` holds and depth < L.
GraphPtr build_refined_graph(int L, const Rational& s0, const std::function<bool(const Word&)>& refine);
// Smallest partition (depth <= L) in which every listed level-L lattice point is a cell corner.
GraphPtr build_anchored_graph(int L, const Rational& s0, const std::vector<VertexId>& anchors);

// Partition adapted to spheres around `center`: cells meeting a sphere
// (min corner distance < r <= max corner distance) are refined down to L, and
// with fill_balls every cell meeting the open ball is. Anchors become corners.
struct BallRefinement {
  VertexId center;
  std::vector<Rational> radii;
  std::vector<VertexId> anchors;
  bool fill_balls = false;
};
GraphPtr build_ball_graph(int L, const Rational& s0, const BallRefinement& spec);

// Tree distances from one vertex (exact and float).
std::vector<Rational> distances_from(const LevelGraph& g, std::size_t source);
std::vector<double> distances_from_f(const LevelGraph& g, std::size_t source);
Rational resistance_distance(const LevelGraph& g, const VertexId& u, const VertexId& v);

struct CutEdge {
  std::size_t inside = 0;   // interior endpoint
  std::size_t outside = 0;  // frontier endpoint
  Rational fraction;        // position of the sphere along inside->outside
};

enum class BoundaryPart { None, Upper, Lower };

struct BallRegion {
  VertexId center;
  Rational radius;
  int level = 0;
  std::vector<std::size_t> interior;  // sorted vertex indices
  std::vector<std::size_t> frontier;  // sorted vertex indices
  std::vector<std::size_t> upper_boundary;
  std::vector<std::size_t> lower_boundary;
  std::vector<CutEdge> cut_edges;
  std::vector<Rational> distance;  // from center, every vertex
  std::vector<char> is_interior;
  std::vector<char> is_frontier;
};

BallRegion ball(const LevelGraph& g, const VertexId& center, const Rational& radius);

// Which part of the q0 ball boundary a frontier point lies on.
BoundaryPart boundary_part(const VertexId& v);

struct ReducedNetwork {
  std::vector<VertexId> vertices;  // sorted
  std::map<std::pair<VertexId, VertexId>, Rational> conductances;  // key ordered (min, max)
};

ReducedNetwork schur_trace(const LevelGraph& g, const std::vector<VertexId>& keep);
ReducedNetwork as_network(const LevelGraph& g);

// Check |V| = |E| + 1 and connectivity; throws std::logic_error when violated.
void assert_tree(const LevelGraph& g);

nlohmann::json graph_to_json(const LevelGraph& g);

}  // namespace dendrite
