#include "dendrite/energy_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "dendrite/errors.hpp"

namespace dendrite {

Rational digit_scale(const Rational& s0, int digit) { return digit <= 1 ? s0 : Rational(1 - s0); }

Rational cell_scale(const Rational& s0, const Word& w) {
  Rational s(1);
  Rational s2 = 1 - s0;
  for (std::size_t i = 0; i < w.size(); ++i) s *= w[i] <= 1 ? s0 : s2;
  return s;
}

LevelGraph::LevelGraph(int level, Rational s0, std::vector<Word> cells) : level_(level), s0_(std::move(s0)) {
  if (s0_ <= 0 || s0_ >= 1) throw ValidationError("s0 must lie in (0,1)");
  check_level(level);
  std::sort(cells.begin(), cells.end());
  for (const auto& w : cells)
    if (static_cast<int>(w.size()) > level) throw ValidationError("cell deeper than graph level");

  std::vector<std::array<VertexId, 3>> corner_ids;
  corner_ids.reserve(cells.size());
  for (const auto& w : cells) {
    corner_ids.push_back({canonicalize(w, Corner::Q1), canonicalize(w, Corner::Q2), canonicalize(w, Corner::Q3)});
    for (const auto& v : corner_ids.back()) index_.emplace(v, 0);
  }
  vertices_.reserve(index_.size());
  for (const auto& [v, _] : index_) vertices_.push_back(v);
  std::sort(vertices_.begin(), vertices_.end());
  for (std::size_t i = 0; i < vertices_.size(); ++i) index_[vertices_[i]] = i;

  cells_.reserve(cells.size());
  edges_.reserve(2 * cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    Cell cell;
    cell.word = cells[c];
    for (int j = 0; j < 3; ++j) cell.corners[j] = index_.at(corner_ids[c][j]);
    cell.scale = cell_scale(s0_, cell.word);
    Rational g = 1 / cell.scale;
    double gf = to_double(g);
    for (int j = 1; j < 3; ++j) {
      std::size_t a = cell.corners[0], b = cell.corners[j];
      edges_.push_back({std::min(a, b), std::max(a, b), g, gf});
    }
    cells_.push_back(std::move(cell));
  }

  std::size_t full = 1;
  for (int i = 0; i < level_; ++i) full *= 4;
  uniform_ = cells_.size() == full &&
             std::all_of(cells_.begin(), cells_.end(),
                         [&](const Cell& c) { return static_cast<int>(c.word.size()) == level_; });

  offsets_.assign(vertices_.size() + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) offsets_[i + 1] += offsets_[i];
  adj_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    adj_[fill[edges_[k].u]++] = {edges_[k].v, k};
    adj_[fill[edges_[k].v]++] = {edges_[k].u, k};
  }
}

std::optional<std::size_t> LevelGraph::find(const VertexId& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t LevelGraph::index_of(const VertexId& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) throw ValidationError("vertex " + v.str() + " not in graph");
  return it->second;
}

namespace {

std::vector<Word> refine_cells(int L, const std::function<bool(const Word&)>& refine) {
  std::vector<Word> out;
  std::vector<Word> stack{Word()};
  while (!stack.empty()) {
    Word w = std::move(stack.back());
    stack.pop_back();
    if (static_cast<int>(w.size()) < L && refine(w)) {
      for (int d = 3; d >= 0; --d) {
        Word child = w;
        child.push_back(d);
        stack.push_back(std::move(child));
      }
    } else {
      out.push_back(std::move(w));
    }
  }
  return out;
}

std::unordered_set<Word> anchor_prefixes(int L, const std::vector<VertexId>& anchors) {
  std::unordered_set<Word> prefixes;
  for (const auto& a : anchors) {
    // V_L holds q1-type words of length <= L and bottom-type words of length <= L.
    if (static_cast<int>(a.word.size()) > L)
      throw ValidationError("point " + a.str() + " is not a lattice point of level " + std::to_string(L));
    for (std::size_t k = 0; k < a.word.size(); ++k) prefixes.insert(a.word.prefix(k));
  }
  return prefixes;
}

}  // namespace

GraphPtr build_level_graph(int L, const Rational& s0) {
  check_level(L);
  return std::make_shared<LevelGraph>(L, s0, refine_cells(L, [](const Word&) { return true; }));
}

GraphPtr build_refined_graph(int L, const Rational& s0, const std::function<bool(const Word&)>& refine) {
  check_level(L);
  return std::make_shared<LevelGraph>(L, s0, refine_cells(L, refine));
}

GraphPtr build_anchored_graph(int L, const Rational& s0, const std::vector<VertexId>& anchors) {
  check_level(L);
  auto prefixes = anchor_prefixes(L, anchors);
  return std::make_shared<LevelGraph>(L, s0, refine_cells(L, [&](const Word& w) { return prefixes.count(w) > 0; }));
}

GraphPtr build_ball_graph(int L, const Rational& s0, const BallRefinement& spec) {
  check_level(L);
  std::vector<VertexId> anchors = spec.anchors;
  anchors.push_back(spec.center);
  auto prefixes = anchor_prefixes(L, anchors);
  std::vector<Word> cells = refine_cells(L, [&](const Word& w) { return prefixes.count(w) > 0; });
  for (;;) {
    auto g = std::make_shared<LevelGraph>(L, s0, cells);
    auto dist = distances_from(*g, g->index_of(spec.center));
    std::vector<Word> next;
    bool changed = false;
    for (const auto& c : g->cells()) {
      bool split = false;
      if (static_cast<int>(c.word.size()) < L) {
        const Rational* lo = &dist[c.corners[0]];
        const Rational* hi = lo;
        for (int j = 1; j < 3; ++j) {
          const Rational& d = dist[c.corners[j]];
          if (d < *lo) lo = &d;
          if (d > *hi) hi = &d;
        }
        for (const auto& r : spec.radii) {
          if (*lo < r && (spec.fill_balls || r <= *hi)) {
            split = true;
            break;
          }
        }
      }
      if (split) {
        changed = true;
        for (int d = 0; d < 4; ++d) {
          Word child = c.word;
          child.push_back(d);
          next.push_back(std::move(child));
        }
      } else {
        next.push_back(c.word);
      }
    }
    if (!changed) return g;
    cells = std::move(next);
  }
}

namespace {
template <class T, class Get>
std::vector<T> bfs_distances(const LevelGraph& g, std::size_t source, Get conductance) {
  std::vector<T> dist(g.vertex_count());
  std::vector<char> seen(g.vertex_count(), 0);
  std::deque<std::size_t> queue{source};
  seen[source] = 1;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (auto it = g.adjacency_begin(v); it != g.adjacency_end(v); ++it) {
      if (seen[it->neighbor]) continue;
      seen[it->neighbor] = 1;
      dist[it->neighbor] = dist[v] + 1 / conductance(g.edges()[it->edge]);
      queue.push_back(it->neighbor);
    }
  }
  return dist;
}
}  // namespace

std::vector<Rational> distances_from(const LevelGraph& g, std::size_t source) {
  return bfs_distances<Rational>(g, source, [](const Edge& e) -> Rational { return e.conductance; });
}

std::vector<double> distances_from_f(const LevelGraph& g, std::size_t source) {
  return bfs_distances<double>(g, source, [](const Edge& e) { return e.conductance_f; });
}

Rational resistance_distance(const LevelGraph& g, const VertexId& u, const VertexId& v) {
  std::size_t a = g.index_of(u);
  std::size_t b = g.index_of(v);
  return distances_from(g, a)[b];
}

BoundaryPart boundary_part(const VertexId& v) {
  // First digit of an address of v: q1 lies in K_0, q2 in K_2, q3 in K_3.
  int first = v.word.empty() ? (v.corner == Corner::Q1 ? 0 : v.corner == Corner::Q2 ? 2 : 3) : v.word[0];
  if (first == 0) return BoundaryPart::Upper;
  if (first == 2) return BoundaryPart::Lower;
  return BoundaryPart::None;
}

BallRegion ball(const LevelGraph& g, const VertexId& center, const Rational& radius) {
  if (radius <= 0) throw ValidationError("radius must be positive");
  BallRegion b;
  b.center = center;
  b.radius = radius;
  b.level = g.level();
  std::size_t c = g.index_of(center);
  b.distance = distances_from(g, c);
  const std::size_t n = g.vertex_count();
  b.is_interior.assign(n, 0);
  b.is_frontier.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (b.distance[v] < radius) b.is_interior[v] = 1;
  for (std::size_t v = 0; v < n; ++v) {
    if (!b.is_interior[v]) continue;
    b.interior.push_back(v);
    for (auto it = g.adjacency_begin(v); it != g.adjacency_end(v); ++it) {
      std::size_t u = it->neighbor;
      if (b.is_interior[u]) continue;
      b.is_frontier[u] = 1;
      Rational f = (radius - b.distance[v]) / (b.distance[u] - b.distance[v]);
      b.cut_edges.push_back({v, u, f});
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (b.is_frontier[v]) b.frontier.push_back(v);

  // The P-up/P-down split only makes sense for the q0-centred dyadic balls.
  bool dyadic = radius <= Rational(1, 2) && radius.get_num() == 1 &&
                mpz_popcount(radius.get_den().get_mpz_t()) == 1;
  if (center == q0() && dyadic) {
    for (std::size_t v : b.frontier) {
      auto part = boundary_part(g.vertex(v));
      if (part == BoundaryPart::Upper) b.upper_boundary.push_back(v);
      if (part == BoundaryPart::Lower) b.lower_boundary.push_back(v);
    }
  }
  return b;
}

ReducedNetwork as_network(const LevelGraph& g) {
  ReducedNetwork net;
  net.vertices = g.vertices();
  for (const auto& e : g.edges()) {
    auto key = std::make_pair(g.vertex(e.u), g.vertex(e.v));
    if (key.second < key.first) std::swap(key.first, key.second);
    net.conductances[key] += e.conductance;
  }
  return net;
}

ReducedNetwork schur_trace(const LevelGraph& g, const std::vector<VertexId>& keep_ids) {
  if (keep_ids.size() < 2) throw ValidationError("schur_trace needs at least two kept vertices");
  const std::size_t n = g.vertex_count();
  std::vector<char> keep(n, 0);
  for (const auto& v : keep_ids) keep[g.index_of(v)] = 1;

  std::vector<std::map<std::size_t, Rational>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u][e.v] += e.conductance;
    adj[e.v][e.u] += e.conductance;
  }
  // Minimum-degree order: leaves vanish, series pairs merge, and any
  // remaining branch point is removed by a star-mesh step.
  std::set<std::pair<std::size_t, std::size_t>> queue;
  for (std::size_t v = 0; v < n; ++v)
    if (!keep[v]) queue.emplace(adj[v].size(), v);
  while (!queue.empty()) {
    auto [deg, v] = *queue.begin();
    queue.erase(queue.begin());
    Rational total(0);
    for (const auto& [u, gu] : adj[v]) total += gu;
    std::vector<std::pair<std::size_t, Rational>> nbrs(adj[v].begin(), adj[v].end());
    for (const auto& [u, gu] : nbrs) {
      if (!keep[u]) queue.erase({adj[u].size(), u});
      adj[u].erase(v);
    }
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        Rational add = nbrs[i].second * nbrs[j].second / total;
        adj[nbrs[i].first][nbrs[j].first] += add;
        adj[nbrs[j].first][nbrs[i].first] += add;
      }
    for (const auto& [u, gu] : nbrs)
      if (!keep[u]) queue.emplace(adj[u].size(), u);
    adj[v].clear();
  }

  ReducedNetwork net;
  for (std::size_t v = 0; v < n; ++v)
    if (keep[v]) net.vertices.push_back(g.vertex(v));
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    for (const auto& [u, gu] : adj[v])
      if (v < u && gu != 0) net.conductances[{g.vertex(v), g.vertex(u)}] = gu;
  }
  return net;
}

void assert_tree(const LevelGraph& g) {
  if (g.vertex_count() != g.edges().size() + 1)
    throw std::logic_error("graph is not a tree: |V| != |E| + 1");
  std::vector<char> seen(g.vertex_count(), 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (auto it = g.adjacency_begin(v); it != g.adjacency_end(v); ++it)
      if (!seen[it->neighbor]) {
        seen[it->neighbor] = 1;
        ++count;
        queue.push_back(it->neighbor);
      }
  }
  if (count != g.vertex_count()) throw std::logic_error("graph is not connected");
}

nlohmann::json graph_to_json(const LevelGraph& g) {
  nlohmann::json j;
  j["level"] = g.level();
  j["s0"] = to_string(g.s0());
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (const auto& v : g.vertices()) vs.push_back(v.str());
  auto& es = j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges())
    es.push_back({g.vertex(e.u).str(), g.vertex(e.v).str(), to_string(e.conductance)});
  return j;
}

}  // namespace dendrite
