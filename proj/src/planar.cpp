#include "loopsoup/planar.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace loopsoup {

namespace {

int position_in(std::span<const int> list, int value) {
  const auto it = std::find(list.begin(), list.end(), value);
  return it == list.end() ? -1 : static_cast<int>(it - list.begin());
}

void check_rotation(const WeightedGraph& g, const RotationSystem& rotation) {
  const int n = g.vertex_count();
  if (static_cast<int>(rotation.size()) != n)
    throw std::invalid_argument("planar map: rotation system must list every vertex");
  for (int x = 0; x < n; ++x) {
    std::vector<int> listed = rotation[static_cast<std::size_t>(x)];
    std::vector<int> actual(g.neighbors(x).begin(), g.neighbors(x).end());
    std::sort(listed.begin(), listed.end());
    std::sort(actual.begin(), actual.end());
    if (listed != actual)
      throw std::invalid_argument("planar map: rotation at vertex " + std::to_string(x) +
                                  " does not match its neighbors");
  }
}

}  // namespace

std::vector<std::vector<DirectedEdge>> extract_faces(const WeightedGraph& g, const RotationSystem& rotation) {
  check_rotation(g, rotation);
  const int n = g.vertex_count();
  if (g.edges().empty()) throw std::invalid_argument("planar map: graph has no edges");

  std::vector<std::vector<bool>> used(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) used[static_cast<std::size_t>(x)].assign(rotation[static_cast<std::size_t>(x)].size(), false);

  std::vector<std::vector<DirectedEdge>> faces;
  for (int x = 0; x < n; ++x) {
    const auto& rot_x = rotation[static_cast<std::size_t>(x)];
    for (std::size_t i = 0; i < rot_x.size(); ++i) {
      if (used[static_cast<std::size_t>(x)][i]) continue;
      std::vector<DirectedEdge> boundary;
      int u = x;
      int slot = static_cast<int>(i);
      while (!used[static_cast<std::size_t>(u)][static_cast<std::size_t>(slot)]) {
        used[static_cast<std::size_t>(u)][static_cast<std::size_t>(slot)] = true;
        const int v = rotation[static_cast<std::size_t>(u)][static_cast<std::size_t>(slot)];
        boundary.push_back({u, v});
        const auto& rot_v = rotation[static_cast<std::size_t>(v)];
        const int back = position_in(rot_v, u);
        const int deg = static_cast<int>(rot_v.size());
        slot = (back - 1 + deg) % deg;
        u = v;
      }
      faces.push_back(std::move(boundary));
    }
  }
  const long euler = static_cast<long>(n) - static_cast<long>(g.edges().size()) + static_cast<long>(faces.size());
  if (euler != 2)
    throw std::invalid_argument("planar map: rotation system is not a planar embedding (V - E + F = " +
                                std::to_string(euler) + ")");
  return faces;
}

PlanarMap::PlanarMap(WeightedGraph graph, RotationSystem rotation, DirectedEdge infinite_face_edge)
    : graph_(std::move(graph)), transition_(graph_), rotation_(std::move(rotation)) {
  faces_ = extract_faces(graph_, rotation_);
  const int n = graph_.vertex_count();
  left_face_.resize(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) left_face_[static_cast<std::size_t>(x)].assign(graph_.neighbors(x).size(), -1);
  for (std::size_t f = 0; f < faces_.size(); ++f)
    for (const auto& e : faces_[f])
      left_face_[static_cast<std::size_t>(e.from)][static_cast<std::size_t>(position_in(graph_.neighbors(e.from), e.to))] =
          static_cast<int>(f);

  dual_.resize(faces_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    auto& nbrs = dual_[f];
    for (const auto& e : faces_[f]) {
      const int other = left_face(e.to, e.from);
      if (other != static_cast<int>(f)) nbrs.push_back(other);
    }
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }

  if (!graph_.adjacent(infinite_face_edge.from, infinite_face_edge.to))
    throw std::invalid_argument("planar map: infinite_face_edge is not an edge");
  infinite_face_ = left_face(infinite_face_edge.from, infinite_face_edge.to);
}

PlanarMap PlanarMap::grid(int width, int height, double kappa_const) {
  WeightedGraph g = WeightedGraph::grid(width, height, kappa_const);
  RotationSystem rotation(static_cast<std::size_t>(width * height));
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      auto& rot = rotation[static_cast<std::size_t>(x + width * y)];
      if (x + 1 < width) rot.push_back(x + 1 + width * y);   // east
      if (y + 1 < height) rot.push_back(x + width * (y + 1));  // north
      if (x > 0) rot.push_back(x - 1 + width * y);            // west
      if (y > 0) rot.push_back(x + width * (y - 1));          // south
    }
  // Walking west along the bottom row, or north along the left column, keeps
  // the outside on the left.
  const DirectedEdge outer = width >= 2 ? DirectedEdge{1, 0} : DirectedEdge{0, width};
  PlanarMap map(std::move(g), std::move(rotation), outer);
  map.grid_width_ = width;
  return map;
}

PlanarMap PlanarMap::window(int n, double kappa_const) {
  if (n < 1) throw std::invalid_argument("window: n must be >= 1");
  return grid(2 * n + 1, 2 * n + 1, kappa_const);
}

int PlanarMap::left_face(int u, int v) const {
  const int slot = position_in(graph_.neighbors(u), v);
  if (slot < 0)
    throw std::invalid_argument("planar map: " + std::to_string(u) + "->" + std::to_string(v) + " is not an edge");
  return left_face_[static_cast<std::size_t>(u)][static_cast<std::size_t>(slot)];
}

std::vector<int> PlanarMap::finite_faces() const {
  std::vector<int> out;
  for (int f = 0; f < face_count(); ++f)
    if (f != infinite_face_) out.push_back(f);
  return out;
}

int PlanarMap::grid_face(int x, int y) const {
  if (grid_width_ == 0) throw std::logic_error("grid_face: map was not built as a grid");
  const int height = graph_.vertex_count() / grid_width_;
  if (x < 0 || y < 0 || x + 1 >= grid_width_ || y + 1 >= height)
    throw std::out_of_range("grid_face: no square with that corner");
  return left_face(x + grid_width_ * y, x + 1 + grid_width_ * y);
}

int Cut::crossing(int a, int b) const {
  int total = 0;
  for (const auto& e : edges) {
    if (e.from == a && e.to == b) ++total;
    if (e.from == b && e.to == a) --total;
  }
  return total;
}

namespace {

std::vector<DirectedEdge> shared_edges(const PlanarMap& map, int f, int next) {
  std::vector<DirectedEdge> out;
  for (const auto& e : map.face_boundary(f))
    if (map.left_face(e.to, e.from) == next) out.push_back(e);
  return out;
}

Cut cut_from_path(const PlanarMap& map, std::vector<int> path, Rng* rng) {
  Cut cut;
  cut.face = path.front();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto candidates = shared_edges(map, path[i], path[i + 1]);
    if (candidates.empty())
      throw std::invalid_argument("cut: faces " + std::to_string(path[i]) + " and " +
                                  std::to_string(path[i + 1]) + " are not adjacent");
    cut.edges.push_back(rng ? candidates[rng->below(candidates.size())] : candidates.front());
  }
  cut.dual_path = std::move(path);
  return cut;
}

void check_face(const PlanarMap& map, int face) {
  if (face < 0 || face >= map.face_count()) throw std::invalid_argument("cut: face index out of range");
  if (face == map.infinite_face()) throw std::invalid_argument("cut: the infinite face has no cut");
}

}  // namespace

Cut build_cut(const PlanarMap& map, int face, const std::optional<std::vector<int>>& dual_path_hint) {
  check_face(map, face);
  if (dual_path_hint) {
    const auto& path = *dual_path_hint;
    if (path.size() < 2 || path.front() != face || path.back() != map.infinite_face())
      throw std::invalid_argument("cut: dual path must run from the face to the infinite face");
    std::vector<int> sorted = path;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("cut: dual path repeats a face");
    return cut_from_path(map, path, nullptr);
  }

  std::vector<int> parent(static_cast<std::size_t>(map.face_count()), -1);
  std::queue<int> frontier;
  frontier.push(face);
  parent[static_cast<std::size_t>(face)] = face;
  while (!frontier.empty()) {
    const int f = frontier.front();
    frontier.pop();
    if (f == map.infinite_face()) break;
    for (int g : map.dual_neighbors(f))
      if (parent[static_cast<std::size_t>(g)] < 0) {
        parent[static_cast<std::size_t>(g)] = f;
        frontier.push(g);
      }
  }
  std::vector<int> path;
  for (int f = map.infinite_face(); f != face; f = parent[static_cast<std::size_t>(f)]) path.push_back(f);
  path.push_back(face);
  std::reverse(path.begin(), path.end());
  return cut_from_path(map, std::move(path), nullptr);
}

Cut random_cut(const PlanarMap& map, int face, Rng& rng) {
  check_face(map, face);
  std::vector<bool> visited(static_cast<std::size_t>(map.face_count()), false);
  std::vector<int> path{face};
  visited[static_cast<std::size_t>(face)] = true;
  // Randomized depth-first search; the dual graph is connected, so it always
  // reaches the infinite face along a simple path.
  auto search = [&](auto&& self, int f) -> bool {
    if (f == map.infinite_face()) return true;
    std::vector<int> order(map.dual_neighbors(f).begin(), map.dual_neighbors(f).end());
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (int g : order) {
      if (visited[static_cast<std::size_t>(g)]) continue;
      visited[static_cast<std::size_t>(g)] = true;
      path.push_back(g);
      if (self(self, g)) return true;
      path.pop_back();
    }
    return false;
  };
  if (!search(search, face)) throw std::logic_error("random_cut: dual graph is disconnected");
  return cut_from_path(map, std::move(path), &rng);
}

int winding_number(std::span<const int> loop, const Cut& cut) {
  int total = 0;
  const std::size_t k = loop.size();
  for (std::size_t i = 0; i < k; ++i) total += cut.crossing(loop[i], loop[(i + 1) % k]);
  return total;
}

OneForm cut_one_form(const PlanarMap& map, const Cut& cut, double t) {
  OneForm form(map.graph());
  for (const auto& e : cut.edges) form.add(e.from, e.to, t);
  return form;
}

}  // namespace loopsoup
