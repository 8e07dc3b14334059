#ifndef LOOPSOUP_PLANAR_HPP
#define LOOPSOUP_PLANAR_HPP

#include "loopsoup/graph.hpp"
#include "loopsoup/rng.hpp"

#include <optional>
#include <span>
#include <vector>

namespace loopsoup {

struct DirectedEdge {
  int from = 0;  // e^-
  int to = 0;    // e^+

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

/// Neighbors of each vertex in counterclockwise order.
using RotationSystem = std::vector<std::vector<int>>;

/// Face boundaries as orbits of the face permutation
///   (u -> v)  |->  (v -> w),  w the neighbor preceding u in v's rotation,
/// which walks each face with the face on its left. Throws
/// std::invalid_argument when the rotation does not list exactly the graph
/// neighbors or when the orbits violate Euler's formula.
std::vector<std::vector<DirectedEdge>> extract_faces(const WeightedGraph& g, const RotationSystem& rotation);

/// Connected plane graph: a graph, a rotation system, its faces and a
/// designated infinite face.
class PlanarMap {
 public:
  /// The infinite face is the face lying to the left of the directed edge
  /// infinite_face_edge.
  PlanarMap(WeightedGraph graph, RotationSystem rotation, DirectedEdge infinite_face_edge);

  /// width x height grid (vertex x + width * y) with its straight-line
  /// embedding; the outer face is marked as infinite.
  static PlanarMap grid(int width, int height, double kappa_const);
  /// The window [-n, n]^2 of Z^2, same vertex numbering as grid_window.
  static PlanarMap window(int n, double kappa_const);

  const WeightedGraph& graph() const { return graph_; }
  const TransitionMatrix& transition() const { return transition_; }
  const RotationSystem& rotation() const { return rotation_; }

  int face_count() const { return static_cast<int>(faces_.size()); }
  int infinite_face() const { return infinite_face_; }
  std::span<const DirectedEdge> face_boundary(int f) const { return faces_.at(static_cast<std::size_t>(f)); }
  /// Face to the left of u -> v.
  int left_face(int u, int v) const;
  /// Faces sharing at least one edge with f, ascending and without f itself.
  std::span<const int> dual_neighbors(int f) const { return dual_.at(static_cast<std::size_t>(f)); }
  /// Finite faces in ascending order.
  std::vector<int> finite_faces() const;

  /// For grids: the square face whose lower-left corner is vertex (x, y).
  int grid_face(int x, int y) const;

 private:
  WeightedGraph graph_;
  TransitionMatrix transition_;
  RotationSystem rotation_;
  std::vector<std::vector<DirectedEdge>> faces_;
  std::vector<std::vector<int>> left_face_;  // per vertex, aligned with graph neighbors
  std::vector<std::vector<int>> dual_;
  int infinite_face_ = -1;
  int grid_width_ = 0;
};

/// Oriented edges crossed by a dual path from a face to the infinite face.
/// Edge i separates path faces i and i+1, is oriented to cross the path from
/// right to left, and so has path face i on its left.
struct Cut {
  int face = -1;
  std::vector<int> dual_path;
  std::vector<DirectedEdge> edges;

  /// +1 for a step along a cut edge, -1 against it, 0 otherwise.
  int crossing(int a, int b) const;
};

/// Cut for a finite face. Without a hint the dual path is a breadth-first
/// shortest path with ties broken by face index. A hint is a dual path
/// f = f_0, ..., f_n = infinite face of distinct adjacent faces.
Cut build_cut(const PlanarMap& map, int face, const std::optional<std::vector<int>>& dual_path_hint = std::nullopt);

/// Cut along a random simple dual path (randomized depth-first search).
Cut random_cut(const PlanarMap& map, int face, Rng& rng);

/// Signed number of crossings of the cut by the closed walk.
int winding_number(std::span<const int> loop, const Cut& cut);

/// t * (indicator one-form of the cut): +t on cut edges, -t on reversals.
OneForm cut_one_form(const PlanarMap& map, const Cut& cut, double t = 1.0);

}  // namespace loopsoup

#endif  // LOOPSOUP_PLANAR_HPP
