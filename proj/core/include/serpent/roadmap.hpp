#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "serpent/environment.hpp"
#include "serpent/se2.hpp"

namespace serpent {

struct VoronoiVertex {
  int id = 0;
  Point position = Point::Zero();
  /// Peg indices equidistant from position (two for boundary and split vertices).
  std::vector<int> sites;
  /// Created where an edge leaves the bounds.
  bool boundary = false;
};

struct VoronoiEdge {
  int id = 0;
  std::array<int, 2> endpoints{};
  /// The two pegs this edge bisects.
  std::array<int, 2> sites{};
  std::vector<Point> polyline;

  double length() const;
};

struct Neighbor {
  int vertex;
  int edge;
  bool operator==(const Neighbor&) const = default;
};

struct Snap {
  int edge = -1;
  Point point = Point::Zero();
  double distance = 0.0;
};

/// Voronoi diagram of the peg centers clipped to the environment bounds.
class Roadmap {
 public:
  Roadmap() = default;
  Roadmap(std::vector<VoronoiVertex> vertices, std::vector<VoronoiEdge> edges);

  const std::vector<VoronoiVertex>& vertices() const { return vertices_; }
  const std::vector<VoronoiEdge>& edges() const { return edges_; }
  const VoronoiVertex& vertex(int id) const;
  const VoronoiEdge& edge(int id) const;
  bool empty() const { return edges_.empty(); }

  /// Incident (vertex, edge) pairs in ascending vertex id order.
  std::vector<Neighbor> neighbors(int vertex) const;

  /// Incident pairs ordered by straight-line distance from the neighbor to
  /// `goal`, vertex id breaking ties.
  std::vector<Neighbor> neighbors(int vertex, const Point& goal) const;

  /// Edge joining a and b, or -1.
  int edge_between(int a, int b) const;

  /// Globally nearest roadmap point; ties go to the lowest edge id.
  Snap snap(const Point& p) const;

  /// Inserts a vertex at `point` on edge `edge_id`, splitting it in two. Returns
  /// the existing endpoint instead when the point coincides with one.
  int split_edge(int edge_id, const Point& point);

 private:
  void rebuild_adjacency();

  std::vector<VoronoiVertex> vertices_;
  std::vector<VoronoiEdge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Throws GraphError for fewer than two distinct pegs.
Roadmap build_roadmap(const Environment& env);

/// Free-function form of Roadmap::snap.
Snap snap_to_roadmap(const Roadmap& roadmap, const Point& p);

std::string save_roadmap(const Roadmap& roadmap, const std::string& units);
Roadmap load_roadmap(const std::string& text);

/// Checks a roadmap against brute-force nearest-site sampling. Returns an empty
/// string when every check passes, otherwise a description of the first failure.
std::string verify_roadmap(const Roadmap& roadmap, const Environment& env, int samples_per_edge = 50,
                           double rel_tol = 1e-6);

}  // namespace serpent
