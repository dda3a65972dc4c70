#include "serpent/roadmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "serpent/errors.hpp"
#include "serpent/json_fields.hpp"
#include "serpent/predicates.hpp"

namespace serpent {

namespace {

constexpr int kGhost = -1;

struct Triangle {
  std::array<int, 3> v;
  bool alive = true;
  bool ghost() const { return v[2] == kGhost; }
};

struct LexLess {
  bool operator()(const Point& a, const Point& b) const {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  }
};

// Bowyer-Watson over distinct points. The hull is closed by ghost triangles
// (a, b, ghost) that sit on the left of a->b, so points outside the current
// hull need no super-triangle.
class Delaunay {
 public:
  explicit Delaunay(const std::vector<Point>& pts) : pts_(pts) {}

  /// False when every point is collinear.
  bool triangulate() {
    const int n = static_cast<int>(pts_.size());
    int third = -1;
    for (int k = 2; k < n; ++k) {
      if (predicates::orient2d(pts_[0], pts_[1], pts_[k]) != 0) {
        third = k;
        break;
      }
    }
    if (third < 0) return false;

    std::array<int, 3> first{0, 1, third};
    if (predicates::orient2d(pts_[0], pts_[1], pts_[third]) < 0) std::swap(first[1], first[2]);
    tris_.push_back({first});
    for (int k = 0; k < 3; ++k) tris_.push_back({{first[(k + 1) % 3], first[k], kGhost}});

    for (int p = 2; p < n; ++p) {
      if (p != third) insert(p);
    }
    return true;
  }

  const std::vector<Triangle>& triangles() const { return tris_; }

 private:
  bool strictly_between(int a, int b, int p) const {
    const Point &pa = pts_[a], &pb = pts_[b], &pp = pts_[p];
    if (pa.x() != pb.x()) return (pp.x() > std::min(pa.x(), pb.x())) && (pp.x() < std::max(pa.x(), pb.x()));
    return (pp.y() > std::min(pa.y(), pb.y())) && (pp.y() < std::max(pa.y(), pb.y()));
  }

  bool conflicts(const Triangle& t, int p) const {
    if (t.ghost()) {
      const int o = predicates::orient2d(pts_[t.v[0]], pts_[t.v[1]], pts_[p]);
      return o > 0 || (o == 0 && strictly_between(t.v[0], t.v[1], p));
    }
    return predicates::incircle(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], pts_[p]) > 0;
  }

  void insert(int p) {
    std::vector<std::size_t> cavity;
    std::set<std::pair<int, int>> directed;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (tris_[t].alive && conflicts(tris_[t], p)) {
        cavity.push_back(t);
        for (int k = 0; k < 3; ++k) directed.insert({tris_[t].v[k], tris_[t].v[(k + 1) % 3]});
      }
    }
    std::vector<std::pair<int, int>> rim;
    for (std::size_t t : cavity) {
      tris_[t].alive = false;
      for (int k = 0; k < 3; ++k) {
        const int a = tris_[t].v[k], b = tris_[t].v[(k + 1) % 3];
        if (!directed.contains({b, a})) rim.emplace_back(a, b);
      }
    }
    for (const auto& [a, b] : rim) {
      if (a == kGhost) {
        tris_.push_back({{b, p, kGhost}});
      } else if (b == kGhost) {
        tris_.push_back({{p, a, kGhost}});
      } else {
        tris_.push_back({{a, b, p}});
      }
    }
  }

  const std::vector<Point>& pts_;
  std::vector<Triangle> tris_;
};

Point circumcenter(const Point& a, const Point& b, const Point& c) {
  const Point ba = b - a, ca = c - a;
  const double d = 2.0 * (ba.x() * ca.y() - ba.y() * ca.x());
  const double b2 = ba.squaredNorm(), c2 = ca.squaredNorm();
  return a + Point((ca.y() * b2 - ba.y() * c2) / d, (ba.x() * c2 - ca.x() * b2) / d);
}

// Liang-Barsky: the sub-interval of t in [0, t_max] keeping origin + t*dir inside bounds.
bool clip(const Bounds& bounds, const Point& origin, const Point& dir, double t_max, double& t0, double& t1) {
  t0 = 0.0;
  t1 = t_max;
  const double p[4] = {-dir.x(), dir.x(), -dir.y(), dir.y()};
  const double q[4] = {origin.x() - bounds.xmin, bounds.xmax - origin.x(), origin.y() - bounds.ymin,
                       bounds.ymax - origin.y()};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
      continue;
    }
    const double r = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
  }
  return t0 < t1;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

class RoadmapBuilder {
 public:
  RoadmapBuilder(const Bounds& bounds, std::vector<int> site_ids)
      : bounds_(bounds), site_ids_(std::move(site_ids)) {}

  int interior_vertex(const Point& p, std::vector<int> sites) {
    for (int& s : sites) s = site_ids_[s];
    std::sort(sites.begin(), sites.end());
    vertices_.push_back({static_cast<int>(vertices_.size()), p, std::move(sites), false});
    return vertices_.back().id;
  }

  int boundary_vertex(const Point& p, int a, int b) {
    std::vector<int> sites{site_ids_[a], site_ids_[b]};
    std::sort(sites.begin(), sites.end());
    vertices_.push_back({static_cast<int>(vertices_.size()), p, std::move(sites), true});
    return vertices_.back().id;
  }

  // Clips origin + t*dir, t in [0, t_max], and records the surviving piece.
  // start_vertex / end_vertex are used when the corresponding end survives unclipped.
  void add_edge(const Point& origin, const Point& dir, double t_max, int start_vertex, int end_vertex, int a,
                int b) {
    double t0, t1;
    if (!clip(bounds_, origin, dir, t_max, t0, t1)) return;
    const double scale = std::max(bounds_.width(), bounds_.height());
    if ((t1 - t0) * dir.norm() <= 1e-12 * scale) return;
    const int u = (t0 == 0.0 && start_vertex >= 0) ? start_vertex : boundary_vertex(origin + t0 * dir, a, b);
    const int v = (t1 == t_max && end_vertex >= 0) ? end_vertex : boundary_vertex(origin + t1 * dir, a, b);
    VoronoiEdge e;
    e.id = static_cast<int>(edges_.size());
    e.endpoints = {u, v};
    e.sites = {std::min(site_ids_[a], site_ids_[b]), std::max(site_ids_[a], site_ids_[b])};
    e.polyline = {vertices_[u].position, vertices_[v].position};
    edges_.push_back(std::move(e));
  }

  Roadmap finish() { return Roadmap(std::move(vertices_), std::move(edges_)); }

 private:
  Bounds bounds_;
  std::vector<int> site_ids_;
  std::vector<VoronoiVertex> vertices_;
  std::vector<VoronoiEdge> edges_;
};

Roadmap build_collinear(const std::vector<Point>& pts, const Bounds& bounds, RoadmapBuilder builder) {
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return LexLess{}(pts[a], pts[b]); });
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double reach = 2.0 * std::hypot(bounds.width(), bounds.height());
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const int a = order[k], b = order[k + 1];
    const Point mid = 0.5 * (pts[a] + pts[b]);
    const Point d = (pts[b] - pts[a]).normalized();
    const Point perp(-d.y(), d.x());
    // The whole bisector line, entered from beyond the bounds.
    builder.add_edge(mid - reach * perp, perp, kInf, -1, -1, a, b);
  }
  return builder.finish();
}

}  // namespace

double VoronoiEdge::length() const {
  double s = 0.0;
  for (std::size_t k = 1; k < polyline.size(); ++k) s += (polyline[k] - polyline[k - 1]).norm();
  return s;
}

Roadmap::Roadmap(std::vector<VoronoiVertex> vertices, std::vector<VoronoiEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  rebuild_adjacency();
}

void Roadmap::rebuild_adjacency() {
  adjacency_.assign(vertices_.size(), {});
  for (const VoronoiEdge& e : edges_) {
    adjacency_[e.endpoints[0]].push_back({e.endpoints[1], e.id});
    adjacency_[e.endpoints[1]].push_back({e.endpoints[0], e.id});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.vertex < b.vertex || (a.vertex == b.vertex && a.edge < b.edge);
    });
  }
}

const VoronoiVertex& Roadmap::vertex(int id) const {
  if (id < 0 || id >= static_cast<int>(vertices_.size())) {
    throw GraphError("unknown vertex id " + std::to_string(id));
  }
  return vertices_[id];
}

const VoronoiEdge& Roadmap::edge(int id) const {
  if (id < 0 || id >= static_cast<int>(edges_.size())) throw GraphError("unknown edge id " + std::to_string(id));
  return edges_[id];
}

std::vector<Neighbor> Roadmap::neighbors(int v) const {
  vertex(v);
  return adjacency_[v];
}

std::vector<Neighbor> Roadmap::neighbors(int v, const Point& goal) const {
  std::vector<Neighbor> out = neighbors(v);
  std::stable_sort(out.begin(), out.end(), [&](const Neighbor& a, const Neighbor& b) {
    const double da = (vertices_[a.vertex].position - goal).norm();
    const double db = (vertices_[b.vertex].position - goal).norm();
    return da < db || (da == db && a.vertex < b.vertex);
  });
  return out;
}

int Roadmap::edge_between(int a, int b) const {
  for (const Neighbor& n : neighbors(a)) {
    if (n.vertex == b) return n.edge;
  }
  return -1;
}

Snap Roadmap::snap(const Point& p) const {
  if (edges_.empty()) throw GraphError("snap on an empty roadmap");
  Snap best;
  best.distance = std::numeric_limits<double>::infinity();
  for (const VoronoiEdge& e : edges_) {
    for (std::size_t k = 1; k < e.polyline.size(); ++k) {
      const Point a = e.polyline[k - 1], d = e.polyline[k] - a;
      const double len2 = d.squaredNorm();
      const double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
      const Point q = a + t * d;
      const double dist = (q - p).norm();
      if (dist < best.distance) best = {e.id, q, dist};
    }
  }
  return best;
}

int Roadmap::split_edge(int edge_id, const Point& point) {
  const VoronoiEdge old = edge(edge_id);
  const Point pa = vertices_[old.endpoints[0]].position;
  const Point pb = vertices_[old.endpoints[1]].position;
  const double tol = 1e-12 * std::max(1.0, (pb - pa).norm());
  if ((point - pa).norm() <= tol) return old.endpoints[0];
  if ((point - pb).norm() <= tol) return old.endpoints[1];

  const int nv = static_cast<int>(vertices_.size());
  vertices_.push_back({nv, point, {old.sites[0], old.sites[1]}, false});
  VoronoiEdge& first = edges_[edge_id];
  first.endpoints = {old.endpoints[0], nv};
  first.polyline = {pa, point};
  VoronoiEdge second;
  second.id = static_cast<int>(edges_.size());
  second.endpoints = {nv, old.endpoints[1]};
  second.sites = old.sites;
  second.polyline = {point, pb};
  edges_.push_back(std::move(second));
  rebuild_adjacency();
  return nv;
}

Snap snap_to_roadmap(const Roadmap& roadmap, const Point& p) { return roadmap.snap(p); }

Roadmap build_roadmap(const Environment& env) {
  env.validate();
  // Coincident pegs collapse onto the lowest index.
  std::map<Point, int, LexLess> first_index;
  std::vector<Point> pts;
  std::vector<int> site_ids;
  for (std::size_t k = 0; k < env.pegs.size(); ++k) {
    const Point c = env.pegs[k].center();
    if (first_index.emplace(c, static_cast<int>(k)).second) {
      pts.push_back(c);
      site_ids.push_back(static_cast<int>(k));
    }
  }
  if (pts.size() < 2) throw GraphError("roadmap needs at least two distinct pegs");

  RoadmapBuilder builder(env.bounds, site_ids);
  Delaunay dt(pts);
  if (!dt.triangulate()) return build_collinear(pts, env.bounds, std::move(builder));

  const auto& tris = dt.triangles();
  std::map<std::pair<int, int>, std::size_t> owner;
  std::vector<std::size_t> alive;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    if (!tris[t].alive) continue;
    alive.push_back(t);
    for (int k = 0; k < 3; ++k) owner[{tris[t].v[k], tris[t].v[(k + 1) % 3]}] = t;
  }

  // Triangles whose shared edge is exactly cocircular dualize to one vertex.
  UnionFind groups(tris.size());
  for (std::size_t t : alive) {
    if (tris[t].ghost()) continue;
    for (int k = 0; k < 3; ++k) {
      const int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
      const std::size_t u = owner.at({b, a});
      if (tris[u].ghost() || u < t) continue;
      const int opposite = tris[u].v[0] + tris[u].v[1] + tris[u].v[2] - a - b;
      if (predicates::incircle(pts[tris[t].v[0]], pts[tris[t].v[1]], pts[tris[t].v[2]], pts[opposite]) == 0) {
        groups.unite(t, u);
      }
    }
  }

  std::map<std::size_t, std::set<int>> group_sites;
  for (std::size_t t : alive) {
    if (tris[t].ghost()) continue;
    auto& s = group_sites[groups.find(t)];
    s.insert(tris[t].v.begin(), tris[t].v.end());
  }
  std::map<std::size_t, Point> group_center;
  std::map<std::size_t, int> group_vertex;
  for (const auto& [rep, sites] : group_sites) {
    const auto& v = tris[rep].v;
    const Point c = circumcenter(pts[v[0]], pts[v[1]], pts[v[2]]);
    group_center[rep] = c;
    if (env.bounds.contains(c)) {
      group_vertex[rep] = builder.interior_vertex(c, std::vector<int>(sites.begin(), sites.end()));
    }
  }
  auto vertex_of = [&](std::size_t rep) {
    const auto it = group_vertex.find(rep);
    return it == group_vertex.end() ? -1 : it->second;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (std::size_t t : alive) {
    if (tris[t].ghost()) continue;
    const std::size_t gt = groups.find(t);
    for (int k = 0; k < 3; ++k) {
      const int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
      const std::size_t u = owner.at({b, a});
      if (tris[u].ghost()) {
        const Point d = pts[b] - pts[a];
        builder.add_edge(group_center[gt], Point(d.y(), -d.x()), kInf, vertex_of(gt), -1, a, b);
        continue;
      }
      const std::size_t gu = groups.find(u);
      if (u < t || gt == gu) continue;
      const Point from = group_center[gt];
      builder.add_edge(from, group_center[gu] - from, 1.0, vertex_of(gt), vertex_of(gu), a, b);
    }
  }
  return builder.finish();
}

std::string save_roadmap(const Roadmap& roadmap, const std::string& units) {
  Json doc;
  doc["units"] = units;
  doc["vertices"] = Json::array();
  for (const VoronoiVertex& v : roadmap.vertices()) {
    doc["vertices"].push_back({{"id", v.id},
                               {"x", v.position.x()},
                               {"y", v.position.y()},
                               {"sites", v.sites},
                               {"boundary", v.boundary}});
  }
  doc["edges"] = Json::array();
  for (const VoronoiEdge& e : roadmap.edges()) {
    Json poly = Json::array();
    for (const Point& p : e.polyline) poly.push_back({p.x(), p.y()});
    doc["edges"].push_back({{"id", e.id},
                            {"endpoints", {e.endpoints[0], e.endpoints[1]}},
                            {"sites", {e.sites[0], e.sites[1]}},
                            {"polyline", poly}});
  }
  return doc.dump(2) + "\n";
}

Roadmap load_roadmap(const std::string& text) {
  const Json doc = parse_json(text);
  ObjectReader root(doc, "");
  root.string_or("units", "in");
  std::vector<VoronoiVertex> vertices;
  std::vector<VoronoiEdge> edges;
  const Json& vs = root.at("vertices");
  if (!vs.is_array()) throw ParseError("vertices", "expected an array");
  for (std::size_t k = 0; k < vs.size(); ++k) {
    ObjectReader r(vs[k], "vertices[" + std::to_string(k) + "]");
    VoronoiVertex v;
    v.id = static_cast<int>(r.integer("id"));
    if (v.id != static_cast<int>(k)) throw ParseError(r.child_path("id"), "vertex ids must be 0..n-1 in order");
    v.position = {r.number("x"), r.number("y")};
    v.sites = r.at("sites").get<std::vector<int>>();
    v.boundary = r.boolean_or("boundary", false);
    r.finish();
    vertices.push_back(std::move(v));
  }
  const Json& es = root.at("edges");
  if (!es.is_array()) throw ParseError("edges", "expected an array");
  for (std::size_t k = 0; k < es.size(); ++k) {
    ObjectReader r(es[k], "edges[" + std::to_string(k) + "]");
    VoronoiEdge e;
    e.id = static_cast<int>(r.integer("id"));
    if (e.id != static_cast<int>(k)) throw ParseError(r.child_path("id"), "edge ids must be 0..n-1 in order");
    const auto ends = r.at("endpoints").get<std::vector<int>>();
    const auto sites = r.at("sites").get<std::vector<int>>();
    if (ends.size() != 2 || sites.size() != 2) throw ParseError(r.path(), "endpoints and sites need two entries");
    for (int id : ends) {
      if (id < 0 || id >= static_cast<int>(vertices.size())) throw ParseError(r.child_path("endpoints"), "unknown vertex");
    }
    e.endpoints = {ends[0], ends[1]};
    e.sites = {sites[0], sites[1]};
    for (const auto& p : r.at("polyline")) e.polyline.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    r.finish();
    edges.push_back(std::move(e));
  }
  root.finish();
  return Roadmap(std::move(vertices), std::move(edges));
}

std::string verify_roadmap(const Roadmap& roadmap, const Environment& env, int samples_per_edge, double rel_tol) {
  std::ostringstream msg;
  auto nearest_other = [&](const Point& p, int s0, int s1) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < env.pegs.size(); ++k) {
      const int ik = static_cast<int>(k);
      if (ik == s0 || ik == s1 || env.pegs[k].center() == env.pegs[s0].center() ||
          env.pegs[k].center() == env.pegs[s1].center()) {
        continue;
      }
      best = std::min(best, (env.pegs[k].center() - p).norm());
    }
    return best;
  };
  for (const VoronoiEdge& e : roadmap.edges()) {
    const Point a = e.polyline.front(), b = e.polyline.back();
    for (int k = 0; k < samples_per_edge; ++k) {
      const double t = (k + 1.0) / (samples_per_edge + 1.0);
      const Point p = a + t * (b - a);
      const double d0 = (env.pegs[e.sites[0]].center() - p).norm();
      const double d1 = (env.pegs[e.sites[1]].center() - p).norm();
      const double mean = 0.5 * (d0 + d1);
      if (std::abs(d0 - d1) > rel_tol * mean) {
        msg << "edge " << e.id << " sample " << k << " not equidistant (" << d0 << " vs " << d1 << ")";
        return msg.str();
      }
      if (nearest_other(p, e.sites[0], e.sites[1]) < mean * (1.0 - rel_tol)) {
        msg << "edge " << e.id << " sample " << k << " has a closer third site";
        return msg.str();
      }
    }
  }
  for (const VoronoiVertex& v : roadmap.vertices()) {
    if (v.sites.empty()) continue;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    for (int s : v.sites) {
      const double d = (env.pegs[s].center() - v.position).norm();
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      sum += d;
    }
    if (hi - lo > rel_tol * sum / static_cast<double>(v.sites.size())) {
      msg << "vertex " << v.id << " sites not equidistant";
      return msg.str();
    }
  }
  return {};
}

}  // namespace serpent
