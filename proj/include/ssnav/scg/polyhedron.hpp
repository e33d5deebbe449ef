#pragma once

#include "ssnav/core/geometry.hpp"
#include "ssnav/scg/quickhull.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace ssnav {

enum class VertexKind : uint8_t { Contact, Free };

struct PolyVertex {
  Vec3 position;
  VertexKind kind;
};

// Convex free-space cell grown from a seed point. Vertices keep the full set
// of ray endpoints (all on or inside the hull); faces index into them.
struct Polyhedron {
  int id = -1;
  Vec3 seed;
  std::vector<PolyVertex> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<HullFace> planes;  // cached oriented face planes
  Vec3 centroid;
  int region_id = 0;  // 0 = not yet partitioned
  double bounding_radius = 0.0;

  double signedDistance(const Vec3& p) const {
    double best = -1e300;
    for (const auto& f : planes) best = std::max(best, f.normal.dot(p) - f.offset);
    return best;
  }
  bool contains(const Vec3& p, double tol = 1e-9) const { return signedDistance(p) <= tol; }

  std::vector<Vec3> vertexPositions() const {
    std::vector<Vec3> out;
    out.reserve(vertices.size());
    for (const auto& v : vertices) out.push_back(v.position);
    return out;
  }
};

enum class EdgeKind : uint8_t { Parent, Collision, Visibility };

struct ScgEdge {
  int a = -1;
  int b = -1;
  EdgeKind kind = EdgeKind::Parent;
  double weight = 1.0;
};

// Global topological map: polyhedral nodes plus typed undirected edges.
class SpatialConnectivityGraph {
 public:
  int addNode(Polyhedron p);
  void addEdge(const ScgEdge& e);

  const std::vector<Polyhedron>& nodes() const { return nodes_; }
  std::vector<Polyhedron>& nodes() { return nodes_; }
  const Polyhedron& node(int id) const { return nodes_.at(static_cast<size_t>(id)); }
  Polyhedron& node(int id) { return nodes_.at(static_cast<size_t>(id)); }
  const std::vector<ScgEdge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int id) const { return adjacency_.at(static_cast<size_t>(id)); }
  bool hasEdge(int a, int b) const;
  size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  // Smallest-id node containing p; nearest centroid when no hull contains it.
  // Returns -1 on an empty graph.
  int locate(const Vec3& p) const;

 private:
  std::vector<Polyhedron> nodes_;
  std::vector<ScgEdge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

}  // namespace ssnav
