#include "ssnav/scg/polyhedron.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssnav {

int SpatialConnectivityGraph::addNode(Polyhedron p) {
  p.id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(p));
  adjacency_.emplace_back();
  return nodes_.back().id;
}

void SpatialConnectivityGraph::addEdge(const ScgEdge& e) {
  if (e.a == e.b) throw std::invalid_argument("scg edge endpoints must differ");
  if (e.a < 0 || e.b < 0 || e.a >= static_cast<int>(nodes_.size()) ||
      e.b >= static_cast<int>(nodes_.size()))
    throw std::invalid_argument("scg edge references missing node");
  if (hasEdge(e.a, e.b)) return;
  edges_.push_back(e);
  adjacency_[static_cast<size_t>(e.a)].push_back(e.b);
  adjacency_[static_cast<size_t>(e.b)].push_back(e.a);
}

bool SpatialConnectivityGraph::hasEdge(int a, int b) const {
  const auto& adj = adjacency_.at(static_cast<size_t>(a));
  return std::find(adj.begin(), adj.end(), b) != adj.end();
}

int SpatialConnectivityGraph::locate(const Vec3& p) const {
  if (nodes_.empty()) return -1;
  for (const auto& n : nodes_) {
    if ((p - n.centroid).norm() > n.bounding_radius + 1e-9) continue;
    if (n.contains(p, 1e-9)) return n.id;
  }
  int best = 0;
  double best_d = (p - nodes_[0].centroid).squaredNorm();
  for (const auto& n : nodes_) {
    double d = (p - n.centroid).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = n.id;
    }
  }
  return best;
}

}  // namespace ssnav
