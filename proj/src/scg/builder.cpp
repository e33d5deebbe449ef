#include "ssnav/scg/builder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ssnav {

namespace {

// All voxels the segment passes through are Free and inside the grid.
bool segmentFree(const VoxelGrid& grid, const Vec3& a, const Vec3& b) {
  bool ok = true;
  grid.traverseFast(a, b, [&](const Vec3i& idx) {
    if (grid.at(idx) != VoxelState::Free) ok = false;
  });
  if (!grid.inBounds(a) || !grid.inBounds(b)) return false;
  return ok;
}

// No occupied voxel center within radius of p.
bool clearOfOccupied(const VoxelGrid& grid, const Vec3& p, double radius) {
  const double res = grid.resolution();
  const int span = static_cast<int>(std::ceil(radius / res)) + 1;
  const Vec3i c = grid.worldToIndex(p);
  for (int dz = -span; dz <= span; ++dz)
    for (int dy = -span; dy <= span; ++dy)
      for (int dx = -span; dx <= span; ++dx) {
        Vec3i idx = c + Vec3i(dx, dy, dz);
        if (grid.at(idx) != VoxelState::Occupied) continue;
        if ((grid.indexToCenter(idx) - p).norm() <= radius) return false;
      }
  return true;
}

double faceArea(const Polyhedron& p, int f) {
  const auto& tri = p.faces[static_cast<size_t>(f)];
  const Vec3& a = p.vertices[static_cast<size_t>(tri[0])].position;
  const Vec3& b = p.vertices[static_cast<size_t>(tri[1])].position;
  const Vec3& c = p.vertices[static_cast<size_t>(tri[2])].position;
  return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 faceCentroid(const Polyhedron& p, int f) {
  const auto& tri = p.faces[static_cast<size_t>(f)];
  return (p.vertices[static_cast<size_t>(tri[0])].position +
          p.vertices[static_cast<size_t>(tri[1])].position +
          p.vertices[static_cast<size_t>(tri[2])].position) /
         3.0;
}

}  // namespace

std::vector<Vec3> fibonacciDirections(int n) {
  if (n < 4)
    throw std::invalid_argument("fibonacciDirections: need at least 4 directions, got " +
                                std::to_string(n));
  std::vector<Vec3> dirs;
  dirs.reserve(static_cast<size_t>(n));
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * i;
    dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return dirs;
}

std::optional<Polyhedron> expandPolyhedron(const VoxelGrid& grid, const Vec3& seed,
                                           const ScgConfig& cfg) {
  if (grid.at(seed) != VoxelState::Free) {
    std::ostringstream os;
    os << "expandPolyhedron: seed voxel not free at (" << seed.x() << ", " << seed.y() << ", "
       << seed.z() << ")";
    throw std::invalid_argument(os.str());
  }

  Polyhedron p;
  p.seed = seed;
  const auto dirs = fibonacciDirections(cfg.n_directions);
  p.vertices.reserve(dirs.size());
  for (const auto& d : dirs) {
    auto rr = grid.castRayFast(seed, d, cfg.r_max,
                                [](VoxelState s) { return s != VoxelState::Free; });
    if (rr.outcome == VoxelGrid::RayOutcome::MaxRange) {
      p.vertices.push_back({seed + d * cfg.r_max, VertexKind::Free});
    } else {
      // Occupied/unknown hit or window edge: boundary of known free space.
      p.vertices.push_back({rr.point, VertexKind::Contact});
    }
  }

  auto hull = ConvexHull::build(p.vertexPositions(), cfg.jitter_seed);
  if (!hull) return std::nullopt;
  p.faces.reserve(hull->faces().size());
  p.planes = hull->faces();
  for (const auto& f : hull->faces()) p.faces.push_back(f.v);

  Vec3 sum = Vec3::Zero();
  for (const auto& v : p.vertices) sum += v.position;
  p.centroid = sum / static_cast<double>(p.vertices.size());
  p.bounding_radius = 0.0;
  for (const auto& v : p.vertices)
    p.bounding_radius = std::max(p.bounding_radius, (v.position - p.centroid).norm());
  return p;
}

std::vector<BoundaryCluster> extractBoundaryClusters(const Polyhedron& p, int max_faces,
                                                     double theta_split_rad) {
  const int nf = static_cast<int>(p.faces.size());
  std::vector<char> candidate(static_cast<size_t>(nf), 0);
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k)
      if (p.vertices[static_cast<size_t>(p.faces[static_cast<size_t>(f)][k])].kind ==
          VertexKind::Free)
        candidate[static_cast<size_t>(f)] = 1;

  // Face adjacency over shared (undirected) edges.
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) {
      int a = p.faces[static_cast<size_t>(f)][k];
      int b = p.faces[static_cast<size_t>(f)][(k + 1) % 3];
      edge_faces[{std::min(a, b), std::max(a, b)}].push_back(f);
    }
  std::vector<std::set<int>> adj(static_cast<size_t>(nf));
  for (const auto& [edge, fs] : edge_faces)
    for (size_t i = 0; i < fs.size(); ++i)
      for (size_t j = i + 1; j < fs.size(); ++j) {
        adj[static_cast<size_t>(fs[i])].insert(fs[j]);
        adj[static_cast<size_t>(fs[j])].insert(fs[i]);
      }

  const double cos_split = std::cos(theta_split_rad);
  std::vector<char> used(static_cast<size_t>(nf), 0);
  std::vector<BoundaryCluster> clusters;
  for (int f0 = 0; f0 < nf; ++f0) {
    if (!candidate[static_cast<size_t>(f0)] || used[static_cast<size_t>(f0)]) continue;
    std::vector<int> members{f0};
    used[static_cast<size_t>(f0)] = 1;
    std::queue<int> bfs;
    bfs.push(f0);
    while (!bfs.empty() && static_cast<int>(members.size()) < max_faces) {
      int f = bfs.front();
      bfs.pop();
      for (int g : adj[static_cast<size_t>(f)]) {
        if (static_cast<int>(members.size()) >= max_faces) break;
        if (!candidate[static_cast<size_t>(g)] || used[static_cast<size_t>(g)]) continue;
        bool compatible = true;
        for (int m : members)
          if (p.planes[static_cast<size_t>(m)].normal.dot(p.planes[static_cast<size_t>(g)].normal) <
              cos_split) {
            compatible = false;
            break;
          }
        if (!compatible) continue;
        used[static_cast<size_t>(g)] = 1;
        members.push_back(g);
        bfs.push(g);
      }
    }

    BoundaryCluster c;
    c.face_indices = members;
    std::sort(c.face_indices.begin(), c.face_indices.end());
    double total_area = 0.0;
    Vec3 normal_sum = Vec3::Zero();
    Vec3 centroid_sum = Vec3::Zero();
    for (int m : c.face_indices) {
      double w = faceArea(p, m);
      total_area += w;
      normal_sum += w * p.planes[static_cast<size_t>(m)].normal;
      centroid_sum += w * faceCentroid(p, m);
    }
    if (total_area <= 1e-12 || normal_sum.norm() <= 1e-12) continue;  // sliver cluster
    c.representative_normal = normal_sum.normalized();
    c.nexus = centroid_sum / total_area;
    clusters.push_back(std::move(c));
  }
  return clusters;
}

std::optional<Vec3> findNewExpandSeed(const BoundaryCluster& cluster, const VoxelGrid& grid,
                                      const ScgConfig& cfg) {
  const Vec3& n = cluster.representative_normal;
  const double step = grid.resolution() * 0.5;

  // Farthest extension whose whole approach from the nexus stays free.
  double t_free = 0.0;
  for (double t = step; t <= cfg.d_max + 1e-9; t += step) {
    if (!segmentFree(grid, cluster.nexus, cluster.nexus + n * t)) break;
    t_free = t;
  }
  if (t_free < cfg.t_min) return std::nullopt;

  for (double t = t_free; t >= cfg.t_min - 1e-9; t -= step) {
    Vec3 candidate = cluster.nexus + n * t;
    if (clearOfOccupied(grid, candidate, cfg.r_safe)) return candidate;
  }
  return std::nullopt;
}

std::vector<ScgEdge> updateTopology(const SpatialConnectivityGraph& scg, const Polyhedron& p_new,
                                    int parent, const VoxelGrid& grid, const ScgConfig& cfg) {
  std::vector<ScgEdge> edges;
  std::set<int> linked;
  const auto verts_new = p_new.vertexPositions();

  if (parent >= 0) {
    bool overlap =
        convexSetsIntersect(scg.node(parent).vertexPositions(), verts_new);
    edges.push_back({parent, p_new.id, EdgeKind::Parent, overlap ? 1.0 : cfg.eps_forced});
    linked.insert(parent);
  }

  for (int j = 0; j < static_cast<int>(scg.size()); ++j) {
    if (j == p_new.id || linked.count(j)) continue;
    const Polyhedron& other = scg.node(j);
    double center_gap = (other.centroid - p_new.centroid).norm();
    if (center_gap > other.bounding_radius + p_new.bounding_radius) continue;
    if (convexSetsIntersect(other.vertexPositions(), verts_new)) {
      edges.push_back({j, p_new.id, EdgeKind::Collision, 1.0});
      linked.insert(j);
    }
  }

  for (int j = 0; j < static_cast<int>(scg.size()); ++j) {
    if (j == p_new.id || linked.count(j)) continue;
    const Polyhedron& other = scg.node(j);
    if ((other.centroid - p_new.centroid).norm() > cfg.r_vis) continue;
    if (segmentFree(grid, other.centroid, p_new.centroid)) {
      edges.push_back({j, p_new.id, EdgeKind::Visibility, 1.0});
      linked.insert(j);
    }
  }
  return edges;
}

size_t ScgBuilder::pendingClusterCount() const {
  size_t n = 0;
  for (const auto& c : clusters_)
    if (c.status == ClusterStatus::Pending) ++n;
  return n;
}

bool ScgBuilder::seedEnclosed(const Vec3& seed) const {
  for (const auto& node : scg_.nodes()) {
    if ((seed - node.centroid).norm() > node.bounding_radius) continue;
    if (node.contains(seed)) return true;
  }
  return false;
}

int ScgBuilder::addNode(Polyhedron p, int parent, const VoxelGrid& grid) {
  p.id = static_cast<int>(scg_.size());
  auto edges = updateTopology(scg_, p, parent, grid, cfg_);
  int id = scg_.addNode(std::move(p));
  for (const auto& e : edges) scg_.addEdge(e);

  const double theta = cfg_.theta_split_deg * M_PI / 180.0;
  for (auto& cluster : extractBoundaryClusters(scg_.node(id), cfg_.max_cluster_faces, theta)) {
    clusters_.push_back({std::move(cluster), id, ClusterStatus::Pending});
    queue_.push_back(clusters_.size() - 1);
  }
  return id;
}

std::vector<int> ScgBuilder::update(const VoxelGrid& grid, const Vec3& position) {
  std::vector<int> new_ids;

  // Keep the graph anchored to the traversed path: seed straight at the
  // current position whenever no existing cell covers it.
  if (grid.at(position) == VoxelState::Free && !seedEnclosed(position)) {
    int parent = scg_.locate(position);  // -1 on the first node
    if (auto p = expandPolyhedron(grid, position, cfg_)) {
      new_ids.push_back(addNode(std::move(*p), parent, grid));
    }
  }

  // Drain the pending queue; clusters that spawn nodes enqueue the children's
  // clusters, so one cycle tiles everything reachable through known space.
  constexpr size_t kMaxNodesPerUpdate = 100000;
  std::vector<size_t> retry;
  while (!queue_.empty() && new_ids.size() < kMaxNodesPerUpdate) {
    size_t ci = queue_.front();
    queue_.pop_front();
    TrackedCluster& tc = clusters_[ci];
    if (tc.status != ClusterStatus::Pending) continue;

    // One ray tells whether anything along the axis changed since the last
    // full evaluation; stuck clusters then cost ~nothing per cycle.
    auto axis = grid.castRayFast(tc.cluster.nexus, tc.cluster.representative_normal,
                                 cfg_.d_max,
                                 [](VoxelState s) { return s != VoxelState::Free; });
    int axis_state = axis.outcome == VoxelGrid::RayOutcome::Hit
                         ? static_cast<int>(grid.at(axis.voxel))
                         : -1;
    if (tc.probe_valid && std::abs(axis.t - tc.probe_t) < 1e-9 && axis_state == tc.probe_state) {
      retry.push_back(ci);
      continue;
    }

    auto seed = findNewExpandSeed(tc.cluster, grid, cfg_);
    tc.probe_valid = true;
    tc.probe_t = axis.t;
    tc.probe_state = axis_state;
    if (!seed) {
      // A wall right behind the opening can never clear; unknown space might.
      auto probe = grid.castRay(tc.cluster.nexus, tc.cluster.representative_normal, cfg_.t_min,
                                blocksOccupied);
      if (probe.outcome == VoxelGrid::RayOutcome::Hit)
        tc.status = ClusterStatus::Enclosed;
      else
        retry.push_back(ci);
      continue;
    }
    if (seedEnclosed(*seed)) {
      tc.status = ClusterStatus::Enclosed;
      continue;
    }
    auto p = expandPolyhedron(grid, *seed, cfg_);
    if (!p) {
      tc.probe_valid = false;  // inconclusive; keep retrying at full strength
      retry.push_back(ci);
      continue;
    }
    tc.status = ClusterStatus::Spawned;
    int parent_id = tc.node_id;  // addNode may reallocate clusters_
    new_ids.push_back(addNode(std::move(*p), parent_id, grid));
  }
  for (size_t ci : retry) queue_.push_back(ci);
  return new_ids;
}

}  // namespace ssnav
