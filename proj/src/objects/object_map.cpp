#include "ssnav/objects/object_map.hpp"

#include "ssnav/sim/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssnav {

namespace {

Vec3 cloudCentroid(const std::vector<Vec3>& cloud) {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : cloud) sum += p;
  return sum / static_cast<double>(cloud.size());
}

Box cloudBox(const std::vector<Vec3>& cloud) {
  Box b;
  for (const Vec3& p : cloud) b.extend(p);
  return b;
}

}  // namespace

std::vector<Vec3> backProject(const std::vector<double>& depth,
                              const std::vector<uint8_t>& mask, const CameraIntrinsics& K,
                              const Pose& pose) {
  size_t n = static_cast<size_t>(K.width) * static_cast<size_t>(K.height);
  if (K.width <= 0 || K.height <= 0 || K.fx <= 0.0 || K.fy <= 0.0)
    throw std::invalid_argument("backProject: bad intrinsics");
  if (depth.size() != n || mask.size() != n)
    throw std::invalid_argument("backProject: buffer size mismatch");

  // camera axes in the world: optical axis along the heading, y down
  Vec3 fwd = yawDirection(pose.yaw);
  Vec3 right(std::sin(pose.yaw), -std::cos(pose.yaw), 0.0);
  Vec3 down(0.0, 0.0, -1.0);

  std::vector<Vec3> out;
  for (int v = 0; v < K.height; ++v)
    for (int u = 0; u < K.width; ++u) {
      size_t i = static_cast<size_t>(v) * static_cast<size_t>(K.width) + static_cast<size_t>(u);
      if (!mask[i]) continue;
      double d = depth[i];
      if (!(d > 0.0)) throw std::invalid_argument("backProject: masked pixel without depth");
      double xc = (static_cast<double>(u) - K.cx) / K.fx * d;
      double yc = (static_cast<double>(v) - K.cy) / K.fy * d;
      out.push_back(pose.position + right * xc + down * yc + fwd * d);
    }
  if (out.empty()) throw std::invalid_argument("backProject: empty mask");
  return out;
}

double geoSimilarity(const std::vector<Vec3>& ci, const std::vector<Vec3>& cj, double tau) {
  if (ci.empty()) throw std::invalid_argument("geoSimilarity: empty query cloud");
  if (!(tau > 0.0)) throw std::invalid_argument("geoSimilarity: tau must be positive");
  if (cj.empty()) return 0.0;

  // hash cj on a tau-sized lattice; any neighbor within tau is at most one
  // cell away per axis, so the 27-cell probe is exact
  std::map<Vec3i, std::vector<int>, Vec3iLess> cells;
  auto cellOf = [tau](const Vec3& p) {
    return Vec3i(static_cast<int>(std::floor(p.x() / tau)),
                 static_cast<int>(std::floor(p.y() / tau)),
                 static_cast<int>(std::floor(p.z() / tau)));
  };
  for (int j = 0; j < static_cast<int>(cj.size()); ++j)
    cells[cellOf(cj[static_cast<size_t>(j)])].push_back(j);

  const double tau2 = tau * tau;
  int matched = 0;
  for (const Vec3& p : ci) {
    Vec3i c = cellOf(p);
    double best = std::numeric_limits<double>::infinity();
    for (int dx = -1; dx <= 1 && best > tau2; ++dx)
      for (int dy = -1; dy <= 1 && best > tau2; ++dy)
        for (int dz = -1; dz <= 1 && best > tau2; ++dz) {
          auto it = cells.find(c + Vec3i(dx, dy, dz));
          if (it == cells.end()) continue;
          for (int j : it->second)
            best = std::min(best, (p - cj[static_cast<size_t>(j)]).squaredNorm());
        }
    if (best <= tau2) ++matched;
  }
  return static_cast<double>(matched) / static_cast<double>(ci.size());
}

double semSimilarity(const Eigen::VectorXd& vi, const Eigen::VectorXd& vj) {
  double ni = vi.norm(), nj = vj.norm();
  if (ni <= 0.0 || nj <= 0.0) throw std::invalid_argument("semSimilarity: zero vector");
  return vi.dot(vj) / (ni * nj);
}

std::vector<Vec3> downsampleCloud(const std::vector<Vec3>& cloud, double leaf) {
  std::map<Vec3i, std::pair<Vec3, int>, Vec3iLess> cells;
  for (const Vec3& p : cloud) {
    Vec3i c(static_cast<int>(std::floor(p.x() / leaf)), static_cast<int>(std::floor(p.y() / leaf)),
            static_cast<int>(std::floor(p.z() / leaf)));
    // explicit zero init: a default-constructed Eigen vector is uninitialized
    auto [it, fresh] = cells.try_emplace(c, Vec3::Zero(), 0);
    (void)fresh;
    it->second.first += p;
    it->second.second += 1;
  }
  std::vector<Vec3> out;
  out.reserve(cells.size());
  for (const auto& [c, acc] : cells) out.push_back(acc.first / static_cast<double>(acc.second));
  return out;
}

const SemanticObject* ObjectMap::find(int id) const {
  auto it = index_of_.find(id);
  return it == index_of_.end() ? nullptr : &objects_[it->second];
}

Association ObjectMap::associate(const Detection& det) const {
  if (det.points_world.empty()) throw std::invalid_argument("associate: empty detection");
  Vec3 center = cloudCentroid(det.points_world);
  std::vector<int> candidates = index_.radiusQuery(center, cfg_.assoc_radius);
  Eigen::VectorXd emb = embedLabel(det.label);

  Association best;
  // semantic stage: strong embedding agreement plus weak geometric support
  for (int id : candidates) {
    const SemanticObject& obj = objects_[index_of_.at(id)];
    double sem = semSimilarity(emb, obj.embedding);
    if (sem <= cfg_.sem_match) continue;
    double geo = geoSimilarity(det.points_world, obj.cloud, cfg_.tau);
    if (geo <= cfg_.geo_weak) continue;
    if (best.kind != MatchKind::Semantic || sem > best.sem) {
      best = {MatchKind::Semantic, id, sem, geo,
              geoSimilarity(obj.cloud, det.points_world, cfg_.tau)};
    }
  }
  if (best.kind == MatchKind::Semantic) return best;

  // geometric stage: strong bidirectional overlap regardless of label
  for (int id : candidates) {
    const SemanticObject& obj = objects_[index_of_.at(id)];
    double geo = geoSimilarity(det.points_world, obj.cloud, cfg_.tau);
    if (geo <= cfg_.geo_strong) continue;
    double rev = geoSimilarity(obj.cloud, det.points_world, cfg_.tau);
    if (rev <= cfg_.geo_strong) continue;
    double score = std::min(geo, rev);
    if (best.kind != MatchKind::Geometric || score > std::min(best.geo, best.geo_rev)) {
      best = {MatchKind::Geometric, id, semSimilarity(emb, obj.embedding), geo, rev};
    }
  }
  return best;
}

void ObjectMap::fuse(SemanticObject& obj, const Detection& det) {
  std::vector<Vec3> merged = obj.cloud;
  merged.insert(merged.end(), det.points_world.begin(), det.points_world.end());
  obj.cloud = downsampleCloud(merged, cfg_.downsample_leaf);
  obj.centroid = cloudCentroid(obj.cloud);
  obj.bbox = cloudBox(obj.cloud);
  obj.embedding = (static_cast<double>(obj.observations) * obj.embedding + embedLabel(det.label))
                      .normalized();
  obj.observations += 1;
  index_.update(obj.id, obj.centroid);
}

int ObjectMap::integrate(const Detection& det, const SpatialConnectivityGraph& scg) {
  Association a = associate(det);
  if (a.kind == MatchKind::Semantic || a.kind == MatchKind::Geometric) {
    (a.kind == MatchKind::Semantic ? sem_matches_ : geo_matches_) += 1;
    fuse(objects_[index_of_.at(a.object_id)], det);
    return a.object_id;
  }

  SemanticObject obj;
  obj.id = next_id_++;
  obj.label = det.label;
  obj.embedding = embedLabel(det.label);
  obj.cloud = downsampleCloud(det.points_world, cfg_.downsample_leaf);
  obj.centroid = cloudCentroid(obj.cloud);
  obj.bbox = cloudBox(obj.cloud);
  obj.anchor_node = scg.locate(det.source_pose.position);
  obj.observations = 1;
  index_.insert(obj.id, obj.centroid);
  index_of_[obj.id] = objects_.size();
  objects_.push_back(std::move(obj));
  new_objects_ += 1;
  return objects_.back().id;
}

}  // namespace ssnav
