#pragma once

#include "ssnav/core/config.hpp"
#include "ssnav/core/geometry.hpp"
#include "ssnav/objects/centroid_index.hpp"
#include "ssnav/scg/polyhedron.hpp"
#include "ssnav/sim/sensor.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ssnav {

struct CameraIntrinsics {
  double fx = 0.0, fy = 0.0;
  double cx = 0.0, cy = 0.0;
  int width = 0, height = 0;
};

// Lifts masked depth pixels into world points. Depth and mask are row-major
// width*height buffers; camera frame is x-right / y-down / z-forward, with
// the optical axis along the pose heading. Throws when the mask is empty,
// buffer sizes disagree, or a masked pixel has non-positive depth.
std::vector<Vec3> backProject(const std::vector<double>& depth,
                              const std::vector<uint8_t>& mask, const CameraIntrinsics& K,
                              const Pose& pose);

// Fraction of points in ci whose nearest neighbor in cj lies within tau.
// Asymmetric. Empty cj gives 0; empty ci throws.
double geoSimilarity(const std::vector<Vec3>& ci, const std::vector<Vec3>& cj, double tau);

// Cosine between feature vectors; throws on a zero vector.
double semSimilarity(const Eigen::VectorXd& vi, const Eigen::VectorXd& vj);

// Union of clouds collapsed to per-cell centroids on a leaf-sized lattice.
std::vector<Vec3> downsampleCloud(const std::vector<Vec3>& cloud, double leaf);

struct SemanticObject {
  int id = -1;
  std::string label;
  Eigen::VectorXd embedding;  // unit norm
  std::vector<Vec3> cloud;    // leaf-sampled world points
  Vec3 centroid{0.0, 0.0, 0.0};
  Box bbox;
  int anchor_node = -1;
  int observations = 0;
};

enum class MatchKind { Semantic, Geometric, New };

struct Association {
  MatchKind kind = MatchKind::New;
  int object_id = -1;
  double sem = 0.0;
  double geo = 0.0;      // detection -> object
  double geo_rev = 0.0;  // object -> detection
};

// Persistent semantic object layer. Detections are associated against nearby
// objects (semantic stage first, then bidirectional geometric), fused into a
// match or instantiated fresh, and anchored to the SCG node at the observer.
class ObjectMap {
 public:
  explicit ObjectMap(const ObjectConfig& cfg) : cfg_(cfg) {}

  // Runs associate + fuse/instantiate; returns the touched object id.
  int integrate(const Detection& det, const SpatialConnectivityGraph& scg);
  Association associate(const Detection& det) const;

  const std::vector<SemanticObject>& objects() const { return objects_; }
  const SemanticObject* find(int id) const;
  const ObjectConfig& config() const { return cfg_; }

  int semanticMatches() const { return sem_matches_; }
  int geometricMatches() const { return geo_matches_; }
  int newObjects() const { return new_objects_; }

 private:
  ObjectConfig cfg_;
  std::vector<SemanticObject> objects_;
  std::map<int, size_t> index_of_;
  CentroidIndex index_;
  int next_id_ = 0;
  int sem_matches_ = 0;
  int geo_matches_ = 0;
  int new_objects_ = 0;

  void fuse(SemanticObject& obj, const Detection& det);
};

}  // namespace ssnav
