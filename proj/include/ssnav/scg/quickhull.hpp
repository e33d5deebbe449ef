#pragma once

#include "ssnav/core/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace ssnav {

struct HullFace {
  std::array<int, 3> v;  // indices into the input point set, CCW from outside
  Vec3 normal;           // unit outward normal
  double offset;         // plane: normal . x = offset
};

// Triangulated convex hull of a 3D point set (quickhull). Input points that
// are not extreme simply end up inside the hull; faces reference the input
// indexing. Near-degenerate inputs are retried once with a tiny seeded jitter
// so results stay deterministic.
class ConvexHull {
 public:
  static std::optional<ConvexHull> build(const std::vector<Vec3>& points,
                                         uint64_t jitter_seed = 0x5eed0123);

  const std::vector<HullFace>& faces() const { return faces_; }
  const std::vector<int>& hullVertices() const { return hull_vertices_; }  // sorted, unique

  // max over faces of signed distance (positive = outside)
  double signedDistance(const Vec3& p) const;
  bool contains(const Vec3& p, double tol = 1e-9) const {
    return signedDistance(p) <= tol;
  }

  // Euler characteristic V - E + F over the referenced hull surface.
  int eulerCharacteristic() const;

 private:
  std::vector<HullFace> faces_;
  std::vector<int> hull_vertices_;
};

// Boolean intersection test between two convex vertex sets (GJK). Touching
// configurations within eps count as intersecting.
bool convexSetsIntersect(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                         double eps = 1e-9);

}  // namespace ssnav
