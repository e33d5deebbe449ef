#pragma once

// Reference implementations used only by tests. These deliberately take the
// slow, direct route (exhaustive enumeration, dense sampling, first-principles
// geometry) so library results are checked against independent math.

#include "ssnav/core/geometry.hpp"
#include "ssnav/region/partition.hpp"
#include "ssnav/scg/quickhull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace ssnav::test {

// All set partitions of {0..n-1} as membership vectors (restricted growth
// strings). Bell(8) = 4140, so n <= 8 stays cheap.
inline std::vector<std::vector<int>> allPartitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(static_cast<size_t>(n), 0);
  while (true) {
    out.push_back(a);
    // next restricted growth string
    int i = n - 1;
    for (; i > 0; --i) {
      int maxPrefix = 0;
      for (int j = 0; j < i; ++j) maxPrefix = std::max(maxPrefix, a[static_cast<size_t>(j)]);
      if (a[static_cast<size_t>(i)] <= maxPrefix) break;
    }
    if (i == 0) break;
    a[static_cast<size_t>(i)] += 1;
    for (int j = i + 1; j < n; ++j) a[static_cast<size_t>(j)] = 0;
  }
  return out;
}

// Best-Q membership by exhaustive search; ties resolved toward the
// lexicographically smallest membership vector so the result is unique.
inline std::map<int, int> bruteForceBestPartition(const ClusterGraph& g, double gamma,
                                                  double* best_q = nullptr) {
  int n = static_cast<int>(g.vertices.size());
  std::vector<int> best;
  double bq = -1e300;
  for (const auto& memb : allPartitions(n)) {
    std::map<int, int> m;
    for (int i = 0; i < n; ++i) m[g.vertices[static_cast<size_t>(i)]] = memb[static_cast<size_t>(i)];
    double q = modularity(g, m, gamma);
    if (q > bq + 1e-12) {
      bq = q;
      best = memb;
    }
  }
  if (best_q) *best_q = bq;
  std::map<int, int> out;
  for (int i = 0; i < n; ++i) out[g.vertices[static_cast<size_t>(i)]] = best[static_cast<size_t>(i)];
  return out;
}

// Community structure as canonical set-of-sets for comparisons that must
// ignore label choices.
inline std::set<std::set<int>> communitySets(const std::map<int, int>& membership) {
  std::map<int, std::set<int>> by_label;
  for (const auto& [v, c] : membership) by_label[c].insert(v);
  std::set<std::set<int>> out;
  for (auto& [c, s] : by_label) out.insert(s);
  return out;
}

// Segment-triangle intersection (inclusive of boundary touches).
inline bool segmentHitsTriangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b,
                                const Vec3& c, double eps = 1e-12) {
  Vec3 n = (b - a).cross(c - a);
  double da = n.dot(p - a);
  double db = n.dot(q - a);
  if (da * db > eps * n.squaredNorm()) return false;  // same strict side
  double denom = n.dot(q - p);
  double t;
  if (std::abs(denom) < 1e-15) {
    // segment parallel to the plane; only count if it lies essentially in it
    if (std::abs(da) > 1e-9 * (1.0 + n.norm())) return false;
    t = 0.5;
  } else {
    t = n.dot(a - p) / denom;
  }
  if (t < -1e-9 || t > 1.0 + 1e-9) return false;
  Vec3 x = p + t * (q - p);
  // barycentric containment
  Vec3 v0 = b - a, v1 = c - a, v2 = x - a;
  double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
  double d20 = v2.dot(v0), d21 = v2.dot(v1);
  double det = d00 * d11 - d01 * d01;
  if (std::abs(det) < 1e-18) return false;
  double v = (d11 * d20 - d01 * d21) / det;
  double w = (d00 * d21 - d01 * d20) / det;
  return v >= -1e-9 && w >= -1e-9 && v + w <= 1.0 + 1e-9;
}

// Convex-overlap oracle: vertex containment in either direction, else some
// edge of one pierces a face of the other. Complete for convex polytopes.
inline bool hullsIntersectOracle(const std::vector<Vec3>& pa, const std::vector<Vec3>& pb) {
  auto ha = ConvexHull::build(pa);
  auto hb = ConvexHull::build(pb);
  if (!ha || !hb) return false;
  for (const auto& p : pa)
    if (hb->contains(p, 1e-9)) return true;
  for (const auto& p : pb)
    if (ha->contains(p, 1e-9)) return true;

  auto edges_of = [](const ConvexHull& h) {
    std::set<std::pair<int, int>> es;
    for (const auto& f : h.faces())
      for (int k = 0; k < 3; ++k) {
        int u = f.v[static_cast<size_t>(k)], v = f.v[static_cast<size_t>((k + 1) % 3)];
        es.insert({std::min(u, v), std::max(u, v)});
      }
    return es;
  };
  for (const auto& [u, v] : edges_of(*ha))
    for (const auto& f : hb->faces())
      if (segmentHitsTriangle(pa[static_cast<size_t>(u)], pa[static_cast<size_t>(v)],
                              pb[static_cast<size_t>(f.v[0])], pb[static_cast<size_t>(f.v[1])],
                              pb[static_cast<size_t>(f.v[2])]))
        return true;
  for (const auto& [u, v] : edges_of(*hb))
    for (const auto& f : ha->faces())
      if (segmentHitsTriangle(pb[static_cast<size_t>(u)], pb[static_cast<size_t>(v)],
                              pa[static_cast<size_t>(f.v[0])], pa[static_cast<size_t>(f.v[1])],
                              pa[static_cast<size_t>(f.v[2])]))
        return true;
  return false;
}

// Portable deterministic uniform double in [0, 1).
// Fraction of ci points with a cj neighbor within tau, by the O(|ci||cj|)
// double loop. Same squared-distance comparison the library must reproduce.
inline double geoSimilarityBrute(const std::vector<Vec3>& ci, const std::vector<Vec3>& cj,
                                 double tau) {
  if (cj.empty()) return 0.0;
  int matched = 0;
  for (const Vec3& p : ci) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& q : cj) best = std::min(best, (p - q).squaredNorm());
    if (best <= tau * tau) ++matched;
  }
  return static_cast<double>(matched) / static_cast<double>(ci.size());
}

// Largest point distance to the best-fit plane (total least squares through
// the centroid; normal = smallest-singular-value direction).
inline double planeFitResidual(const std::vector<Vec3>& pts) {
  Vec3 mean = Vec3::Zero();
  for (const Vec3& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::MatrixXd centered(static_cast<Eigen::Index>(pts.size()), 3);
  for (Eigen::Index i = 0; i < centered.rows(); ++i)
    centered.row(i) = (pts[static_cast<size_t>(i)] - mean).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  Vec3 normal = svd.matrixV().col(2);
  double worst = 0.0;
  for (const Vec3& p : pts) worst = std::max(worst, std::abs(normal.dot(p - mean)));
  return worst;
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniformIn(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace ssnav::test
