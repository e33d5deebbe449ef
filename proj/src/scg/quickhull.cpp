#include "ssnav/scg/quickhull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace ssnav {

namespace {

struct Face {
  std::array<int, 3> v;
  Vec3 normal;
  double offset = 0.0;
  std::vector<int> outside;  // conflict points above this face
  bool alive = true;
};

Vec3 faceNormal(const std::vector<Vec3>& pts, const std::array<int, 3>& v) {
  return (pts[v[1]] - pts[v[0]]).cross(pts[v[2]] - pts[v[0]]);
}

struct Builder {
  const std::vector<Vec3>& pts;
  double eps;
  std::vector<Face> faces;

  explicit Builder(const std::vector<Vec3>& p, double e) : pts(p), eps(e) {}

  void addFace(int a, int b, int c, const Vec3& interior) {
    Face f;
    f.v = {a, b, c};
    Vec3 n = faceNormal(pts, f.v);
    double len = n.norm();
    if (len < 1e-30) len = 1e-30;
    n /= len;
    double off = n.dot(pts[a]);
    if (n.dot(interior) > off) {  // flip outward
      std::swap(f.v[1], f.v[2]);
      n = -n;
      off = -off;
    }
    f.normal = n;
    f.offset = off;
    faces.push_back(std::move(f));
  }

  double distAbove(const Face& f, int pi) const { return f.normal.dot(pts[pi]) - f.offset; }

  bool run(const std::vector<int>& candidates) {
    // Initial extreme tetrahedron.
    int i0 = candidates[0], i1 = candidates[0];
    for (int i : candidates) {
      if (pts[i].x() < pts[i0].x()) i0 = i;
      if (pts[i].x() > pts[i1].x()) i1 = i;
    }
    if ((pts[i1] - pts[i0]).norm() < eps) return false;
    int i2 = -1;
    double best = eps;
    Vec3 d01 = (pts[i1] - pts[i0]).normalized();
    for (int i : candidates) {
      Vec3 r = pts[i] - pts[i0];
      double d = (r - d01 * d01.dot(r)).norm();
      if (d > best) {
        best = d;
        i2 = i;
      }
    }
    if (i2 < 0) return false;
    Vec3 n = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
    int i3 = -1;
    best = eps;
    for (int i : candidates) {
      double d = std::abs(n.dot(pts[i] - pts[i0]));
      if (d > best) {
        best = d;
        i3 = i;
      }
    }
    if (i3 < 0) return false;

    Vec3 interior = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) * 0.25;
    addFace(i0, i1, i2, interior);
    addFace(i0, i1, i3, interior);
    addFace(i0, i2, i3, interior);
    addFace(i1, i2, i3, interior);

    std::set<int> used = {i0, i1, i2, i3};
    for (int i : candidates) {
      if (used.count(i)) continue;
      int best_face = -1;
      double best_d = eps;
      for (size_t f = 0; f < faces.size(); ++f) {
        double d = distAbove(faces[f], i);
        if (d > best_d) {
          best_d = d;
          best_face = static_cast<int>(f);
        }
      }
      if (best_face >= 0) faces[best_face].outside.push_back(i);
    }

    // Refinement loop: expand toward the farthest conflict point.
    while (true) {
      int fi = -1;
      double far_d = eps;
      int far_p = -1;
      for (size_t f = 0; f < faces.size(); ++f) {
        if (!faces[f].alive) continue;
        for (int p : faces[f].outside) {
          double d = distAbove(faces[f], p);
          if (d > far_d) {
            far_d = d;
            fi = static_cast<int>(f);
            far_p = p;
          }
        }
      }
      if (fi < 0) break;

      // Visible set and horizon.
      std::vector<int> visible;
      std::vector<char> is_visible(faces.size(), 0);
      for (size_t f = 0; f < faces.size(); ++f) {
        if (faces[f].alive && distAbove(faces[f], far_p) > eps) {
          visible.push_back(static_cast<int>(f));
          is_visible[f] = 1;
        }
      }
      // Horizon edges: directed edges of visible faces whose reverse is not in a visible face.
      std::map<std::pair<int, int>, int> edge_count;
      for (int f : visible) {
        const auto& v = faces[f].v;
        for (int e = 0; e < 3; ++e) {
          int a = v[e], b = v[(e + 1) % 3];
          edge_count[{std::min(a, b), std::max(a, b)}] += 1;
        }
      }
      std::vector<std::pair<int, int>> horizon;
      for (int f : visible) {
        const auto& v = faces[f].v;
        for (int e = 0; e < 3; ++e) {
          int a = v[e], b = v[(e + 1) % 3];
          if (edge_count[{std::min(a, b), std::max(a, b)}] == 1) horizon.emplace_back(a, b);
        }
      }
      if (horizon.empty()) return false;  // numeric breakdown

      std::vector<int> orphans;
      for (int f : visible) {
        faces[f].alive = false;
        for (int p : faces[f].outside)
          if (p != far_p) orphans.push_back(p);
        faces[f].outside.clear();
      }

      Vec3 interior2 = Vec3::Zero();
      int nalive = 0;
      for (const auto& f : faces)
        if (f.alive) {
          interior2 += pts[f.v[0]] + pts[f.v[1]] + pts[f.v[2]];
          nalive += 3;
        }
      interior2 = nalive > 0 ? Vec3(interior2 / nalive) : interior;

      size_t first_new = faces.size();
      for (const auto& [a, b] : horizon) addFace(a, b, far_p, interior2);

      std::sort(orphans.begin(), orphans.end());
      orphans.erase(std::unique(orphans.begin(), orphans.end()), orphans.end());
      for (int p : orphans) {
        int best_face = -1;
        double best_d = eps;
        for (size_t f = first_new; f < faces.size(); ++f) {
          double d = distAbove(faces[f], p);
          if (d > best_d) {
            best_d = d;
            best_face = static_cast<int>(f);
          }
        }
        if (best_face >= 0) faces[best_face].outside.push_back(p);
      }
    }
    return true;
  }
};

}  // namespace

std::optional<ConvexHull> ConvexHull::build(const std::vector<Vec3>& points, uint64_t jitter_seed) {
  if (points.size() < 4) return std::nullopt;
  std::vector<int> all(points.size());
  for (size_t i = 0; i < points.size(); ++i) all[i] = static_cast<int>(i);

  Vec3 lo = points[0], hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  double scale = std::max((hi - lo).norm(), 1e-12);
  double eps = 1e-10 * scale;

  auto attempt = [&](const std::vector<Vec3>& pset) -> std::optional<ConvexHull> {
    Builder b(pset, eps);
    if (!b.run(all)) return std::nullopt;
    ConvexHull hull;
    std::set<int> verts;
    for (const auto& f : b.faces) {
      if (!f.alive) continue;
      HullFace hf;
      hf.v = f.v;
      // Recompute planes from the original coordinates (pset may be jittered).
      Vec3 n = faceNormal(points, f.v);
      double len = n.norm();
      hf.normal = len > 1e-30 ? Vec3(n / len) : f.normal;
      hf.offset = hf.normal.dot(points[f.v[0]]);
      hull.faces_.push_back(hf);
      for (int vi : f.v) verts.insert(vi);
    }
    hull.hull_vertices_.assign(verts.begin(), verts.end());
    if (hull.eulerCharacteristic() != 2) return std::nullopt;
    return hull;
  };

  if (auto hull = attempt(points)) return hull;

  // Degenerate input: deterministic jitter and retry.
  std::mt19937_64 rng(jitter_seed);
  auto unit = [&rng]() { return (static_cast<double>(rng() >> 11)) * (1.0 / 9007199254740992.0); };
  std::vector<Vec3> jittered = points;
  for (auto& p : jittered)
    p += Vec3(unit() - 0.5, unit() - 0.5, unit() - 0.5) * 2e-9;
  return attempt(jittered);
}

double ConvexHull::signedDistance(const Vec3& p) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& f : faces_) best = std::max(best, f.normal.dot(p) - f.offset);
  return best;
}

int ConvexHull::eulerCharacteristic() const {
  std::set<int> verts;
  std::set<std::pair<int, int>> edges;
  for (const auto& f : faces_) {
    for (int e = 0; e < 3; ++e) {
      int a = f.v[e], b = f.v[(e + 1) % 3];
      verts.insert(a);
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  return static_cast<int>(verts.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(faces_.size());
}

namespace {

Vec3 support(const std::vector<Vec3>& set, const Vec3& d) {
  double best = -std::numeric_limits<double>::infinity();
  Vec3 out = set[0];
  for (const auto& p : set) {
    double s = p.dot(d);
    if (s > best) {
      best = s;
      out = p;
    }
  }
  return out;
}

// Closest point to the origin on the simplex; shrinks the simplex to the
// supporting feature. Returns true if the simplex contains the origin.
bool nearestSimplex(std::vector<Vec3>& s, Vec3& dir) {
  if (s.size() == 2) {
    Vec3 a = s[1], b = s[0];
    Vec3 ab = b - a, ao = -a;
    if (ab.dot(ao) > 0) {
      dir = ab.cross(ao).cross(ab);
    } else {
      s = {a};
      dir = ao;
    }
  } else if (s.size() == 3) {
    Vec3 a = s[2], b = s[1], c = s[0];
    Vec3 ab = b - a, ac = c - a, ao = -a;
    Vec3 abc = ab.cross(ac);
    if (abc.cross(ac).dot(ao) > 0) {
      if (ac.dot(ao) > 0) {
        s = {c, a};
        dir = ac.cross(ao).cross(ac);
      } else {
        s = {b, a};
        return nearestSimplex(s, dir);
      }
    } else if (ab.cross(abc).dot(ao) > 0) {
      s = {b, a};
      return nearestSimplex(s, dir);
    } else {
      if (abc.dot(ao) > 0) {
        dir = abc;
      } else {
        s = {b, c, a};
        dir = -abc;
      }
    }
  } else if (s.size() == 4) {
    Vec3 a = s[3], b = s[2], c = s[1], d = s[0];
    Vec3 ab = b - a, ac = c - a, ad = d - a, ao = -a;
    Vec3 abc = ab.cross(ac), acd = ac.cross(ad), adb = ad.cross(ab);
    if (abc.dot(ad) > 0) abc = -abc;
    if (acd.dot(ab) > 0) acd = -acd;
    if (adb.dot(ac) > 0) adb = -adb;
    if (abc.dot(ao) > 0) {
      s = {c, b, a};
      return nearestSimplex(s, dir);
    }
    if (acd.dot(ao) > 0) {
      s = {d, c, a};
      return nearestSimplex(s, dir);
    }
    if (adb.dot(ao) > 0) {
      s = {b, d, a};
      return nearestSimplex(s, dir);
    }
    return true;  // origin enclosed
  }
  return false;
}

}  // namespace

bool convexSetsIntersect(const std::vector<Vec3>& a, const std::vector<Vec3>& b, double eps) {
  if (a.empty() || b.empty()) return false;
  auto minkowskiSupport = [&](const Vec3& d) -> Vec3 { return support(a, d) - support(b, -d); };

  Vec3 dir = Vec3(1, 0, 0);
  std::vector<Vec3> simplex{minkowskiSupport(dir)};
  dir = -simplex[0];
  for (int iter = 0; iter < 128; ++iter) {
    if (dir.norm() < eps) return true;  // origin on the simplex boundary
    Vec3 p = minkowskiSupport(dir.normalized());
    if (p.dot(dir.normalized()) < -eps) return false;  // strict separation found
    simplex.push_back(p);
    if (nearestSimplex(simplex, dir)) return true;
  }
  return true;  // no separation established
}

}  // namespace ssnav
