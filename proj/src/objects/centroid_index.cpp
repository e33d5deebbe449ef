#include "ssnav/objects/centroid_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssnav {

int CentroidIndex::attach(const Vec3& p, int id, int depth) {
  int slot = static_cast<int>(nodes_.size());
  nodes_.push_back({p, id, depth % 3, -1, -1, true});
  return slot;
}

void CentroidIndex::insert(int id, const Vec3& p) {
  if (slot_of_.count(id)) throw std::invalid_argument("CentroidIndex: duplicate id");
  if (root_ == -1) {
    root_ = attach(p, id, 0);
    slot_of_[id] = root_;
    return;
  }
  int cur = root_;
  int depth = 0;
  for (;;) {
    bool go_left = p[nodes_[static_cast<size_t>(cur)].axis] <
                   nodes_[static_cast<size_t>(cur)].p[nodes_[static_cast<size_t>(cur)].axis];
    int next = go_left ? nodes_[static_cast<size_t>(cur)].left
                       : nodes_[static_cast<size_t>(cur)].right;
    if (next == -1) {
      int slot = attach(p, id, depth + 1);  // may reallocate nodes_
      Node& parent = nodes_[static_cast<size_t>(cur)];
      (go_left ? parent.left : parent.right) = slot;
      slot_of_[id] = slot;
      return;
    }
    cur = next;
    ++depth;
  }
}

void CentroidIndex::remove(int id) {
  auto it = slot_of_.find(id);
  if (it == slot_of_.end()) throw std::invalid_argument("CentroidIndex: unknown id");
  nodes_[static_cast<size_t>(it->second)].alive = false;
  slot_of_.erase(it);
  ++dead_;
  if (dead_ > slot_of_.size()) rebuild();
}

void CentroidIndex::update(int id, const Vec3& p) {
  remove(id);
  insert(id, p);
}

int CentroidIndex::buildBalanced(std::vector<std::pair<Vec3, int>>& pts, int lo, int hi,
                                 int depth) {
  if (lo >= hi) return -1;
  int axis = depth % 3;
  int mid = (lo + hi) / 2;
  std::nth_element(pts.begin() + lo, pts.begin() + mid, pts.begin() + hi,
                   [axis](const auto& a, const auto& b) {
                     if (a.first[axis] != b.first[axis]) return a.first[axis] < b.first[axis];
                     return a.second < b.second;
                   });
  int slot = attach(pts[static_cast<size_t>(mid)].first, pts[static_cast<size_t>(mid)].second,
                    depth);
  int l = buildBalanced(pts, lo, mid, depth + 1);
  int r = buildBalanced(pts, mid + 1, hi, depth + 1);
  nodes_[static_cast<size_t>(slot)].left = l;
  nodes_[static_cast<size_t>(slot)].right = r;
  return slot;
}

void CentroidIndex::rebuild() {
  std::vector<std::pair<Vec3, int>> pts;
  pts.reserve(slot_of_.size());
  for (const auto& [id, slot] : slot_of_) pts.push_back({nodes_[static_cast<size_t>(slot)].p, id});
  nodes_.clear();
  slot_of_.clear();
  dead_ = 0;
  root_ = buildBalanced(pts, 0, static_cast<int>(pts.size()), 0);
  for (int s = 0; s < static_cast<int>(nodes_.size()); ++s)
    slot_of_[nodes_[static_cast<size_t>(s)].id] = s;
}

void CentroidIndex::collect(int slot, const Vec3& center, double r2,
                            std::vector<int>& out) const {
  if (slot == -1) return;
  const Node& n = nodes_[static_cast<size_t>(slot)];
  if (n.alive && (n.p - center).squaredNorm() <= r2) out.push_back(n.id);
  double d = center[n.axis] - n.p[n.axis];
  if (d < 0.0) {
    collect(n.left, center, r2, out);
    if (d * d <= r2) collect(n.right, center, r2, out);
  } else {
    collect(n.right, center, r2, out);
    if (d * d <= r2) collect(n.left, center, r2, out);
  }
}

std::vector<int> CentroidIndex::radiusQuery(const Vec3& center, double r) const {
  std::vector<int> out;
  if (r < 0.0) return out;
  collect(root_, center, r * r, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ssnav
