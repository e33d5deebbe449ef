#pragma once

#include "ssnav/core/geometry.hpp"

#include <map>
#include <vector>

namespace ssnav {

// kd-tree over object centroids. Inserts go in incrementally; removals are
// lazy (tombstones) and the tree rebuilds itself once half the nodes are
// dead, so fused objects can move without degrading queries forever.
class CentroidIndex {
 public:
  void insert(int id, const Vec3& p);          // id must be new
  void remove(int id);                          // id must be present
  void update(int id, const Vec3& p);          // move an existing entry
  // ids of live entries with |centroid - center| <= r, ascending
  std::vector<int> radiusQuery(const Vec3& center, double r) const;
  size_t size() const { return slot_of_.size(); }

 private:
  struct Node {
    Vec3 p;
    int id = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
    bool alive = true;
  };
  std::vector<Node> nodes_;
  std::map<int, int> slot_of_;  // object id -> node slot
  int root_ = -1;
  size_t dead_ = 0;

  int attach(const Vec3& p, int id, int depth);
  int buildBalanced(std::vector<std::pair<Vec3, int>>& pts, int lo, int hi, int depth);
  void rebuild();
  void collect(int slot, const Vec3& center, double r2, std::vector<int>& out) const;
};

}  // namespace ssnav
