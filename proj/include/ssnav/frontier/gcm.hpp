#pragma once

#include "ssnav/core/geometry.hpp"
#include "ssnav/sim/voxel_grid.hpp"

#include <map>

namespace ssnav {

struct GcmCell {
  int unknown_count = 0;
  bool visited = false;
};

// Persistent coarse coverage mask. Each cell tracks how many voxels of the
// current window that fall inside it are still Unknown; once the count drops
// below the visited threshold the cell is marked visited for good. Cells are
// never dropped, so coverage survives window rolls.
class GlobalCoverageMask {
 public:
  GlobalCoverageMask(double cell_size, double voxel_res, double visited_fraction);

  // Recounts every cell overlapping the grid window; marks newly-cleared
  // cells visited. Cells outside the window keep their previous state.
  void update(const VoxelGrid& grid);

  Vec3i cellOf(const Vec3& p) const {
    return Vec3i(static_cast<int>(std::floor(p.x() / cell_size_)),
                 static_cast<int>(std::floor(p.y() / cell_size_)),
                 static_cast<int>(std::floor(p.z() / cell_size_)));
  }
  const GcmCell* cell(const Vec3i& k) const;
  const std::map<Vec3i, GcmCell, Vec3iLess>& cells() const { return cells_; }
  bool visited(const Vec3i& k) const;

  double cellSize() const { return cell_size_; }
  int voxelsPerCell() const { return per_cell_; }
  int visitedThreshold() const { return threshold_; }  // visited iff count < threshold

 private:
  double cell_size_;
  int per_cell_;
  int threshold_;
  std::map<Vec3i, GcmCell, Vec3iLess> cells_;
};

}  // namespace ssnav
