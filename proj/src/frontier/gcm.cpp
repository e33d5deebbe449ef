#include "ssnav/frontier/gcm.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ssnav {

GlobalCoverageMask::GlobalCoverageMask(double cell_size, double voxel_res,
                                       double visited_fraction)
    : cell_size_(cell_size) {
  if (cell_size <= 0.0 || voxel_res <= 0.0 || cell_size < voxel_res)
    throw std::invalid_argument("GlobalCoverageMask: bad cell/voxel size");
  int per_axis = static_cast<int>(std::llround(cell_size / voxel_res));
  per_cell_ = per_axis * per_axis * per_axis;
  threshold_ = static_cast<int>(std::llround(visited_fraction * per_cell_));
}

void GlobalCoverageMask::update(const VoxelGrid& grid) {
  // tally unknowns per cell over the whole window; every overlapped cell
  // appears, even when its count lands on zero
  const Vec3i& d = grid.dims();
  if (d.x() <= 0 || d.y() <= 0 || d.z() <= 0) return;

  // cell keys floor componentwise, so precompute them per axis and count in a
  // dense block; cell_size >= voxel_res means keys step by at most one, so the
  // key box covers exactly the overlapped cells
  auto axisKeys = [&](int n, int axis) {
    std::vector<int> keys(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      Vec3i idx = Vec3i::Zero();
      idx[axis] = i;
      keys[static_cast<size_t>(i)] = cellOf(grid.indexToCenter(idx))[axis];
    }
    return keys;
  };
  std::vector<int> kx = axisKeys(d.x(), 0);
  std::vector<int> ky = axisKeys(d.y(), 1);
  std::vector<int> kz = axisKeys(d.z(), 2);
  const int nx = kx.back() - kx.front() + 1;
  const int ny = ky.back() - ky.front() + 1;
  const int nz = kz.back() - kz.front() + 1;
  std::vector<int> counts(static_cast<size_t>(nx) * ny * nz, 0);
  for (int z = 0; z < d.z(); ++z) {
    const int oz = (kz[static_cast<size_t>(z)] - kz.front()) * ny;
    for (int y = 0; y < d.y(); ++y) {
      const int oy = (oz + ky[static_cast<size_t>(y)] - ky.front()) * nx;
      for (int x = 0; x < d.x(); ++x)
        if (grid.at(Vec3i(x, y, z)) == VoxelState::Unknown)
          counts[static_cast<size_t>(oy + kx[static_cast<size_t>(x)] -
                                     kx.front())] += 1;
    }
  }

  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        GcmCell& cell =
            cells_[Vec3i(kx.front() + x, ky.front() + y, kz.front() + z)];
        cell.unknown_count = counts[(static_cast<size_t>(z) * ny + y) * nx + x];
        if (cell.unknown_count < threshold_) cell.visited = true;  // sticky
      }
}

const GcmCell* GlobalCoverageMask::cell(const Vec3i& k) const {
  auto it = cells_.find(k);
  return it == cells_.end() ? nullptr : &it->second;
}

bool GlobalCoverageMask::visited(const Vec3i& k) const {
  const GcmCell* c = cell(k);
  return c != nullptr && c->visited;
}

}  // namespace ssnav
