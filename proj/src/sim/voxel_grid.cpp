#include "ssnav/sim/voxel_grid.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ssnav {

namespace {
constexpr double kTraverseEps = 1e-9;
}

VoxelGrid::VoxelGrid(const Vec3& origin, const Vec3i& dims, double resolution, VoxelState fill)
    : origin_(origin), dims_(dims), res_(resolution) {
  if (resolution <= 0.0) throw std::invalid_argument("voxel resolution must be positive");
  if ((dims.array() <= 0).any()) throw std::invalid_argument("voxel dims must be positive");
  states_.assign(static_cast<size_t>(dims_.x()) * dims_.y() * dims_.z(), fill);
}

VoxelGrid VoxelGrid::makeWindow(const Vec3& center, const Vec3& size, double resolution) {
  Vec3i dims(static_cast<int>(std::llround(size.x() / resolution)),
             static_cast<int>(std::llround(size.y() / resolution)),
             static_cast<int>(std::llround(size.z() / resolution)));
  Vec3 want = center - dims.cast<double>() * resolution * 0.5;
  // Snap the origin onto the global voxel lattice.
  Vec3 origin(std::round(want.x() / resolution) * resolution,
              std::round(want.y() / resolution) * resolution,
              std::round(want.z() / resolution) * resolution);
  return VoxelGrid(origin, dims, resolution);
}

size_t VoxelGrid::countState(VoxelState s) const {
  return static_cast<size_t>(std::count(states_.begin(), states_.end(), s));
}

void VoxelGrid::recenter(const Vec3& new_center) {
  Vec3 want = new_center - dims_.cast<double>() * res_ * 0.5;
  Vec3i new_ov(static_cast<int>(std::llround(want.x() / res_)),
               static_cast<int>(std::llround(want.y() / res_)),
               static_cast<int>(std::llround(want.z() / res_)));
  Vec3i shift = new_ov - originVoxel();
  if (shift == Vec3i::Zero()) return;

  std::vector<VoxelState> fresh(states_.size(), VoxelState::Unknown);
  Vec3i lo = shift.cwiseMax(Vec3i::Zero());
  Vec3i hi = (dims_ + shift).cwiseMin(dims_);
  for (int z = lo.z(); z < hi.z(); ++z)
    for (int y = lo.y(); y < hi.y(); ++y)
      for (int x = lo.x(); x < hi.x(); ++x) {
        Vec3i dst(x - shift.x(), y - shift.y(), z - shift.z());
        fresh[linearIndex(dst)] = states_[linearIndex(Vec3i(x, y, z))];
      }
  states_.swap(fresh);
  origin_ = new_ov.cast<double>() * res_;
}

VoxelGrid::RayResult VoxelGrid::castRay(const Vec3& origin, const Vec3& dir, double max_dist,
                                        const std::function<bool(VoxelState)>& blocks) const {
  return castRayFast(origin, dir, max_dist, blocks);
}

void VoxelGrid::traverse(const Vec3& from, const Vec3& to,
                         const std::function<void(const Vec3i&)>& visit) const {
  traverseFast(from, to, visit);
}

void VoxelGrid::saveSnapshot(const std::string& path) const {
  nlohmann::json header;
  header["origin"] = {origin_.x(), origin_.y(), origin_.z()};
  header["dims"] = {dims_.x(), dims_.y(), dims_.z()};
  header["resolution"] = res_;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(states_.data()),
            static_cast<std::streamsize>(states_.size()));
}

VoxelGrid VoxelGrid::loadSnapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);
  nlohmann::json header = nlohmann::json::parse(line);
  Vec3 origin(header["origin"][0], header["origin"][1], header["origin"][2]);
  Vec3i dims(header["dims"][0], header["dims"][1], header["dims"][2]);
  VoxelGrid grid(origin, dims, header["resolution"]);
  in.read(reinterpret_cast<char*>(grid.states_.data()),
          static_cast<std::streamsize>(grid.states_.size()));
  if (in.gcount() != static_cast<std::streamsize>(grid.states_.size()))
    throw std::runtime_error("truncated grid snapshot: " + path);
  return grid;
}

}  // namespace ssnav
