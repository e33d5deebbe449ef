#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "ssnav/frontier/frontier.hpp"
#include "ssnav/frontier/gcm.hpp"

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

using namespace ssnav;

namespace {

// Independent per-cell tally: count Unknown voxel centers falling in the
// cell's metric box, no shared index arithmetic with the library.
int cellCountOracle(const VoxelGrid& grid, const Vec3i& k, double cell_size) {
  Vec3 lo = k.cast<double>() * cell_size;
  Vec3 hi = lo + Vec3(cell_size, cell_size, cell_size);
  int count = 0;
  const Vec3i& d = grid.dims();
  for (int z = 0; z < d.z(); ++z)
    for (int y = 0; y < d.y(); ++y)
      for (int x = 0; x < d.x(); ++x) {
        Vec3i idx(x, y, z);
        if (grid.at(idx) != VoxelState::Unknown) continue;
        Vec3 c = grid.indexToCenter(idx);
        if ((c.array() >= lo.array()).all() && (c.array() < hi.array()).all()) ++count;
      }
  return count;
}

bool frontierVoxelOracle(const VoxelGrid& grid, const Vec3i& local) {
  if (grid.at(local) != VoxelState::Free) return false;
  const Vec3i steps[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (const Vec3i& s : steps) {
    Vec3i nb = local + s;
    if (grid.inBounds(nb) && grid.at(nb) == VoxelState::Unknown) return true;
  }
  return false;
}

using VoxelKey = std::array<int, 3>;
using VoxelSet = std::set<VoxelKey>;

VoxelKey keyOf(const Vec3i& v) { return {v.x(), v.y(), v.z()}; }

// expected kept clusters by union-find over 26-neighbors
std::set<VoxelSet> clusterOracle(const std::vector<Vec3i>& voxels, int n_min) {
  std::map<Vec3i, int, Vec3iLess> idx;
  for (const Vec3i& v : voxels) idx.emplace(v, static_cast<int>(idx.size()));
  std::vector<int> parent(voxels.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int a) {
    while (parent[static_cast<size_t>(a)] != a) a = parent[static_cast<size_t>(a)] =
                                                     parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
    return a;
  };
  for (const auto& [v, i] : idx)
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          auto it = idx.find(v + Vec3i(dx, dy, dz));
          if (it != idx.end()) parent[static_cast<size_t>(find(i))] = find(it->second);
        }
  std::map<int, VoxelSet> groups;
  for (const auto& [v, i] : idx) groups[find(i)].insert(keyOf(v));
  std::set<VoxelSet> out;
  for (auto& [root, members] : groups)
    if (static_cast<int>(members.size()) >= n_min) out.insert(members);
  return out;
}

std::set<VoxelSet> frontierSets(const FrontierMap& fm) {
  std::set<VoxelSet> out;
  for (const auto& [id, f] : fm.frontiers()) {
    VoxelSet s;
    for (const Vec3i& v : f.voxels) s.insert(keyOf(v));
    out.insert(s);
  }
  return out;
}

Polyhedron cubeNode(const Vec3& center, double half) {
  Polyhedron p;
  p.seed = center;
  p.centroid = center;
  p.bounding_radius = half * std::sqrt(3.0);
  for (int axis = 0; axis < 3; ++axis)
    for (int sgn : {-1, 1}) {
      HullFace f;
      f.v = {0, 0, 0};
      f.normal = Vec3::Zero();
      f.normal[axis] = sgn;
      f.offset = f.normal.dot(center) + half;
      p.planes.push_back(f);
    }
  return p;
}

FrontierConfig frontierCfg() { return FrontierConfig{}; }
SensorConfig sensorCfg() { return SensorConfig{}; }

// Independent gain count: full-grid scan, cosine/tangent frustum predicates
// instead of the library's angle arithmetic. Occlusion reuses castRay, which
// the grid suite already pins against dense sampling.
double gainOracle(const VoxelGrid& grid, const Vec3& vp, double yaw,
                  const FrontierConfig& fcfg, const SensorConfig& scfg) {
  double cos_half_h = std::cos(scfg.fov_h_deg * M_PI / 360.0);
  double tan_half_v = std::tan(scfg.fov_v_deg * M_PI / 360.0);
  Vec3 heading = yawDirection(yaw);
  double count = 0.0;
  const Vec3i& d = grid.dims();
  for (int z = 0; z < d.z(); ++z)
    for (int y = 0; y < d.y(); ++y)
      for (int x = 0; x < d.x(); ++x) {
        Vec3i idx(x, y, z);
        if (grid.at(idx) != VoxelState::Unknown) continue;
        Vec3 v = grid.indexToCenter(idx) - vp;
        double dist = v.norm();
        if (dist > fcfg.gain_range || dist < 1e-9) continue;
        double horiz = std::hypot(v.x(), v.y());
        if (v.x() * heading.x() + v.y() * heading.y() < horiz * cos_half_h) continue;
        if (std::abs(v.z()) > tan_half_v * horiz) continue;
        if (grid.castRay(vp, v / dist, dist, blocksOccupied).outcome ==
            VoxelGrid::RayOutcome::Hit)
          continue;
        count += 1.0;
      }
  return count;
}

}  // namespace

TEST_CASE("coverage mask counts match the per-cell box oracle") {
  GlobalCoverageMask gcm(1.0, 0.1, 0.05);
  CHECK(gcm.voxelsPerCell() == 1000);
  CHECK(gcm.visitedThreshold() == 50);

  VoxelGrid grid(Vec3(0, 0, 0), Vec3i(30, 30, 20), 0.1);

  SUBCASE("untouched space counts full, swept space zero") {
    gcm.update(grid);
    // interior cell fully inside the window stays all-unknown
    const GcmCell* c = gcm.cell(Vec3i(1, 1, 0));
    REQUIRE(c != nullptr);
    CHECK(c->unknown_count == 1000);
    CHECK_FALSE(c->visited);

    for (auto& s : grid.states()) s = VoxelState::Free;
    gcm.update(grid);
    c = gcm.cell(Vec3i(1, 1, 0));
    CHECK(c->unknown_count == 0);
    CHECK(c->visited);
  }

  SUBCASE("random partial maps agree with the oracle") {
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 10; ++trial) {
      for (auto& s : grid.states()) {
        uint64_t r = rng() % 10;
        s = r < 4 ? VoxelState::Unknown : r < 9 ? VoxelState::Free : VoxelState::Occupied;
      }
      gcm.update(grid);
      for (const auto& [k, cell] : gcm.cells())
        REQUIRE(cell.unknown_count == cellCountOracle(grid, k, 1.0));
    }
  }

  SUBCASE("visited is sticky across re-unknowning") {
    for (auto& s : grid.states()) s = VoxelState::Free;
    gcm.update(grid);
    REQUIRE(gcm.visited(Vec3i(0, 0, 0)));

    std::mt19937_64 rng(9);
    for (int round = 0; round < 20; ++round) {
      for (auto& s : grid.states())
        s = rng() % 2 ? VoxelState::Unknown : VoxelState::Free;
      gcm.update(grid);
      CHECK(gcm.visited(Vec3i(0, 0, 0)));
      for (const auto& [k, cell] : gcm.cells())
        if (cell.visited && cell.unknown_count >= gcm.visitedThreshold())
          CHECK(true);  // stickiness may outlive the count that earned it
    }
  }
}

TEST_CASE("extraction finds exactly the oracle clusters") {
  FrontierConfig fcfg = frontierCfg();
  SensorConfig scfg = sensorCfg();
  SpatialConnectivityGraph scg;
  scg.addNode(cubeNode(Vec3(2, 2, 1), 10.0));

  SUBCASE("flat free/unknown interface forms one sheet cluster") {
    VoxelGrid grid(Vec3(0, 0, 0), Vec3i(40, 40, 20), 0.1);
    for (int z = 0; z < 20; ++z)
      for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 20; ++x) grid.set(Vec3i(x, y, z), VoxelState::Free);

    GlobalCoverageMask gcm(1.0, 0.1, 0.05);
    FrontierMap fm(fcfg, scfg);
    fm.update(grid, gcm, grid.bounds(), scg, Vec3(1, 2, 1));

    REQUIRE(fm.frontiers().size() == 1);
    const Frontier& f = fm.frontiers().begin()->second;
    CHECK(f.voxels.size() == 40 * 20);  // one voxel sheet at the seam
    CHECK(f.centroid.x() == doctest::Approx(1.95).epsilon(1e-12));
    CHECK(f.anchor_node == 0);
  }

  SUBCASE("fully mapped window has no frontier") {
    VoxelGrid grid(Vec3(0, 0, 0), Vec3i(30, 30, 16), 0.1, VoxelState::Free);
    for (int y = 0; y < 30; ++y)
      for (int z = 0; z < 16; ++z) grid.set(Vec3i(15, y, z), VoxelState::Occupied);
    GlobalCoverageMask gcm(1.0, 0.1, 0.05);
    FrontierMap fm(fcfg, scfg);
    fm.update(grid, gcm, grid.bounds(), scg, Vec3(1, 1, 0.5));
    CHECK(fm.frontiers().empty());
  }

  SUBCASE("random partial maps: no missed, no spurious voxels") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 12; ++trial) {
      VoxelGrid grid(Vec3(0, 0, 0), Vec3i(24, 24, 12), 0.1);
      // carve random free blobs into unknown space
      for (int blob = 0; blob < 6; ++blob) {
        Vec3i c(static_cast<int>(rng() % 24), static_cast<int>(rng() % 24),
                static_cast<int>(rng() % 12));
        int r = 2 + static_cast<int>(rng() % 4);
        for (int z = std::max(0, c.z() - r); z <= std::min(11, c.z() + r); ++z)
          for (int y = std::max(0, c.y() - r); y <= std::min(23, c.y() + r); ++y)
            for (int x = std::max(0, c.x() - r); x <= std::min(23, c.x() + r); ++x)
              if ((Vec3i(x, y, z) - c).squaredNorm() <= r * r)
                grid.set(Vec3i(x, y, z), rng() % 8 ? VoxelState::Free : VoxelState::Occupied);
      }

      GlobalCoverageMask gcm(1.0, 0.1, 0.05);
      gcm.update(grid);
      FrontierMap fm(fcfg, scfg);
      fm.update(grid, gcm, grid.bounds(), scg, Vec3(1.2, 1.2, 0.6));

      std::vector<Vec3i> expect_voxels;
      const Vec3i& d = grid.dims();
      for (int z = 0; z < d.z(); ++z)
        for (int y = 0; y < d.y(); ++y)
          for (int x = 0; x < d.x(); ++x) {
            Vec3i local(x, y, z);
            if (!frontierVoxelOracle(grid, local)) continue;
            if (gcm.visited(gcm.cellOf(grid.indexToCenter(local)))) continue;
            expect_voxels.push_back(grid.localToWorldVoxel(local));
          }
      auto expect = clusterOracle(expect_voxels, fcfg.min_cluster_voxels);
      REQUIRE(frontierSets(fm) == expect);
    }
  }
}

TEST_CASE("incremental update: stable ids, whole-frontier invalidation") {
  FrontierConfig fcfg = frontierCfg();
  SensorConfig scfg = sensorCfg();
  SpatialConnectivityGraph scg;
  scg.addNode(cubeNode(Vec3(2, 2, 1), 10.0));
  GlobalCoverageMask gcm(1.0, 0.1, 0.05);

  VoxelGrid grid(Vec3(0, 0, 0), Vec3i(40, 40, 20), 0.1);
  for (int z = 0; z < 20; ++z)
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 20; ++x) grid.set(Vec3i(x, y, z), VoxelState::Free);

  FrontierMap fm(fcfg, scfg);
  fm.update(grid, gcm, grid.bounds(), scg, Vec3(1, 2, 1));
  REQUIRE(fm.frontiers().size() == 1);
  int id0 = fm.frontiers().begin()->first;
  auto members0 = fm.frontiers().begin()->second.voxels;
  Pose vp0 = fm.frontiers().begin()->second.viewpoint;

  // nothing changed: same frontier, same id, same viewpoint
  fm.update(grid, gcm, grid.bounds(), scg, Vec3(1, 2, 1));
  REQUIRE(fm.frontiers().size() == 1);
  CHECK(fm.frontiers().begin()->first == id0);
  CHECK(fm.frontiers().begin()->second.voxels == members0);
  CHECK((fm.frontiers().begin()->second.viewpoint.position - vp0.position).norm() == 0.0);

  // reveal the seam: the old frontier dies whole, a new one forms deeper in
  for (int z = 0; z < 20; ++z)
    for (int y = 0; y < 40; ++y)
      for (int x = 20; x < 30; ++x) grid.set(Vec3i(x, y, z), VoxelState::Free);
  fm.update(grid, gcm, grid.bounds(), scg, Vec3(1, 2, 1));
  REQUIRE(fm.frontiers().size() == 1);
  CHECK(fm.frontiers().begin()->first != id0);
  for (const auto& [id, f] : fm.frontiers())
    for (const Vec3i& w : f.voxels)
      CHECK(frontierVoxelOracle(grid, grid.worldToLocalVoxel(w)));
}

TEST_CASE("visited coverage cells suppress re-extraction") {
  FrontierConfig fcfg = frontierCfg();
  SensorConfig scfg = sensorCfg();
  SpatialConnectivityGraph scg;
  scg.addNode(cubeNode(Vec3(1.5, 1.5, 1), 10.0));

  VoxelGrid grid(Vec3(0, 0, 0), Vec3i(30, 30, 20), 0.1, VoxelState::Free);
  GlobalCoverageMask gcm(1.0, 0.1, 0.05);
  gcm.update(grid);  // everything swept: all cells visited

  // forget the map (fresh unknowns) but keep the sticky mask
  VoxelGrid fresh(Vec3(0, 0, 0), Vec3i(30, 30, 20), 0.1);
  for (int z = 0; z < 20; ++z)
    for (int y = 0; y < 30; ++y)
      for (int x = 0; x < 15; ++x) fresh.set(Vec3i(x, y, z), VoxelState::Free);

  FrontierMap fm(fcfg, scfg);
  fm.update(fresh, gcm, fresh.bounds(), scg, Vec3(1, 1, 1));
  CHECK(fm.frontiers().empty());
}

TEST_CASE("viewpoints look through the doorway at the pocket") {
  FrontierConfig fcfg = frontierCfg();
  SensorConfig scfg = sensorCfg();
  SpatialConnectivityGraph scg;
  scg.addNode(cubeNode(Vec3(2, 2, 1), 10.0));

  // free hall x<2.4; wall slab at x in [2.4, 2.6] with a doorway; unknown pocket beyond
  VoxelGrid grid(Vec3(0, 0, 0), Vec3i(40, 40, 20), 0.1);
  for (int z = 0; z < 20; ++z)
    for (int y = 0; y < 40; ++y) {
      for (int x = 0; x < 24; ++x) grid.set(Vec3i(x, y, z), VoxelState::Free);
      for (int x = 24; x < 26; ++x) grid.set(Vec3i(x, y, z), VoxelState::Occupied);
    }
  // doorway: free gap in the wall around y ~ 2.0, z ~ 1.0
  for (int z = 6; z < 14; ++z)
    for (int y = 16; y < 24; ++y)
      for (int x = 24; x < 26; ++x) grid.set(Vec3i(x, y, z), VoxelState::Free);
  // a strip of free floor just past the door so a frontier forms there
  for (int z = 6; z < 14; ++z)
    for (int y = 16; y < 24; ++y) grid.set(Vec3i(26, y, z), VoxelState::Free);

  GlobalCoverageMask gcm(1.0, 0.1, 0.05);
  FrontierMap fm(fcfg, scfg);
  fm.update(grid, gcm, grid.bounds(), scg, Vec3(1, 2, 1));

  REQUIRE_FALSE(fm.frontiers().empty());
  // pick the cluster past the doorway
  const Frontier* pocket = nullptr;
  for (const auto& [id, f] : fm.frontiers())
    if (f.centroid.x() > 2.55) pocket = &f;
  REQUIRE(pocket != nullptr);
  REQUIRE_FALSE(pocket->dormant);

  Vec3i vp_voxel = grid.worldToIndex(pocket->viewpoint.position);
  CHECK(grid.at(vp_voxel) == VoxelState::Free);
  CHECK(pocket->gain > 0.0);
  // faces the unknown side
  CHECK(std::abs(wrapAngle(pocket->viewpoint.yaw -
                           std::atan2(pocket->centroid.y() - pocket->viewpoint.position.y(),
                                      pocket->centroid.x() - pocket->viewpoint.position.x()))) <
        1e-9);

  // stored gain equals the full-scan oracle at the chosen pose
  CHECK(pocket->gain == gainOracle(grid, pocket->viewpoint.position, pocket->viewpoint.yaw,
                                   fcfg, scfg));

  // and no other ring candidate beats it (oracle-evaluated argmax)
  double best = -1.0;
  for (double r : fcfg.ring_radii)
    for (int k = 0; k < fcfg.ring_yaw_samples; ++k) {
      double theta = 2.0 * M_PI * k / fcfg.ring_yaw_samples;
      Vec3 pos = pocket->centroid + r * Vec3(std::cos(theta), std::sin(theta), 0.0);
      if (grid.at(grid.worldToIndex(pos)) != VoxelState::Free || !grid.inBounds(pos)) continue;
      Vec3 to = pocket->centroid - pos;
      double dist = to.norm();
      auto rr = grid.castRay(pos, to / dist, dist, blocksOccupiedOrUnknown);
      if (rr.outcome == VoxelGrid::RayOutcome::Hit && rr.t < dist - 1.5 * grid.resolution())
        continue;
      best = std::max(best, gainOracle(grid, pos, std::atan2(to.y(), to.x()), fcfg, scfg));
    }
  CHECK(pocket->gain == best);
}

TEST_CASE("boxed-in frontier goes dormant, then wakes when space opens") {
  FrontierConfig fcfg = frontierCfg();
  SensorConfig scfg = sensorCfg();
  SpatialConnectivityGraph scg;
  scg.addNode(cubeNode(Vec3(2, 2, 1), 10.0));

  // everything occupied except a thin free column touching unknown
  VoxelGrid grid(Vec3(0, 0, 0), Vec3i(40, 40, 20), 0.1, VoxelState::Occupied);
  for (int z = 8; z < 12; ++z)
    for (int y = 19; y < 22; ++y)
      for (int x = 19; x < 22; ++x) grid.set(Vec3i(x, y, z), VoxelState::Free);
  for (int z = 8; z < 12; ++z)
    for (int y = 19; y < 22; ++y) grid.set(Vec3i(22, y, z), VoxelState::Unknown);

  GlobalCoverageMask gcm(1.0, 0.1, 0.05);
  FrontierMap fm(fcfg, scfg);
  fm.update(grid, gcm, grid.bounds(), scg, Vec3(2, 2, 1));

  REQUIRE(fm.frontiers().size() == 1);
  int id = fm.frontiers().begin()->first;
  CHECK(fm.frontiers().at(id).dormant);
  CHECK(fm.frontiers().at(id).gain == 0.0);

  // open the hall: ring positions become free, the frontier wakes
  for (int z = 0; z < 20; ++z)
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 22; ++x) grid.set(Vec3i(x, y, z), VoxelState::Free);
  fm.update(grid, gcm, Box(Vec3(5, 5, 5), Vec3(5, 5, 5)), scg, Vec3(2, 2, 1));
  REQUIRE(fm.frontiers().count(id) == 1);
  CHECK_FALSE(fm.frontiers().at(id).dormant);
  CHECK(fm.frontiers().at(id).gain > 0.0);
}

TEST_CASE("anchor and region resolve through the graph") {
  FrontierConfig fcfg = frontierCfg();
  SensorConfig scfg = sensorCfg();

  VoxelGrid grid(Vec3(0, 0, 0), Vec3i(30, 30, 16), 0.1);
  for (int z = 0; z < 16; ++z)
    for (int y = 0; y < 30; ++y)
      for (int x = 0; x < 15; ++x) grid.set(Vec3i(x, y, z), VoxelState::Free);
  GlobalCoverageMask gcm(1.0, 0.1, 0.05);

  SUBCASE("no graph yet: provisional region zero") {
    SpatialConnectivityGraph scg;
    FrontierMap fm(fcfg, scfg);
    fm.update(grid, gcm, grid.bounds(), scg, Vec3(1, 1, 1));
    REQUIRE_FALSE(fm.frontiers().empty());
    int fid = fm.frontiers().begin()->first;
    CHECK(fm.frontiers().at(fid).anchor_node == -1);
    CHECK(fm.regionOf(fid, scg) == 0);
  }

  SUBCASE("region relabeling shows up on re-read") {
    SpatialConnectivityGraph scg;
    scg.addNode(cubeNode(Vec3(0.7, 0.7, 0.8), 1.0));
    scg.addNode(cubeNode(Vec3(5.0, 5.0, 0.8), 1.0));
    FrontierMap fm(fcfg, scfg);
    fm.update(grid, gcm, grid.bounds(), scg, Vec3(0.7, 0.7, 0.8));
    REQUIRE_FALSE(fm.frontiers().empty());
    int fid = fm.frontiers().begin()->first;
    CHECK(fm.frontiers().at(fid).anchor_node == 0);
    CHECK(fm.regionOf(fid, scg) == 0);  // nothing partitioned yet

    scg.node(0).region_id = 4;
    CHECK(fm.regionOf(fid, scg) == 4);
    scg.node(0).region_id = 9;
    CHECK(fm.regionOf(fid, scg) == 9);
  }
}

TEST_CASE("repeated reveal drives the frontier set to empty") {
  FrontierConfig fcfg = frontierCfg();
  SensorConfig scfg = sensorCfg();
  SpatialConnectivityGraph scg;
  scg.addNode(cubeNode(Vec3(2, 2, 1), 10.0));

  VoxelGrid grid(Vec3(0, 0, 0), Vec3i(30, 30, 12), 0.1);
  for (int z = 0; z < 12; ++z)
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x) grid.set(Vec3i(x, y, z), VoxelState::Free);

  GlobalCoverageMask gcm(1.0, 0.1, 0.05);
  FrontierMap fm(fcfg, scfg);
  fm.update(grid, gcm, grid.bounds(), scg, Vec3(0.4, 0.4, 0.6));

  int steps = 0;
  while (!fm.frontiers().empty() && steps < 200) {
    // walk to the first live frontier and reveal a ball around its viewpoint
    const Frontier* target = nullptr;
    for (const auto& [id, f] : fm.frontiers())
      if (!f.dormant) target = &f;
    REQUIRE(target != nullptr);
    Vec3 at = target->viewpoint.position;
    const Vec3i& d = grid.dims();
    for (int z = 0; z < d.z(); ++z)
      for (int y = 0; y < d.y(); ++y)
        for (int x = 0; x < d.x(); ++x) {
          Vec3i idx(x, y, z);
          if ((grid.indexToCenter(idx) - at).norm() <= 1.6 &&
              grid.at(idx) == VoxelState::Unknown)
            grid.set(idx, VoxelState::Free);
        }
    Box ball(at - Vec3(1.6, 1.6, 1.6), at + Vec3(1.6, 1.6, 1.6));
    gcm.update(grid);
    fm.update(grid, gcm, ball, scg, at);
    ++steps;
  }
  CHECK(fm.frontiers().empty());
  // leftover unknowns are only ever hidden behind the visited mask or stuck
  // in clusters too small to keep
  std::vector<Vec3i> leftovers;
  const Vec3i& d = grid.dims();
  for (int z = 0; z < d.z(); ++z)
    for (int y = 0; y < d.y(); ++y)
      for (int x = 0; x < d.x(); ++x) {
        Vec3i local(x, y, z);
        if (!frontierVoxelOracle(grid, local)) continue;
        if (gcm.visited(gcm.cellOf(grid.indexToCenter(local)))) continue;
        leftovers.push_back(grid.localToWorldVoxel(local));
      }
  CHECK(clusterOracle(leftovers, fcfg.min_cluster_voxels).empty());
}
