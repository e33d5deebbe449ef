#pragma once

#include "ssnav/core/config.hpp"
#include "ssnav/frontier/frontier.hpp"
#include "ssnav/objects/object_map.hpp"
#include "ssnav/planner/context.hpp"
#include "ssnav/planner/reasoner.hpp"
#include "ssnav/scg/polyhedron.hpp"
#include "ssnav/sim/voxel_grid.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ssnav {

struct Decision {
  enum class Kind { GotoRegion, Done, Fallback };
  Kind kind = Kind::Fallback;
  int region_id = -1;  // GotoRegion target
  int object_id = -1;  // Done target
};

std::string decisionToString(const Decision& d);  // "goto:3" | "done:1" | "fallback"

// Best task match over the object layer, if any clears the done threshold.
// Ties break to the smaller object id.
std::optional<int> taskMatch(const ObjectMap& objects, const std::string& task, double done_match);

// DONE precheck, then backend reply validation. Malformed replies,
// abstentions, unknown regions, regions without active frontiers, and done
// claims that fail the match rule all degrade to FALLBACK. Never throws.
Decision selectTargetRegion(const PlannerContext& ctx, const ParsedReply& reply,
                            const ObjectMap& objects, const PlannerConfig& cfg);

// True when no in-window voxel the segment passes through is non-Free.
// Voxels outside the window are not checked: space there was certified free
// when its SCG hull was built.
bool segmentFree(const VoxelGrid& grid, const Vec3& a, const Vec3& b);

// Dijkstra over SCG nodes with Euclidean centroid-to-centroid edge lengths
// (every edge kind is traversable; the stored edge weight is a clustering
// quantity, not a travel cost), start/goal attached to their containing or
// near (<= 0.3 m outside) hulls, straight-line shortcutting, and grid repair
// of any blocked segment. nullopt when no route exists.
std::optional<std::vector<Vec3>> pathSearch(const SpatialConnectivityGraph& scg,
                                            const VoxelGrid& grid, const Vec3& start,
                                            const Vec3& goal);

// A* over in-window Free voxels, 26-connected with metric step costs;
// diagonal steps are taken only when the straight segment between the two
// centers is itself free, so the returned chain is collision-free.
std::optional<std::vector<Vec3>> gridShortestPath(const VoxelGrid& grid, const Vec3& start,
                                                  const Vec3& goal);

double pathLength(const std::vector<Vec3>& waypoints);

struct TspPlan {
  std::vector<int> order;     // frontier ids in visit order
  std::vector<int> excluded;  // unreachable, dropped with a warning
  double cost = 0.0;          // tour cost under c()
};

// Open-path tour from start over c(i,j) = path_cost(i,j) - lambda*gain(j)/100
// (lambda per hundred unknown voxels). Exact branch-and-bound up to 10
// frontiers, nearest-neighbor + 2-opt beyond.
TspPlan tspOrder(const std::vector<const Frontier*>& frontiers, const Vec3& start,
                 const SpatialConnectivityGraph& scg, const VoxelGrid& grid,
                 const PlannerConfig& cfg);

// Global utility fallback: argmax over active frontiers of gain / path
// length. nullopt when none is reachable.
std::optional<int> bestFrontierByUtility(const std::map<int, Frontier>& frontiers,
                                         const Vec3& from, const SpatialConnectivityGraph& scg,
                                         const VoxelGrid& grid);

}  // namespace ssnav
