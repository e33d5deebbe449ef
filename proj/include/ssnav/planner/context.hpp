#pragma once

#include "ssnav/core/geometry.hpp"
#include "ssnav/frontier/frontier.hpp"
#include "ssnav/objects/object_map.hpp"
#include "ssnav/region/partition.hpp"
#include "ssnav/scg/polyhedron.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ssnav {

struct ObjectSummary {
  int id = -1;  // internal handle; not part of the serialized triple
  std::string label;
  Vec3 position{0.0, 0.0, 0.0};
  Vec3 size{0.0, 0.0, 0.0};
};

struct RegionContext {
  int id = 0;
  std::string description;
  std::vector<int> adjacent;           // sorted neighboring region ids
  int frontier_count = 0;              // active (non-dormant) frontiers anchored here
  std::vector<ObjectSummary> objects;  // sorted by object id
};

// Snapshot handed to the coarse reasoner.
struct PlannerContext {
  int current_region = 0;
  std::string current_description;
  std::vector<int> visit_history;
  std::vector<RegionContext> regions;  // sorted by id
  std::string task;
  std::vector<std::pair<int, int>> adjacency_prior;  // optional scene hints
};

// "area with: clock x2, sofa x1" (labels sorted); empty -> "unfurnished area"
std::string describeObjects(const std::vector<ObjectSummary>& objs);

// One cached description per region, recomputed only when the member set or
// object set changes. An external describe function (e.g. a language backend)
// may override the template; nullopt from it keeps the previous text and
// leaves the change pending so the next cycle retries.
class DescriptionStore {
 public:
  using DescribeFn = std::function<std::optional<std::string>(const RegionContext&)>;

  std::string describe(int region_id, const std::set<int>& members, const RegionContext& rc,
                       const DescribeFn& fn = nullptr);
  int recomputes() const { return recomputes_; }
  void prune(const std::set<int>& live_regions);

 private:
  struct Entry {
    std::string signature;
    std::string text;
  };
  std::map<int, Entry> entries_;
  int recomputes_ = 0;
};

PlannerContext buildPlannerContext(const SpatialConnectivityGraph& scg,
                                   const std::map<int, Region>& regions, const ObjectMap& objects,
                                   const FrontierMap& frontiers, const Vec3& observer,
                                   const std::string& task,
                                   const std::vector<int>& visit_history,
                                   DescriptionStore& store);

// Canonical JSON document: sorted keys, floats rounded to 3 decimals,
// no whitespace. Equal contexts serialize byte-identically.
std::string serializeContext(const PlannerContext& ctx);

}  // namespace ssnav
