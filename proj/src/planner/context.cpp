#include "ssnav/planner/context.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ssnav {

namespace {

double round3(double x) {
  double r = std::round(x * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;  // fold -0
}

nlohmann::json vec3Json(const Vec3& v) {
  return nlohmann::json::array({round3(v.x()), round3(v.y()), round3(v.z())});
}

std::string signatureOf(const std::set<int>& members, const std::vector<ObjectSummary>& objs) {
  std::ostringstream ss;
  for (int m : members) ss << m << ',';
  ss << '|';
  for (const auto& o : objs) ss << o.id << ':' << o.label << ',';
  return ss.str();
}

}  // namespace

std::string describeObjects(const std::vector<ObjectSummary>& objs) {
  if (objs.empty()) return "unfurnished area";
  std::map<std::string, int> counts;
  for (const auto& o : objs) ++counts[o.label];
  std::string out = "area with:";
  bool first = true;
  for (const auto& [label, n] : counts) {
    out += first ? " " : ", ";
    out += label + " x" + std::to_string(n);
    first = false;
  }
  return out;
}

std::string DescriptionStore::describe(int region_id, const std::set<int>& members,
                                       const RegionContext& rc, const DescribeFn& fn) {
  const std::string sig = signatureOf(members, rc.objects);
  auto it = entries_.find(region_id);
  if (it != entries_.end() && it->second.signature == sig) return it->second.text;

  ++recomputes_;
  if (fn) {
    if (auto text = fn(rc)) {
      entries_[region_id] = {sig, *text};
      return *text;
    }
    if (it != entries_.end()) return it->second.text;  // retain; change stays pending
    // nothing to retain yet: provisional template, empty signature forces a retry
    entries_[region_id] = {std::string(), describeObjects(rc.objects)};
    return entries_[region_id].text;
  }
  entries_[region_id] = {sig, describeObjects(rc.objects)};
  return entries_[region_id].text;
}

void DescriptionStore::prune(const std::set<int>& live_regions) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (live_regions.count(it->first) == 0)
      it = entries_.erase(it);
    else
      ++it;
  }
}

PlannerContext buildPlannerContext(const SpatialConnectivityGraph& scg,
                                   const std::map<int, Region>& regions, const ObjectMap& objects,
                                   const FrontierMap& frontiers, const Vec3& observer,
                                   const std::string& task,
                                   const std::vector<int>& visit_history,
                                   DescriptionStore& store) {
  PlannerContext ctx;
  ctx.task = task;
  ctx.visit_history = visit_history;

  std::map<int, RegionContext> rcs;
  for (const auto& [rid, region] : regions) {
    (void)region;
    rcs[rid].id = rid;
  }

  // region adjacency = SCG edges crossing a region boundary
  std::map<int, std::set<int>> adj;
  for (const auto& e : scg.edges()) {
    int ra = scg.node(e.a).region_id;
    int rb = scg.node(e.b).region_id;
    if (ra > 0 && rb > 0 && ra != rb) {
      adj[ra].insert(rb);
      adj[rb].insert(ra);
    }
  }

  for (const auto& obj : objects.objects()) {
    int rid = obj.anchor_node >= 0 && obj.anchor_node < static_cast<int>(scg.size())
                  ? scg.node(obj.anchor_node).region_id
                  : 0;
    auto it = rcs.find(rid);
    if (it == rcs.end()) continue;  // anchored outside any region
    ObjectSummary s;
    s.id = obj.id;
    s.label = obj.label;
    s.position = obj.centroid;
    s.size = obj.bbox.max() - obj.bbox.min();
    it->second.objects.push_back(s);
  }

  for (const auto& [fid, f] : frontiers.frontiers()) {
    if (f.dormant) continue;
    auto it = rcs.find(frontiers.regionOf(fid, scg));
    if (it != rcs.end()) ++it->second.frontier_count;
  }

  std::set<int> live;
  for (auto& [rid, rc] : rcs) {
    live.insert(rid);
    if (auto it = adj.find(rid); it != adj.end())
      rc.adjacent.assign(it->second.begin(), it->second.end());
    std::sort(rc.objects.begin(), rc.objects.end(),
              [](const ObjectSummary& a, const ObjectSummary& b) { return a.id < b.id; });
    rc.description = store.describe(rid, regions.at(rid).members, rc);
    ctx.regions.push_back(rc);
  }
  store.prune(live);

  int cur_node = scg.empty() ? -1 : scg.locate(observer);
  ctx.current_region = cur_node >= 0 ? scg.node(cur_node).region_id : 0;
  for (const auto& rc : ctx.regions)
    if (rc.id == ctx.current_region) ctx.current_description = rc.description;
  return ctx;
}

std::string serializeContext(const PlannerContext& ctx) {
  nlohmann::json doc;
  doc["current_area"] = {{"description", ctx.current_description}, {"id", ctx.current_region}};
  doc["task"] = ctx.task;
  doc["visit_history"] = ctx.visit_history;

  auto regions = nlohmann::json::array();
  for (const auto& rc : ctx.regions) {
    nlohmann::json r;
    r["id"] = rc.id;
    r["description"] = rc.description;
    r["adjacent"] = rc.adjacent;
    r["frontier_count"] = rc.frontier_count;
    auto objs = nlohmann::json::array();
    for (const auto& o : rc.objects) {
      nlohmann::json j;
      j["label"] = o.label;
      j["position"] = vec3Json(o.position);
      j["size"] = vec3Json(o.size);
      objs.push_back(j);
    }
    r["objects"] = objs;
    regions.push_back(r);
  }
  doc["regions"] = regions;

  if (!ctx.adjacency_prior.empty()) {
    auto prior = nlohmann::json::array();
    for (auto [a, b] : ctx.adjacency_prior) prior.push_back(nlohmann::json::array({a, b}));
    doc["adjacency_prior"] = prior;
  }
  return doc.dump();
}

}  // namespace ssnav
