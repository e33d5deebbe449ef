#include "ssnav/runner/exports.hpp"

#include <json.hpp>

#include <cmath>

namespace ssnav {

namespace {

nlohmann::json vecJson(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

double round3(double x) {
  double r = std::round(x * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

nlohmann::json vecJson3(const Vec3& v) {
  return nlohmann::json::array({round3(v.x()), round3(v.y()), round3(v.z())});
}

const char* kindName(VertexKind k) { return k == VertexKind::Contact ? "contact" : "free"; }

const char* kindName(EdgeKind k) {
  switch (k) {
    case EdgeKind::Parent:
      return "parent";
    case EdgeKind::Collision:
      return "collision";
    case EdgeKind::Visibility:
      break;
  }
  return "visibility";
}

}  // namespace

std::string exportScg(const SpatialConnectivityGraph& scg, const std::map<int, Region>& regions) {
  nlohmann::json doc;
  auto nodes = nlohmann::json::array();
  for (const auto& n : scg.nodes()) {
    nlohmann::json j;
    j["id"] = n.id;
    j["seed"] = vecJson(n.seed);
    j["centroid"] = vecJson(n.centroid);
    j["region_id"] = n.region_id;
    auto verts = nlohmann::json::array();
    for (const auto& v : n.vertices)
      verts.push_back({{"kind", kindName(v.kind)}, {"pos", vecJson(v.position)}});
    j["vertices"] = verts;
    auto faces = nlohmann::json::array();
    for (const auto& f : n.faces) faces.push_back(nlohmann::json::array({f[0], f[1], f[2]}));
    j["faces"] = faces;
    nodes.push_back(j);
  }
  doc["nodes"] = nodes;

  auto edges = nlohmann::json::array();
  for (const auto& e : scg.edges())
    edges.push_back({{"a", e.a}, {"b", e.b}, {"kind", kindName(e.kind)}, {"weight", e.weight}});
  doc["edges"] = edges;

  auto regs = nlohmann::json::array();
  for (const auto& [rid, r] : regions) {
    nlohmann::json j;
    j["id"] = rid;
    j["members"] = std::vector<int>(r.members.begin(), r.members.end());
    j["description"] = r.description;
    j["visited"] = r.visited;
    regs.push_back(j);
  }
  doc["regions"] = regs;
  return doc.dump();
}

std::string exportObjects(const ObjectMap& objects, const SpatialConnectivityGraph& scg) {
  nlohmann::json doc;
  auto arr = nlohmann::json::array();
  for (const auto& o : objects.objects()) {
    nlohmann::json j;
    j["id"] = o.id;
    j["label"] = o.label;
    j["position"] = vecJson3(o.centroid);
    j["size"] = vecJson3(o.bbox.max() - o.bbox.min());
    j["anchor_node"] = o.anchor_node;
    j["region_id"] = o.anchor_node >= 0 && o.anchor_node < static_cast<int>(scg.size())
                         ? scg.node(o.anchor_node).region_id
                         : 0;
    arr.push_back(j);
  }
  doc["objects"] = arr;
  return doc.dump();
}

std::string exportFrontiers(const FrontierMap& frontiers, const GlobalCoverageMask& gcm,
                            const SpatialConnectivityGraph& scg) {
  nlohmann::json doc;
  auto arr = nlohmann::json::array();
  for (const auto& [fid, f] : frontiers.frontiers()) {
    nlohmann::json j;
    j["id"] = fid;
    j["centroid"] = vecJson(f.centroid);
    j["voxel_count"] = static_cast<int>(f.voxels.size());
    j["viewpoint"] = {{"pos", vecJson(f.viewpoint.position)}, {"yaw", f.viewpoint.yaw}};
    j["gain"] = f.gain;
    j["dormant"] = f.dormant;
    j["region_id"] = frontiers.regionOf(fid, scg);
    arr.push_back(j);
  }
  doc["frontiers"] = arr;

  auto cells = nlohmann::json::array();
  for (const auto& [k, c] : gcm.cells()) {
    nlohmann::json j;
    j["cell_index"] = nlohmann::json::array({k.x(), k.y(), k.z()});
    j["unknown_count"] = c.unknown_count;
    j["visited"] = c.visited;
    cells.push_back(j);
  }
  doc["gcm"] = cells;
  return doc.dump();
}

}  // namespace ssnav
