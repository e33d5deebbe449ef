#include "ssnav/sim/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ssnav {

namespace {

using nlohmann::json;

Box boxFromJson(const json& j) {
  if (!j.is_array() || j.size() != 2 || j[0].size() != 3 || j[1].size() != 3)
    throw ConfigError("box must be [[minx,miny,minz],[maxx,maxy,maxz]]");
  return Box(Vec3(j[0][0], j[0][1], j[0][2]), Vec3(j[1][0], j[1][1], j[1][2]));
}

json boxToJson(const Box& b) {
  return json::array({{b.min().x(), b.min().y(), b.min().z()},
                      {b.max().x(), b.max().y(), b.max().z()}});
}

}  // namespace

void SceneSpec::validate() const {
  if (!boxValid(bounds)) throw ConfigError("scene bounds are degenerate");
  for (const auto& o : obstacles) {
    if (!boxValid(o)) throw ConfigError("degenerate obstacle box");
    if (!bounds.contains(o)) throw ConfigError("obstacle box outside scene bounds");
  }
  for (const auto& o : objects) {
    if (o.label.empty()) throw ConfigError("object with empty label");
    if (!boxValid(o.box)) throw ConfigError("degenerate object box: " + o.label);
    if (!bounds.contains(o.box)) throw ConfigError("object box outside bounds: " + o.label);
  }
  for (const auto& r : rooms) {
    if (r.name.empty()) throw ConfigError("room with empty name");
  }
}

SceneSpec SceneSpec::fromJsonText(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scene parse error: ") + e.what());
  }
  SceneSpec spec;
  try {
    spec.bounds = boxFromJson(j.at("bounds"));
    if (j.contains("name")) spec.name = j["name"].get<std::string>();
    for (const auto& o : j.value("obstacles", json::array())) spec.obstacles.push_back(boxFromJson(o));
    for (const auto& o : j.value("objects", json::array()))
      spec.objects.push_back({o.at("label").get<std::string>(), boxFromJson(o.at("box"))});
    for (const auto& r : j.value("rooms", json::array()))
      spec.rooms.push_back({r.at("name").get<std::string>(), boxFromJson(r.at("box"))});
    for (const auto& a : j.value("adjacency", json::array())) {
      if (!a.is_array() || a.size() != 2) throw ConfigError("adjacency entries must be name pairs");
      spec.adjacency.emplace_back(a[0].get<std::string>(), a[1].get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scene schema error: ") + e.what());
  }
  spec.validate();
  return spec;
}

SceneSpec SceneSpec::loadFromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  SceneSpec spec = fromJsonText(ss.str());
  if (spec.name.empty()) spec.name = path;
  return spec;
}

std::string SceneSpec::toJsonText() const {
  json j;
  j["name"] = name;
  j["bounds"] = boxToJson(bounds);
  j["obstacles"] = json::array();
  for (const auto& o : obstacles) j["obstacles"].push_back(boxToJson(o));
  j["objects"] = json::array();
  for (const auto& o : objects) j["objects"].push_back({{"label", o.label}, {"box", boxToJson(o.box)}});
  j["rooms"] = json::array();
  for (const auto& r : rooms) j["rooms"].push_back({{"name", r.name}, {"box", boxToJson(r.box)}});
  j["adjacency"] = json::array();
  for (const auto& a : adjacency) j["adjacency"].push_back({a.first, a.second});
  return j.dump(2);
}

VoxelGrid rasterizeScene(const SceneSpec& spec, double resolution) {
  if (resolution <= 0.0) throw ConfigError("rasterization resolution must be positive");
  spec.validate();

  const Vec3 extent = spec.bounds.sizes();
  Vec3i dims(static_cast<int>(std::ceil(extent.x() / resolution - 1e-9)),
             static_cast<int>(std::ceil(extent.y() / resolution - 1e-9)),
             static_cast<int>(std::ceil(extent.z() / resolution - 1e-9)));
  VoxelGrid grid(spec.bounds.min(), dims, resolution, VoxelState::Free);

  auto fill = [&](const Box& box) {
    // Index range of voxels whose center lies inside the box (inclusive faces).
    Vec3i lo, hi;
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::max(0, static_cast<int>(std::ceil((box.min()[a] - grid.origin()[a]) / resolution - 0.5 - 1e-9)));
      hi[a] = std::min(dims[a] - 1, static_cast<int>(std::floor((box.max()[a] - grid.origin()[a]) / resolution - 0.5 + 1e-9)));
    }
    for (int z = lo.z(); z <= hi.z(); ++z)
      for (int y = lo.y(); y <= hi.y(); ++y)
        for (int x = lo.x(); x <= hi.x(); ++x) grid.set(Vec3i(x, y, z), VoxelState::Occupied);
  };

  for (const auto& o : spec.obstacles) fill(o);
  for (const auto& o : spec.objects) fill(o.box);
  return grid;
}

}  // namespace ssnav
