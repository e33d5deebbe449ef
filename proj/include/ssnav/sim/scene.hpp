#pragma once

#include "ssnav/core/geometry.hpp"
#include "ssnav/sim/voxel_grid.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ssnav {

struct SceneObject {
  std::string label;
  Box box;
};

struct SceneRoom {
  std::string name;
  Box box;
};

// Synthetic world description. Rooms and the adjacency list are evaluation /
// reasoner-hint metadata; obstacles and object boxes are the physical content.
struct SceneSpec {
  Box bounds;
  std::vector<Box> obstacles;
  std::vector<SceneObject> objects;
  std::vector<SceneRoom> rooms;
  std::vector<std::pair<std::string, std::string>> adjacency;
  std::string name;

  void validate() const;
  static SceneSpec loadFromFile(const std::string& path);
  static SceneSpec fromJsonText(const std::string& text);
  std::string toJsonText() const;
};

// Ground-truth occupancy covering the scene bounds: a voxel is Occupied iff
// its center lies inside any obstacle or object box, Free otherwise.
VoxelGrid rasterizeScene(const SceneSpec& spec, double resolution);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ssnav
