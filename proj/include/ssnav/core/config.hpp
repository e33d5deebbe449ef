#pragma once

#include "ssnav/core/geometry.hpp"

#include <cstdint>
#include <vector>

namespace ssnav {

struct SensorConfig {
  double fov_h_deg = 80.0;
  double fov_v_deg = 60.0;
  double max_range = 3.5;  // kept below half the grid window so the frontier band stays interior
  int rays_h = 96;
  int rays_v = 64;
  int k_min_detection = 10;  // min visible surface points to emit a detection
  double depth_noise_sigma = 0.0;
};

struct GridConfig {
  Vec3 window_size{8.0, 8.0, 4.0};
  double resolution = 0.1;
};

struct ScgConfig {
  int n_directions = 50;
  double r_max = 1.4;            // max expansion radius
  double d_max = 2.0;            // max seed extension along a boundary normal
  double r_vis = 3.0;            // visibility-edge radius
  double r_safe = 0.3;           // seed clearance from occupied voxels
  double t_min = 0.4;            // min seed extension to accept
  int max_cluster_faces = 12;
  double theta_split_deg = 60.0;
  double eps_forced = 0.01;      // weight of forced (parent-without-overlap) edges
  uint64_t jitter_seed = 0x5eed0123;
};

struct RegionConfig {
  double resolution_gamma = 0.02;  // modularity resolution
  double merge_density_factor = 0.5;
  uint64_t rng_seed = 17;
};

struct ObjectConfig {
  double tau = 0.1;             // geometric-match distance
  double assoc_radius = 2.0;    // candidate query radius around a detection centroid
  double sem_match = 0.75;
  double geo_weak = 0.1;
  double geo_strong = 0.5;
  double downsample_leaf = 0.05;
};

struct FrontierConfig {
  double cell_size = 1.0;        // coverage-mask cell edge
  double visited_fraction = 0.05;  // unknown fraction below which a cell is visited
  int min_cluster_voxels = 5;
  std::vector<double> ring_radii{0.5, 1.0, 1.5};
  int ring_yaw_samples = 16;
  double gain_range = 2.0;       // radius for visible-unknown counting
};

struct PlannerConfig {
  double lambda_gain = 0.5;     // meters of path discount per hundred unknown voxels
  double done_match = 0.75;     // task/object cosine threshold for declaring done
  double d_success = 1.5;
  double adjacency_bonus = 0.1;
  double visit_penalty = 0.2;
  double llm_timeout_s = 10.0;
};

struct SystemConfig {
  SensorConfig sensor;
  GridConfig grid;
  ScgConfig scg;
  RegionConfig region;
  ObjectConfig object;
  FrontierConfig frontier;
  PlannerConfig planner;
  uint64_t seed = 0;
};

}  // namespace ssnav
