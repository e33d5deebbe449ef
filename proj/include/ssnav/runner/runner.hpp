#pragma once

#include "ssnav/core/config.hpp"
#include "ssnav/planner/planner.hpp"
#include "ssnav/planner/reasoner.hpp"
#include "ssnav/sim/scene.hpp"
#include "ssnav/sim/voxel_grid.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ssnav {

struct EpisodeConfig {
  SceneSpec scene;
  std::string task;
  Pose start;
  int max_steps = 400;
  std::string reasoner = "heuristic";  // heuristic | mock | llm | none (fallback-only)
  std::string llm_endpoint;
  SystemConfig sys;
  double step_length = 0.4;            // motion budget per cycle
  ReasonerBackend* backend = nullptr;  // injected backend overrides `reasoner`
};

struct StageTimings {
  double sense_ms = 0.0;     // simulated sweep + grid integrate
  double scg_ms = 0.0;
  double partition_ms = 0.0;
  double objects_ms = 0.0;
  double frontier_ms = 0.0;  // coverage mask + frontier tracking
  double plan_ms = 0.0;
  int cycles = 0;
};

struct EpisodeResult {
  bool success = false;
  std::string failure_reason;  // "", "exhausted", "stalled", "max_steps"
  double path_length = 0.0;
  double shortest_length = 0.0;  // ground-truth grid shortest to a success position
  int steps = 0;
  double spl = 0.0;  // this episode's S * l / max(p, l)
  std::vector<std::pair<int, bool>> visits;  // region id, completed flag
  StageTimings timings;                      // wall time; never serialized into logs/exports
  std::string log;                           // NDJSON {t, pose, decision, frontier_id, region_id}
  std::string scg_export;
  std::string objects_export;
  std::string frontiers_export;
};

// Shortest start-to-success distance over the ground-truth grid: multi-goal
// Dijkstra (26-connected, metric steps) to any Free voxel within d_success of
// a target-box centroid with line of sight to it. 0 when the start already
// qualifies or nothing is reachable.
double shortestSuccessLength(const VoxelGrid& truth, const Vec3& start,
                             const std::vector<Box>& targets, double d_success);

// Sense -> integrate -> coverage -> SCG -> partition -> objects -> frontiers
// -> coarse decision -> fine execution, to Done or max_steps. Deterministic
// for the in-process backends. Throws ConfigError on an invalid scene/start.
EpisodeResult runEpisode(const EpisodeConfig& cfg);

double spl(const std::vector<EpisodeResult>& results);  // throws on empty input

struct TaskSpec {
  std::string scene_path;
  std::string task;
  Pose start;
  std::string tag;  // "single" | "multi"
};
// tasks file: {tasks:[{scene, task, start:[x,y,z,yaw], tag}]}; scene paths
// resolve relative to the tasks file
std::vector<TaskSpec> loadTasks(const std::string& path);

struct AblationCell {
  std::vector<double> spls;  // one per trial
  double mean = 0.0;
  double stddev = 0.0;
};

struct AblationRow {
  std::string scene;
  std::string task;
  std::string tag;
  AblationCell hierarchical;   // heuristic coarse reasoner
  AblationCell fallback_only;  // global frontier utility only
  double improvement = 0.0;    // mean(hier) / mean(fallback) - 1
};

// Runs every task under both modes with matched per-trial start jitter.
std::vector<AblationRow> runAblation(const std::vector<TaskSpec>& tasks, int trials,
                                     const SystemConfig& sys);
std::string ablationTable(const std::vector<AblationRow>& rows);  // TSV
std::string ablationJson(const std::vector<AblationRow>& rows);

struct BenchReport {
  int cycles = 0;
  double median_ms = 0.0;  // integrate + SCG + objects + coverage/frontier per cycle
  double p95_ms = 0.0;
  double integrate_median_ms = 0.0;
  double scg_median_ms = 0.0;
  double objects_median_ms = 0.0;
  double frontier_median_ms = 0.0;
};

// trajectory file: {poses:[[x,y,z,yaw], ...]}
std::vector<Pose> loadTrajectory(const std::string& path);
std::string trajectoryJson(const std::vector<Pose>& poses);

// Replays the trajectory through the perception-mapping stack (no planner)
// and reports per-cycle wall-time statistics.
BenchReport benchUpdateRate(const SceneSpec& scene, const std::vector<Pose>& trajectory,
                            const SystemConfig& sys);
std::string benchReportJson(const BenchReport& r);

}  // namespace ssnav
