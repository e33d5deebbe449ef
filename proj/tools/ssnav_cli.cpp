// Command-line front end: run episodes, ablations, benchmarks, exports.
#include "ssnav/runner/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace ssnav;

namespace {

int writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return 3;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ssnav: semantic spatial navigation pipeline"};
  app.require_subcommand(1);

  std::string scene_path, task, reasoner = "heuristic", llm_endpoint, out_path, log_path;
  std::string scenes_dir, trajectory_path, what;
  int seed = 0, trials = 5, max_steps = 400;

  auto* run = app.add_subcommand("run", "run a single object-navigation episode");
  run->add_option("--scene", scene_path, "scene json file")->required();
  run->add_option("--task", task, "natural-language goal")->required();
  run->add_option("--seed", seed, "episode seed");
  std::vector<double> start{1.0, 1.0, 1.2, 0.0};
  run->add_option("--pose", start, "start pose x y z yaw")->expected(4);
  run->add_option("--reasoner", reasoner, "heuristic|llm|mock|none");
  run->add_option("--llm-endpoint", llm_endpoint, "host:port/path for --reasoner llm");
  run->add_option("--max-steps", max_steps, "cycle budget");
  run->add_option("--log", log_path, "write per-cycle log to file");

  auto* ablate = app.add_subcommand("ablate", "hierarchical vs fallback-only comparison");
  ablate->add_option("--scenes", scenes_dir, "directory containing tasks.json")->required();
  ablate->add_option("--trials", trials, "trials per task");
  ablate->add_option("--out", out_path, "also write the table as json");

  auto* bench = app.add_subcommand("bench", "mapping update-rate benchmark");
  bench->add_option("--scene", scene_path, "scene json file")->required();
  bench->add_option("--trajectory", trajectory_path, "pose trajectory json")->required();

  auto* exp = app.add_subcommand("export", "run an episode, dump one structured doc");
  exp->add_option("--scene", scene_path, "scene json file")->required();
  exp->add_option("--task", task, "natural-language goal")->required();
  exp->add_option("--what", what, "scg|regions|objects|frontiers")->required();
  exp->add_option("--out", out_path, "output file")->required();
  exp->add_option("--pose", start, "start pose x y z yaw")->expected(4);
  exp->add_option("--seed", seed, "episode seed");
  exp->add_option("--max-steps", max_steps, "cycle budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() || exp->parsed()) {
      EpisodeConfig ec;
      ec.scene = SceneSpec::loadFromFile(scene_path);
      ec.task = task;
      ec.start.position = Vec3(start[0], start[1], start[2]);
      ec.start.yaw = start[3];
      ec.max_steps = max_steps;
      ec.reasoner = reasoner;
      ec.llm_endpoint = llm_endpoint;
      ec.sys.seed = static_cast<uint64_t>(seed);
      EpisodeResult r = runEpisode(ec);

      if (exp->parsed()) {
        std::string doc;
        if (what == "scg" || what == "regions")
          doc = r.scg_export;
        else if (what == "objects")
          doc = r.objects_export;
        else if (what == "frontiers")
          doc = r.frontiers_export;
        else {
          std::cerr << "unknown export kind: " << what << "\n";
          return 3;
        }
        return writeFile(out_path, doc);
      }

      if (!log_path.empty()) {
        int rc = writeFile(log_path, r.log);
        if (rc != 0) return rc;
      }
      std::printf("success=%d steps=%d path=%.2f shortest=%.2f spl=%.3f%s%s\n", r.success ? 1 : 0,
                  r.steps, r.path_length, r.shortest_length, r.spl,
                  r.failure_reason.empty() ? "" : " reason=", r.failure_reason.c_str());
      return r.success ? 0 : 2;
    }

    if (ablate->parsed()) {
      auto tasks = loadTasks((std::filesystem::path(scenes_dir) / "tasks.json").string());
      SystemConfig sys;
      auto rows = runAblation(tasks, trials, sys);
      std::cout << ablationTable(rows);
      if (!out_path.empty()) return writeFile(out_path, ablationJson(rows));
      return 0;
    }

    if (bench->parsed()) {
      SceneSpec scene = SceneSpec::loadFromFile(scene_path);
      auto traj = loadTrajectory(trajectory_path);
      SystemConfig sys;
      BenchReport r = benchUpdateRate(scene, traj, sys);
      std::printf("cycles=%d median_ms=%.2f p95_ms=%.2f integrate=%.2f scg=%.2f objects=%.2f frontier=%.2f\n",
                  r.cycles, r.median_ms, r.p95_ms, r.integrate_median_ms, r.scg_median_ms,
                  r.objects_median_ms, r.frontier_median_ms);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
