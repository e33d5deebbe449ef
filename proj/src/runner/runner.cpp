#include "ssnav/runner/runner.hpp"

#include "ssnav/frontier/frontier.hpp"
#include "ssnav/frontier/gcm.hpp"
#include "ssnav/objects/object_map.hpp"
#include "ssnav/planner/context.hpp"
#include "ssnav/region/partition.hpp"
#include "ssnav/runner/exports.hpp"
#include "ssnav/scg/builder.hpp"
#include "ssnav/sim/embedding.hpp"
#include "ssnav/sim/sensor.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace ssnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kServiceCooldown = 25;  // cycles before a serviced frontier is retried
constexpr int kStallLimit = 12;       // motionless cycles before giving up (exploring)
constexpr int kDoneStallLimit = 24;   // motionless cycles while homing on the object
constexpr double kArriveTol = 0.15;

double round3(double x) {
  double r = std::round(x * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double percentile95(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t idx = static_cast<size_t>(std::ceil(0.95 * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)];
}

// unobstructed view of the box: the ray to its centroid either arrives or
// first hits the box itself
bool losTo(const VoxelGrid& truth, const Vec3& from, const Box& box) {
  Vec3 c = (box.min() + box.max()) * 0.5;
  Vec3 d = c - from;
  double len = d.norm();
  if (len < 1e-9) return true;
  auto rr = truth.castRay(from, d / len, len, blocksOccupied);
  if (rr.outcome != VoxelGrid::RayOutcome::Hit) return true;
  Box inflated(box.min() - Vec3::Constant(0.15), box.max() + Vec3::Constant(0.15));
  return inflated.contains(rr.point);
}

std::vector<Box> taskTargets(const SceneSpec& scene, const std::string& task, double thr) {
  Eigen::VectorXd t = embedLabel(task);
  if (t.norm() < 0.5) return {};
  std::vector<Box> out;
  for (const auto& o : scene.objects)
    if (cosineSimilarity(t, embedLabel(o.label)) > thr) out.push_back(o.box);
  return out;
}

// free pose near the object, high enough to see over furniture; `attempt`
// cycles through bearings when an arrival gives no view of the target
Vec3 approachPoint(const VoxelGrid& window, const Vec3& centroid, const Vec3& from,
                   int attempt) {
  double zc = std::max(centroid.z(), 1.0);
  std::vector<Vec3> cand;
  for (double t = 0.5; t <= 1.51; t += 0.2)
    for (int k = 0; k < 16; ++k) {
      double a = 2.0 * M_PI * k / 16.0;
      Vec3 p = centroid + Vec3(t * std::cos(a), t * std::sin(a), 0.0);
      p.z() = zc;
      if (window.at(p) == VoxelState::Free) cand.push_back(p);
    }
  if (cand.empty()) return from;
  std::sort(cand.begin(), cand.end(), [&](const Vec3& a, const Vec3& b) {
    double da = (a - from).norm(), db = (b - from).norm();
    if (da != db) return da < db;
    if (a.x() != b.x()) return a.x() < b.x();
    return a.y() < b.y();
  });
  return cand[static_cast<size_t>(attempt) % cand.size()];
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

double shortestSuccessLength(const VoxelGrid& truth, const Vec3& start,
                             const std::vector<Box>& targets, double d_success) {
  if (targets.empty()) return 0.0;
  Vec3i s = truth.worldToIndex(start);
  if (!truth.inBounds(s) || truth.at(s) != VoxelState::Free) return 0.0;

  auto qualifies = [&](const Vec3& p) {
    for (const auto& b : targets) {
      Vec3 c = (b.min() + b.max()) * 0.5;
      if ((p - c).norm() > d_success) continue;
      if (losTo(truth, p, b)) return true;
    }
    return false;
  };
  if (qualifies(start)) return 0.0;

  std::vector<double> dist(truth.voxelCount(), kInf);
  using Item = std::pair<double, size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  size_t ls = truth.linearIndex(s);
  dist[ls] = 0.0;
  pq.push({0.0, ls});
  while (!pq.empty()) {
    auto [du, lu] = pq.top();
    pq.pop();
    if (du > dist[lu] + 1e-12) continue;
    Vec3i u = truth.fromLinear(lu);
    Vec3 cu = truth.indexToCenter(u);
    if (qualifies(cu)) return du;  // first qualifying pop is minimal
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          Vec3i v = u + Vec3i(dx, dy, dz);
          if (!truth.inBounds(v) || truth.at(v) != VoxelState::Free) continue;
          size_t lv = truth.linearIndex(v);
          double w = du + truth.resolution() * std::sqrt(double(dx * dx + dy * dy + dz * dz));
          if (w < dist[lv] - 1e-12) {
            dist[lv] = w;
            pq.push({w, lv});
          }
        }
  }
  return 0.0;  // nothing reachable
}

EpisodeResult runEpisode(const EpisodeConfig& cfg) {
  cfg.scene.validate();
  const SystemConfig& sys = cfg.sys;
  const PlannerConfig& pcfg = sys.planner;

  VoxelGrid truth = rasterizeScene(cfg.scene, sys.grid.resolution);
  if (truth.at(cfg.start.position) != VoxelState::Free)
    throw ConfigError("start pose is not in free space");

  const std::vector<Box> targets = taskTargets(cfg.scene, cfg.task, pcfg.done_match);

  EpisodeResult out;
  out.shortest_length =
      shortestSuccessLength(truth, cfg.start.position, targets, pcfg.d_success);

  VoxelGrid window = VoxelGrid::makeWindow(cfg.start.position, sys.grid.window_size,
                                           sys.grid.resolution);
  GlobalCoverageMask gcm(sys.frontier.cell_size, sys.grid.resolution,
                         sys.frontier.visited_fraction);
  ScgBuilder builder(sys.scg);
  RegionPartitioner partitioner(sys.region);
  ObjectMap objects(sys.object);
  FrontierMap frontiers(sys.frontier, sys.sensor);
  DescriptionStore descriptions;

  std::unique_ptr<ReasonerBackend> owned;
  ReasonerBackend* backend = cfg.backend;
  if (backend == nullptr && cfg.reasoner != "none") {
    owned = makeReasoner(cfg.reasoner, pcfg, cfg.llm_endpoint);
    backend = owned.get();
  }

  Pose pose = cfg.start;
  Decision decision;
  bool have_decision = false;
  std::vector<int> tour;
  int fallback_target = -1;
  std::vector<Vec3> wps;
  size_t wp_next = 0;
  Vec3 nav_goal = pose.position;
  bool nav_active = false;
  std::map<int, int> cooldown;  // frontier id -> step when retry is allowed
  int approach_attempt = 0;
  std::vector<int> pending_nodes;  // partition refresh is batched a few cycles
  int last_partition = 0;
  std::vector<int> history_ids;
  PlannerContext snapshot;
  std::set<int> snapshot_regions;
  bool awaiting = false;
  int stall = 0;
  std::ostringstream log;

  auto tick = [] { return std::chrono::steady_clock::now(); };
  auto ms = [](auto a, auto b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };

  auto blacklisted = [&](int fid, int step) {
    auto it = cooldown.find(fid);
    return it != cooldown.end() && step < it->second;
  };
  auto frontierAlive = [&](int fid, int step) {
    auto it = frontiers.frontiers().find(fid);
    return it != frontiers.frontiers().end() && !it->second.dormant && !blacklisted(fid, step);
  };
  auto activeInRegion = [&](int rid, int step) {
    int c = 0;
    for (const auto& [fid, f] : frontiers.frontiers())
      if (!f.dormant && !blacklisted(fid, step) &&
          frontiers.regionOf(fid, builder.scg()) == rid)
        ++c;
    return c;
  };
  auto dropDecision = [&] {
    have_decision = false;
    tour.clear();
    nav_active = false;
  };
  auto successNow = [&] {
    for (const auto& b : targets) {
      Vec3 c = (b.min() + b.max()) * 0.5;
      if ((pose.position - c).norm() <= pcfg.d_success && losTo(truth, pose.position, b))
        return true;
    }
    return false;
  };

  int step = 0;
  for (; step < cfg.max_steps; ++step) {
    // perception + mapping
    window.recenter(pose.position);
    auto t0 = tick();
    SenseResult sr = sense(truth, cfg.scene, pose, sys.sensor);
    integrate(window, pose, sr.rays);
    auto t1 = tick();
    out.timings.sense_ms += ms(t0, t1);
    auto nn = builder.update(window, pose.position);
    auto t2 = tick();
    out.timings.scg_ms += ms(t1, t2);
    pending_nodes.insert(pending_nodes.end(), nn.begin(), nn.end());
    if (!pending_nodes.empty() &&
        (pending_nodes.size() >= std::max<size_t>(8, builder.scg().size() / 8) ||
         step - last_partition >= 12)) {
      partitioner.update(builder.scg(), pending_nodes);
      pending_nodes.clear();
      last_partition = step;
    }
    auto t3 = tick();
    out.timings.partition_ms += ms(t2, t3);
    for (const auto& det : sr.detections) objects.integrate(det, builder.scg());
    auto t4 = tick();
    out.timings.objects_ms += ms(t3, t4);
    gcm.update(window);
    frontiers.update(window, gcm, sr.sensed_region, builder.scg(), pose.position);
    auto t5 = tick();
    out.timings.frontier_ms += ms(t4, t5);
    ++out.timings.cycles;

    const SpatialConnectivityGraph& scg = builder.scg();
    auto tp0 = tick();

    // coarse decision bookkeeping
    bool done_mode = have_decision && decision.kind == Decision::Kind::Done;
    if (!done_mode) {
      if (auto m = taskMatch(objects, cfg.task, pcfg.done_match)) {
        decision = Decision{Decision::Kind::Done, -1, *m};
        have_decision = true;
        done_mode = true;
        tour.clear();
        nav_active = false;
      }
    }
    if (have_decision && decision.kind == Decision::Kind::GotoRegion) {
      int rid = decision.region_id;
      if (partitioner.regions().count(rid) == 0) {
        out.visits.push_back({rid, false});  // region dissolved under us
        history_ids.push_back(rid);
        dropDecision();
      } else if (activeInRegion(rid, step) == 0) {
        out.visits.push_back({rid, true});  // completed
        history_ids.push_back(rid);
        dropDecision();
      }
    }

    if (backend != nullptr) {
      if (awaiting) {
        if (auto reply = backend->poll()) {
          awaiting = false;
          bool snapshot_valid = true;  // applied only if its region ids survived
          for (int rid : snapshot_regions)
            if (partitioner.regions().count(rid) == 0) snapshot_valid = false;
          if (snapshot_valid) {
            Decision d = selectTargetRegion(snapshot, parseReasonerResponse(*reply), objects,
                                            pcfg);
            if (d.kind == Decision::Kind::GotoRegion) {
              if (activeInRegion(d.region_id, step) > 0) {  // re-validate at execution
                decision = d;
                have_decision = true;
                tour.clear();
                nav_active = false;
              }
            } else if (!done_mode) {
              decision = d;  // Done claim or explicit fallback mode
              have_decision = true;
              nav_active = false;
              done_mode = decision.kind == Decision::Kind::Done;
            }
          }
        }
      }
      if (!have_decision && !awaiting) {
        snapshot = buildPlannerContext(scg, partitioner.regions(), objects, frontiers,
                                       pose.position, cfg.task, history_ids, descriptions);
        snapshot_regions.clear();
        for (const auto& rc : snapshot.regions) snapshot_regions.insert(rc.id);
        backend->begin({serializeContext(snapshot), cfg.task});
        awaiting = true;
      }
    } else if (!have_decision) {
      decision = Decision{};  // fallback-only mode
      have_decision = true;
    }
    done_mode = have_decision && decision.kind == Decision::Kind::Done;

    if (done_mode && successNow()) {
      out.success = true;
      break;
    }
    if (frontiers.frontiers().empty() && !done_mode) {
      out.failure_reason = "exhausted";
      break;
    }

    // fine target selection
    int target_fid = -1;
    int trek_fid = -1;
    if (!done_mode) {
      if (have_decision && decision.kind == Decision::Kind::GotoRegion) {
        while (!tour.empty() && !frontierAlive(tour.front(), step)) tour.erase(tour.begin());
        if (tour.empty()) {
          std::vector<const Frontier*> cand;
          for (const auto& [fid, f] : frontiers.frontiers())
            if (!f.dormant && !blacklisted(fid, step) &&
                frontiers.regionOf(fid, scg) == decision.region_id)
              cand.push_back(&f);
          if (!cand.empty()) {
            TspPlan plan = tspOrder(cand, pose.position, scg, window, pcfg);
            tour = plan.order;
          }
          if (tour.empty()) {  // actives exist but none reachable now
            out.visits.push_back({decision.region_id, false});
            history_ids.push_back(decision.region_id);
            dropDecision();
          }
        }
        if (!tour.empty()) target_fid = tour.front();
      }
      if (target_fid < 0) {  // fallback execution (explicit or while awaiting)
        if (!frontierAlive(fallback_target, step)) {
          std::map<int, Frontier> usable;
          for (const auto& [fid, f] : frontiers.frontiers())
            if (!f.dormant && !blacklisted(fid, step)) usable[fid] = f;
          if (usable.empty())  // everything parked; waiting out cooldowns burns steps
            for (const auto& [fid, f] : frontiers.frontiers())
              if (!f.dormant) usable[fid] = f;
          auto best = bestFrontierByUtility(usable, pose.position, scg, window);
          fallback_target = best ? *best : -1;
        }
        target_fid = fallback_target;
        if (target_fid < 0) {
          // everything left is asleep or unreachable from here (outside the
          // window, or un-pathable until it slides); trek toward the nearest
          // frontier so the window reaches it.  unproductive treks get
          // parked, and once all are parked we rotate by expiry so one
          // stubborn sliver cannot pin us in place
          double trek_d = kInf;
          for (const auto& [fid, f] : frontiers.frontiers()) {
            if (blacklisted(fid, step)) continue;
            double d = (f.centroid - pose.position).norm();
            if (d < trek_d - 1e-12) {
              trek_d = d;
              trek_fid = fid;
            }
          }
          if (trek_fid < 0) {
            int best_exp = std::numeric_limits<int>::max();
            for (const auto& [fid, f] : frontiers.frontiers()) {
              auto it = cooldown.find(fid);
              int exp = it == cooldown.end() ? 0 : it->second;
              if (exp < best_exp) {
                best_exp = exp;
                trek_fid = fid;
              }
            }
          }
        }
      }
    }

    // navigation goal
    bool have_goal = false;
    Vec3 goal = pose.position;
    double arrive_yaw = pose.yaw;
    bool yaw_on_arrive = false;
    if (done_mode) {
      if (const SemanticObject* obj = objects.find(decision.object_id)) {
        goal = nav_active ? nav_goal
                          : approachPoint(window, obj->centroid, pose.position, approach_attempt);
        have_goal = true;
      }
    } else if (target_fid >= 0) {
      const Frontier& f = frontiers.frontiers().at(target_fid);
      goal = f.viewpoint.position;
      arrive_yaw = f.viewpoint.yaw;
      yaw_on_arrive = true;
      have_goal = true;
    } else if (trek_fid >= 0 && !scg.empty()) {
      // aim for the hull nearest the sleeping frontier; it lives in mapped
      // free space, and closing in wakes the frontier for normal service
      const Frontier& f = frontiers.frontiers().at(trek_fid);
      double best_d = kInf;
      for (const auto& n : scg.nodes()) {
        double d = (n.centroid - f.centroid).norm();
        if (d < best_d - 1e-12) {
          best_d = d;
          goal = n.centroid;
        }
      }
      have_goal = best_d < kInf;
    }

    // (re)plan when the goal moved or the next leg got blocked
    if (have_goal) {
      bool replan = !nav_active || (nav_goal - goal).norm() > 1e-9;
      if (!replan && wp_next < wps.size() &&
          !segmentFree(window, pose.position, wps[wp_next]))
        replan = true;
      if (replan) {
        auto path = pathSearch(scg, window, pose.position, goal);
        if (path) {
          wps = *path;
          wp_next = 1;  // wps[0] is the current position
          nav_goal = goal;
          nav_active = true;
        } else {
          nav_active = false;
          if (!done_mode && target_fid >= 0) {
            cooldown[target_fid] = step + kServiceCooldown;  // park it, try others
            if (target_fid == fallback_target) fallback_target = -1;
            if (backend != nullptr && have_decision &&
                decision.kind == Decision::Kind::Fallback)
              have_decision = false;  // fallback leg over; consult the reasoner again
          } else if (!done_mode && trek_fid >= 0) {
            cooldown[trek_fid] = step + kServiceCooldown;  // unreachable from here
          }
        }
      }
    } else {
      nav_active = false;
    }
    out.timings.plan_ms += ms(tp0, tick());

    // motion
    Vec3 prev_pos = pose.position;
    if (nav_active) {
      double budget = cfg.step_length;
      while (budget > 1e-9 && wp_next < wps.size()) {
        Vec3 delta = wps[wp_next] - pose.position;
        double d = delta.norm();
        if (d < 1e-9) {
          ++wp_next;
          continue;
        }
        double hop = std::min(d, budget);
        Vec3 dir = delta / d;
        pose.position += dir * hop;
        out.path_length += hop;
        if (std::hypot(dir.x(), dir.y()) > 1e-6) pose.yaw = std::atan2(dir.y(), dir.x());
        budget -= hop;
        if (hop == d) ++wp_next;
      }
      if (wp_next >= wps.size() && (pose.position - nav_goal).norm() <= kArriveTol) {
        nav_active = false;
        if (!done_mode && target_fid >= 0) {
          if (yaw_on_arrive) pose.yaw = arrive_yaw;  // look at the frontier
          cooldown[target_fid] = step + kServiceCooldown;
          if (target_fid == fallback_target) fallback_target = -1;
          if (backend != nullptr && have_decision &&
              decision.kind == Decision::Kind::Fallback)
            have_decision = false;  // fallback leg over; consult the reasoner again
        } else if (!done_mode && trek_fid >= 0) {
          const Frontier& tf = frontiers.frontiers().at(trek_fid);
          if (tf.dormant ||
              !pathSearch(scg, window, pose.position, tf.viewpoint.position))
            cooldown[trek_fid] = step + kServiceCooldown;  // still not serviceable
        } else if (done_mode && !successNow()) {
          ++approach_attempt;  // arrived blind; swing to another bearing
        }
      }
    }

    if (done_mode && successNow()) {
      out.success = true;
      ++step;
      break;
    }

    // stagnation guard
    if ((pose.position - prev_pos).norm() < 1e-9) {
      ++stall;
      int limit = done_mode ? kDoneStallLimit : kStallLimit;
      if (stall >= limit) {
        out.failure_reason = frontiers.frontiers().empty() ? "exhausted" : "stalled";
        break;
      }
    } else {
      stall = 0;
    }

    nlohmann::json rec;
    rec["t"] = step;
    rec["pose"] = nlohmann::json::array({round3(pose.position.x()), round3(pose.position.y()),
                                         round3(pose.position.z()), round3(pose.yaw)});
    rec["decision"] = have_decision ? decisionToString(decision) : "pending";
    rec["frontier_id"] = target_fid >= 0 ? target_fid : trek_fid;
    int here = scg.empty() ? -1 : scg.locate(pose.position);
    rec["region_id"] = here >= 0 ? scg.node(here).region_id : 0;
    log << rec.dump() << '\n';
  }

  out.steps = std::min(step, cfg.max_steps);
  if (!out.success && out.failure_reason.empty()) out.failure_reason = "max_steps";
  if (out.success)
    out.spl = out.shortest_length < 1e-9
                  ? 1.0
                  : out.shortest_length / std::max(out.path_length, out.shortest_length);
  out.log = log.str();
  out.scg_export = exportScg(builder.scg(), partitioner.regions());
  out.objects_export = exportObjects(objects, builder.scg());
  out.frontiers_export = exportFrontiers(frontiers, gcm, builder.scg());
  return out;
}

double spl(const std::vector<EpisodeResult>& results) {
  if (results.empty()) throw std::invalid_argument("spl: empty result list");
  double s = 0.0;
  for (const auto& r : results) s += r.spl;
  return s / static_cast<double>(results.size());
}

std::vector<TaskSpec> loadTasks(const std::string& path) {
  nlohmann::json doc = nlohmann::json::parse(readFile(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("tasks"))
    throw ConfigError("tasks file: expected {tasks:[...]} in " + path);
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::vector<TaskSpec> out;
  for (const auto& t : doc["tasks"]) {
    TaskSpec ts;
    ts.scene_path = (base / t.at("scene").get<std::string>()).string();
    ts.task = t.at("task").get<std::string>();
    auto s = t.at("start");
    if (!s.is_array() || s.size() != 4) throw ConfigError("tasks file: start must be [x,y,z,yaw]");
    ts.start.position = Vec3(s[0].get<double>(), s[1].get<double>(), s[2].get<double>());
    ts.start.yaw = s[3].get<double>();
    ts.tag = t.value("tag", std::string("single"));
    out.push_back(ts);
  }
  return out;
}

namespace {

void fillStats(AblationCell& cell) {
  double n = static_cast<double>(cell.spls.size());
  if (n == 0.0) return;
  double m = 0.0;
  for (double v : cell.spls) m += v;
  m /= n;
  double var = 0.0;
  for (double v : cell.spls) var += (v - m) * (v - m);
  cell.mean = m;
  cell.stddev = std::sqrt(var / n);
}

Pose jitterStart(const Pose& base, uint64_t trial, const VoxelGrid& truth) {
  std::mt19937_64 rng(trial * 0x9e3779b97f4a7c15ULL + 12345);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  Pose p = base;
  Vec3 cand = base.position + Vec3(d(rng), d(rng), 0.0);
  if (truth.at(cand) == VoxelState::Free) p.position = cand;
  return p;
}

}  // namespace

std::vector<AblationRow> runAblation(const std::vector<TaskSpec>& tasks, int trials,
                                     const SystemConfig& sys) {
  std::vector<AblationRow> rows;
  for (const auto& ts : tasks) {
    SceneSpec scene = SceneSpec::loadFromFile(ts.scene_path);
    VoxelGrid truth = rasterizeScene(scene, sys.grid.resolution);
    AblationRow row;
    row.scene = scene.name.empty() ? ts.scene_path : scene.name;
    row.task = ts.task;
    row.tag = ts.tag;
    for (int trial = 0; trial < trials; ++trial) {
      Pose start = jitterStart(ts.start, static_cast<uint64_t>(trial), truth);
      for (int mode = 0; mode < 2; ++mode) {  // matched starts across modes
        EpisodeConfig ec;
        ec.scene = scene;
        ec.task = ts.task;
        ec.start = start;
        ec.sys = sys;
        ec.reasoner = mode == 0 ? "heuristic" : "none";
        EpisodeResult r = runEpisode(ec);
        (mode == 0 ? row.hierarchical : row.fallback_only).spls.push_back(r.spl);
      }
    }
    fillStats(row.hierarchical);
    fillStats(row.fallback_only);
    row.improvement =
        (row.hierarchical.mean - row.fallback_only.mean) / std::max(row.fallback_only.mean, 1e-9);
    rows.push_back(row);
  }
  return rows;
}

std::string ablationTable(const std::vector<AblationRow>& rows) {
  std::ostringstream ss;
  ss << "scene\ttask\ttag\thier_mean\thier_std\tfallback_mean\tfallback_std\timprovement\n";
  ss.setf(std::ios::fixed);
  ss.precision(4);
  for (const auto& r : rows)
    ss << r.scene << '\t' << r.task << '\t' << r.tag << '\t' << r.hierarchical.mean << '\t'
       << r.hierarchical.stddev << '\t' << r.fallback_only.mean << '\t' << r.fallback_only.stddev
       << '\t' << r.improvement << '\n';
  return ss.str();
}

std::string ablationJson(const std::vector<AblationRow>& rows) {
  nlohmann::json doc;
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["scene"] = r.scene;
    j["task"] = r.task;
    j["tag"] = r.tag;
    for (int mode = 0; mode < 2; ++mode) {
      const AblationCell& c = mode == 0 ? r.hierarchical : r.fallback_only;
      nlohmann::json cj;
      cj["spls"] = c.spls;
      cj["mean"] = c.mean;
      cj["stddev"] = c.stddev;
      j[mode == 0 ? "hierarchical" : "fallback_only"] = cj;
    }
    j["improvement"] = r.improvement;
    arr.push_back(j);
  }
  doc["rows"] = arr;
  return doc.dump();
}

std::vector<Pose> loadTrajectory(const std::string& path) {
  nlohmann::json doc = nlohmann::json::parse(readFile(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("poses"))
    throw ConfigError("trajectory file: expected {poses:[...]} in " + path);
  std::vector<Pose> out;
  for (const auto& p : doc["poses"]) {
    if (!p.is_array() || p.size() != 4) throw ConfigError("trajectory pose must be [x,y,z,yaw]");
    Pose pose;
    pose.position = Vec3(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    pose.yaw = p[3].get<double>();
    out.push_back(pose);
  }
  return out;
}

std::string trajectoryJson(const std::vector<Pose>& poses) {
  nlohmann::json doc;
  auto arr = nlohmann::json::array();
  for (const auto& p : poses)
    arr.push_back(nlohmann::json::array({p.position.x(), p.position.y(), p.position.z(), p.yaw}));
  doc["poses"] = arr;
  return doc.dump();
}

BenchReport benchUpdateRate(const SceneSpec& scene, const std::vector<Pose>& trajectory,
                            const SystemConfig& sys) {
  scene.validate();
  if (trajectory.empty()) throw ConfigError("bench: empty trajectory");
  VoxelGrid truth = rasterizeScene(scene, sys.grid.resolution);
  VoxelGrid window = VoxelGrid::makeWindow(trajectory.front().position, sys.grid.window_size,
                                           sys.grid.resolution);
  GlobalCoverageMask gcm(sys.frontier.cell_size, sys.grid.resolution,
                         sys.frontier.visited_fraction);
  ScgBuilder builder(sys.scg);
  RegionPartitioner partitioner(sys.region);
  ObjectMap objects(sys.object);
  FrontierMap frontiers(sys.frontier, sys.sensor);

  std::vector<double> total, integ, scgv, objv, frov;
  auto tick = [] { return std::chrono::steady_clock::now(); };
  auto ms = [](auto a, auto b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };

  std::vector<int> pending_nodes;
  int last_partition = 0, step = 0;
  for (const auto& pose : trajectory) {
    window.recenter(pose.position);
    SenseResult sr = sense(truth, scene, pose, sys.sensor);  // sensor sim untimed
    auto t0 = tick();
    integrate(window, pose, sr.rays);
    auto t1 = tick();
    auto nn = builder.update(window, pose.position);
    pending_nodes.insert(pending_nodes.end(), nn.begin(), nn.end());
    if (!pending_nodes.empty() &&
        (pending_nodes.size() >= std::max<size_t>(8, builder.scg().size() / 8) ||
         step - last_partition >= 12)) {
      partitioner.update(builder.scg(), pending_nodes);
      pending_nodes.clear();
      last_partition = step;
    }
    ++step;
    auto t2 = tick();
    for (const auto& det : sr.detections) objects.integrate(det, builder.scg());
    auto t3 = tick();
    gcm.update(window);
    frontiers.update(window, gcm, sr.sensed_region, builder.scg(), pose.position);
    auto t4 = tick();
    integ.push_back(ms(t0, t1));
    scgv.push_back(ms(t1, t2));
    objv.push_back(ms(t2, t3));
    frov.push_back(ms(t3, t4));
    total.push_back(ms(t0, t4));
  }

  BenchReport r;
  r.cycles = static_cast<int>(total.size());
  r.median_ms = median(total);
  r.p95_ms = percentile95(total);
  r.integrate_median_ms = median(integ);
  r.scg_median_ms = median(scgv);
  r.objects_median_ms = median(objv);
  r.frontier_median_ms = median(frov);
  return r;
}

std::string benchReportJson(const BenchReport& r) {
  nlohmann::json doc;
  doc["cycles"] = r.cycles;
  doc["median_ms"] = r.median_ms;
  doc["p95_ms"] = r.p95_ms;
  doc["integrate_median_ms"] = r.integrate_median_ms;
  doc["scg_median_ms"] = r.scg_median_ms;
  doc["objects_median_ms"] = r.objects_median_ms;
  doc["frontier_median_ms"] = r.frontier_median_ms;
  return doc.dump();
}

}  // namespace ssnav
