#include "ssnav/planner/planner.hpp"

#include "ssnav/sim/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <queue>

namespace ssnav {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAttachSlack = 0.3;  // how far outside a hull we still attach
}  // namespace

std::string decisionToString(const Decision& d) {
  switch (d.kind) {
    case Decision::Kind::GotoRegion:
      return "goto:" + std::to_string(d.region_id);
    case Decision::Kind::Done:
      return "done:" + std::to_string(d.object_id);
    case Decision::Kind::Fallback:
      break;
  }
  return "fallback";
}

std::optional<int> taskMatch(const ObjectMap& objects, const std::string& task,
                             double done_match) {
  if (task.empty()) return std::nullopt;
  Eigen::VectorXd t = embedLabel(task);
  if (t.norm() < 0.5) return std::nullopt;  // task carries no content tokens
  std::optional<int> best;
  double best_cos = done_match;
  for (const auto& obj : objects.objects()) {
    double c = cosineSimilarity(t, obj.embedding);
    if (c > best_cos + 1e-12) {
      best_cos = c;
      best = obj.id;
    }
  }
  return best;
}

Decision selectTargetRegion(const PlannerContext& ctx, const ParsedReply& reply,
                            const ObjectMap& objects, const PlannerConfig& cfg) {
  Decision d;
  if (auto done = taskMatch(objects, ctx.task, cfg.done_match)) {
    d.kind = Decision::Kind::Done;
    d.object_id = *done;
    return d;
  }
  if (reply.kind == ReplyKind::Goto) {
    for (const auto& rc : ctx.regions)
      if (rc.id == reply.id && rc.frontier_count > 0) {
        d.kind = Decision::Kind::GotoRegion;
        d.region_id = rc.id;
        return d;
      }
    return d;  // unknown region or nothing actionable there
  }
  if (reply.kind == ReplyKind::Done) {
    const SemanticObject* obj = objects.find(reply.id);
    if (obj && !ctx.task.empty()) {
      Eigen::VectorXd t = embedLabel(ctx.task);
      if (t.norm() >= 0.5 && cosineSimilarity(t, obj->embedding) > cfg.done_match) {
        d.kind = Decision::Kind::Done;
        d.object_id = obj->id;
        return d;
      }
    }
    return d;  // claim fails the match rule
  }
  return d;  // abstain / invalid
}

bool segmentFree(const VoxelGrid& grid, const Vec3& a, const Vec3& b) {
  bool ok = true;
  grid.traverseFast(a, b, [&](const Vec3i& idx) {
    if (grid.at(idx) != VoxelState::Free) ok = false;
  });
  return ok;
}

namespace {

// containing hull first (smallest id), else nearest within the slack
int attachNode(const SpatialConnectivityGraph& scg, const Vec3& p) {
  int best = -1;
  double best_d = kAttachSlack;
  for (const auto& n : scg.nodes()) {
    double d = n.signedDistance(p);
    if (d <= 1e-9) return n.id;
    if (d < best_d) {
      best_d = d;
      best = n.id;
    }
  }
  return best;
}

void shortcut(const VoxelGrid& grid, std::vector<Vec3>& wps) {
  if (wps.size() < 3) return;
  std::vector<Vec3> out;
  out.push_back(wps.front());
  size_t i = 0;
  while (i + 1 < wps.size()) {
    size_t j = wps.size() - 1;
    for (; j > i + 1; --j)
      if (segmentFree(grid, wps[i], wps[j])) break;
    out.push_back(wps[j]);
    i = j;
  }
  wps = out;
}

bool repair(const VoxelGrid& grid, std::vector<Vec3>& wps) {
  std::vector<Vec3> out;
  out.push_back(wps.front());
  for (size_t i = 0; i + 1 < wps.size(); ++i) {
    if (segmentFree(grid, wps[i], wps[i + 1])) {
      out.push_back(wps[i + 1]);
      continue;
    }
    auto fix = gridShortestPath(grid, wps[i], wps[i + 1]);
    if (!fix) return false;
    out.insert(out.end(), fix->begin() + 1, fix->end());
  }
  wps = out;
  return true;
}

}  // namespace

std::optional<std::vector<Vec3>> pathSearch(const SpatialConnectivityGraph& scg,
                                            const VoxelGrid& grid, const Vec3& start,
                                            const Vec3& goal) {
  if (scg.empty()) return std::nullopt;
  int s = attachNode(scg, start);
  int g = attachNode(scg, goal);
  if (s < 0 || g < 0) return std::nullopt;

  std::vector<double> dist(scg.size(), kInf);
  std::vector<int> prev(scg.size(), -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[s] = 0.0;
  pq.push({0.0, s});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u] + 1e-12) continue;
    if (u == g) break;
    const Vec3& cu = scg.node(u).centroid;
    for (int v : scg.neighbors(u)) {
      double w = (scg.node(v).centroid - cu).norm();
      if (dist[u] + w < dist[v] - 1e-12) {
        dist[v] = dist[u] + w;
        prev[v] = u;
        pq.push({dist[v], v});
      }
    }
  }
  if (dist[g] == kInf) return std::nullopt;

  std::vector<int> chain;
  for (int v = g; v != -1; v = prev[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());

  std::vector<Vec3> wps;
  wps.push_back(start);
  for (int v : chain) wps.push_back(scg.node(v).centroid);
  wps.push_back(goal);

  shortcut(grid, wps);
  if (!repair(grid, wps)) return std::nullopt;
  return wps;
}

std::optional<std::vector<Vec3>> gridShortestPath(const VoxelGrid& grid, const Vec3& start,
                                                  const Vec3& goal) {
  const Vec3i s = grid.worldToIndex(start);
  const Vec3i g = grid.worldToIndex(goal);
  if (!grid.inBounds(s) || grid.at(s) != VoxelState::Free) return std::nullopt;
  if (!grid.inBounds(g) || grid.at(g) != VoxelState::Free) return std::nullopt;

  const size_t total = grid.voxelCount();
  std::vector<double> dist(total, kInf);
  std::vector<size_t> prev(total, total);
  const size_t ls = grid.linearIndex(s);
  const size_t lg = grid.linearIndex(g);
  const Vec3 goal_c = grid.indexToCenter(g);

  using Item = std::pair<double, size_t>;  // (f, linear) for a stable order
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;
  dist[ls] = 0.0;
  open.push({(grid.indexToCenter(s) - goal_c).norm(), ls});

  while (!open.empty()) {
    auto [fu, lu] = open.top();
    open.pop();
    const Vec3i u = grid.fromLinear(lu);
    const Vec3 cu = grid.indexToCenter(u);
    if (fu > dist[lu] + (cu - goal_c).norm() + 1e-9) continue;
    if (lu == lg) break;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const Vec3i v = u + Vec3i(dx, dy, dz);
          if (!grid.inBounds(v) || grid.at(v) != VoxelState::Free) continue;
          const Vec3 cv = grid.indexToCenter(v);
          const bool diagonal = std::abs(dx) + std::abs(dy) + std::abs(dz) > 1;
          if (diagonal && !segmentFree(grid, cu, cv)) continue;  // no corner cutting
          const size_t lv = grid.linearIndex(v);
          const double w = (cv - cu).norm();
          if (dist[lu] + w < dist[lv] - 1e-12) {
            dist[lv] = dist[lu] + w;
            prev[lv] = lu;
            open.push({dist[lv] + (cv - goal_c).norm(), lv});
          }
        }
  }
  if (dist[lg] == kInf) return std::nullopt;

  std::vector<Vec3> wps;
  for (size_t v = lg; v != total; v = prev[v]) wps.push_back(grid.indexToCenter(grid.fromLinear(v)));
  std::reverse(wps.begin(), wps.end());
  wps.insert(wps.begin(), start);
  wps.push_back(goal);
  shortcut(grid, wps);
  return wps;
}

double pathLength(const std::vector<Vec3>& waypoints) {
  double len = 0.0;
  for (size_t i = 1; i < waypoints.size(); ++i) len += (waypoints[i] - waypoints[i - 1]).norm();
  return len;
}

namespace {

using CostFn = std::function<double(int, int)>;  // edge(-1, j) leaves the start

double tourCost(const std::vector<int>& perm, const CostFn& edge) {
  double c = 0.0;
  int last = -1;
  for (int j : perm) {
    c += edge(last, j);
    last = j;
  }
  return c;
}

// exhaustive DFS with admissible pruning (costs shifted to be non-negative)
std::vector<int> exactOrder(int n, const CostFn& edge) {
  double mn = 0.0;
  for (int j = 0; j < n; ++j) {
    mn = std::min(mn, edge(-1, j));
    for (int i = 0; i < n; ++i)
      if (i != j) mn = std::min(mn, edge(i, j));
  }
  const double shift = mn < 0.0 ? -mn : 0.0;

  std::vector<int> best, cur;
  double best_cost = kInf;
  cur.reserve(static_cast<size_t>(n));
  std::function<void(int, unsigned, double)> dfs = [&](int last, unsigned mask, double cost) {
    if (cost >= best_cost) return;
    if (mask == (1u << n) - 1u) {
      best = cur;
      best_cost = cost;
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      cur.push_back(j);
      dfs(j, mask | (1u << j), cost + edge(last, j) + shift);
      cur.pop_back();
    }
  };
  dfs(-1, 0u, 0.0);
  return best;
}

std::vector<int> twoOptOrder(int n, const CostFn& edge) {
  std::vector<int> perm;
  std::vector<char> used(static_cast<size_t>(n), 0);
  int last = -1;
  for (int k = 0; k < n; ++k) {  // nearest neighbor seed
    int pick = -1;
    double pick_cost = kInf;
    for (int j = 0; j < n; ++j)
      if (!used[j] && edge(last, j) < pick_cost - 1e-12) {
        pick_cost = edge(last, j);
        pick = j;
      }
    used[pick] = 1;
    perm.push_back(pick);
    last = pick;
  }
  double cost = tourCost(perm, edge);
  for (int pass = 0; pass < 64; ++pass) {  // costs are asymmetric: recompute per candidate
    bool improved = false;
    for (size_t i = 0; i < perm.size(); ++i)
      for (size_t j = i + 1; j < perm.size(); ++j) {
        std::reverse(perm.begin() + i, perm.begin() + j + 1);
        double trial = tourCost(perm, edge);
        if (trial < cost - 1e-9) {
          cost = trial;
          improved = true;
        } else {
          std::reverse(perm.begin() + i, perm.begin() + j + 1);
        }
      }
    if (!improved) break;
  }
  return perm;
}

}  // namespace

TspPlan tspOrder(const std::vector<const Frontier*>& frontiers, const Vec3& start,
                 const SpatialConnectivityGraph& scg, const VoxelGrid& grid,
                 const PlannerConfig& cfg) {
  TspPlan plan;
  std::vector<const Frontier*> use;
  std::vector<double> d0;
  for (const Frontier* f : frontiers) {
    if (f == nullptr || f->dormant) continue;
    auto p = pathSearch(scg, grid, start, f->viewpoint.position);
    if (!p) {
      std::cerr << "tsp: frontier " << f->id << " unreachable, excluded\n";
      plan.excluded.push_back(f->id);
      continue;
    }
    use.push_back(f);
    d0.push_back(pathLength(*p));
  }
  const int n = static_cast<int>(use.size());
  if (n == 0) return plan;

  std::vector<std::vector<double>> d(use.size(), std::vector<double>(use.size(), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto p = pathSearch(scg, grid, use[i]->viewpoint.position, use[j]->viewpoint.position);
      d[i][j] = d[j][i] = p ? pathLength(*p) : 1e9;  // soft-exclude broken links
    }

  auto edge = [&](int i, int j) {
    const double base = i < 0 ? d0[static_cast<size_t>(j)]
                              : d[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return base - cfg.lambda_gain * use[static_cast<size_t>(j)]->gain / 100.0;
  };

  std::vector<int> perm = n <= 10 ? exactOrder(n, edge) : twoOptOrder(n, edge);
  plan.cost = tourCost(perm, edge);
  for (int k : perm) plan.order.push_back(use[static_cast<size_t>(k)]->id);
  return plan;
}

std::optional<int> bestFrontierByUtility(const std::map<int, Frontier>& frontiers,
                                         const Vec3& from, const SpatialConnectivityGraph& scg,
                                         const VoxelGrid& grid) {
  std::optional<int> best;
  double best_u = -kInf;
  for (const auto& [fid, f] : frontiers) {
    if (f.dormant) continue;
    auto p = pathSearch(scg, grid, from, f.viewpoint.position);
    if (!p) continue;
    double u = f.gain / std::max(pathLength(*p), 0.1);
    if (u > best_u + 1e-12) {
      best_u = u;
      best = fid;
    }
  }
  return best;
}

}  // namespace ssnav
