#include "ssnav/region/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ssnav {

namespace {

constexpr double kGainTol = 1e-12;

// Index-compacted multigraph used by the solver. Aggregated supernodes carry
// their internal weight as a self loop (stored doubled so ordered-pair sums
// need no special casing); degree includes it.
struct Compact {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self_loop;
  std::vector<double> degree;
  double two_m = 0.0;
};

Compact compactFrom(const ClusterGraph& g, std::map<int, int>& index_of) {
  Compact c;
  c.n = static_cast<int>(g.vertices.size());
  index_of.clear();
  for (int i = 0; i < c.n; ++i) index_of[g.vertices[static_cast<size_t>(i)]] = i;
  c.adj.assign(static_cast<size_t>(c.n), {});
  c.self_loop.assign(static_cast<size_t>(c.n), 0.0);
  for (const auto& e : g.edges) {
    int a = index_of.at(e.a), b = index_of.at(e.b);
    c.adj[static_cast<size_t>(a)].push_back({b, e.w});
    c.adj[static_cast<size_t>(b)].push_back({a, e.w});
  }
  for (auto& nb : c.adj) std::sort(nb.begin(), nb.end());
  c.degree.assign(static_cast<size_t>(c.n), 0.0);
  for (int v = 0; v < c.n; ++v) {
    double d = c.self_loop[static_cast<size_t>(v)];
    for (const auto& [u, w] : c.adj[static_cast<size_t>(v)]) d += w;
    c.degree[static_cast<size_t>(v)] = d;
    c.two_m += d;
  }
  return c;
}

// Greedy single-vertex moves until none improves Q. The visit queue starts in
// the given order; moving to a fresh empty community (isolation) is a
// candidate too. Best gain wins, ties keep the smaller label. Deterministic
// for a fixed order.
bool localMove(const Compact& G, std::vector<int>& memb, double gamma,
               const std::vector<int>& order) {
  // community labels live in [0, 2n): label v+n is v's private spare, so an
  // isolated vertex always has somewhere fresh to go
  std::vector<double> tot(static_cast<size_t>(2 * G.n), 0.0);
  for (int v = 0; v < G.n; ++v) tot[static_cast<size_t>(memb[static_cast<size_t>(v)])] +=
      G.degree[static_cast<size_t>(v)];
  std::deque<int> queue(order.begin(), order.end());
  std::vector<char> queued(static_cast<size_t>(G.n), 1);

  bool any = false;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    queued[static_cast<size_t>(v)] = 0;

    std::map<int, double> w_to;
    for (const auto& [u, w] : G.adj[static_cast<size_t>(v)])
      w_to[memb[static_cast<size_t>(u)]] += w;
    const int cur = memb[static_cast<size_t>(v)];
    const double k = G.degree[static_cast<size_t>(v)];
    const double w_cur = w_to.count(cur) ? w_to.at(cur) : 0.0;
    const double tot_cur_excl = tot[static_cast<size_t>(cur)] - k;

    int best_c = cur;
    double best_gain = 0.0;
    auto consider = [&](int c, double wc) {
      if (c == cur) return;
      double gain = 2.0 * (wc - w_cur) / G.two_m -
                    gamma * 2.0 * k * (tot[static_cast<size_t>(c)] - tot_cur_excl) /
                        (G.two_m * G.two_m);
      if (gain > best_gain + kGainTol) {
        best_gain = gain;
        best_c = c;
      }
    };
    for (const auto& [c, wc] : w_to) consider(c, wc);
    if (tot_cur_excl > 0.0) {
      int spare = v + G.n;  // escape an over-merged community
      if (tot[static_cast<size_t>(spare)] == 0.0) consider(spare, 0.0);
    }
    if (best_c == cur) continue;

    tot[static_cast<size_t>(cur)] -= k;
    tot[static_cast<size_t>(best_c)] += k;
    memb[static_cast<size_t>(v)] = best_c;
    any = true;
    for (const auto& [u, w] : G.adj[static_cast<size_t>(v)]) {
      (void)w;
      if (memb[static_cast<size_t>(u)] != best_c && !queued[static_cast<size_t>(u)]) {
        queued[static_cast<size_t>(u)] = 1;
        queue.push_back(u);
      }
    }
  }
  return any;
}

// Leiden refinement: inside each community, singleton groups greedily join a
// connected group of the same community when that improves Q.
std::vector<int> refine(const Compact& G, const std::vector<int>& memb, double gamma) {
  std::vector<int> r(static_cast<size_t>(G.n));
  for (int v = 0; v < G.n; ++v) r[static_cast<size_t>(v)] = v;
  std::vector<double> rtot = G.degree;
  std::vector<int> rsize(static_cast<size_t>(G.n), 1);

  for (int v = 0; v < G.n; ++v) {
    if (rsize[static_cast<size_t>(r[static_cast<size_t>(v)])] != 1) continue;
    std::map<int, double> w_to;
    for (const auto& [u, w] : G.adj[static_cast<size_t>(v)])
      if (memb[static_cast<size_t>(u)] == memb[static_cast<size_t>(v)])
        w_to[r[static_cast<size_t>(u)]] += w;
    const double k = G.degree[static_cast<size_t>(v)];
    int best_c = r[static_cast<size_t>(v)];
    double best_gain = 0.0;
    for (const auto& [c, wc] : w_to) {
      if (c == best_c) continue;
      double gain = 2.0 * wc / G.two_m -
                    gamma * 2.0 * k * rtot[static_cast<size_t>(c)] / (G.two_m * G.two_m);
      if (gain > best_gain + kGainTol) {
        best_gain = gain;
        best_c = c;
      }
    }
    int old = r[static_cast<size_t>(v)];
    if (best_c != old) {
      rsize[static_cast<size_t>(old)] -= 1;
      rsize[static_cast<size_t>(best_c)] += 1;
      rtot[static_cast<size_t>(old)] -= k;
      rtot[static_cast<size_t>(best_c)] += k;
      r[static_cast<size_t>(v)] = best_c;
    }
  }
  return r;
}

// Collapse refined groups into supernodes; the coarse membership carries over.
Compact aggregate(const Compact& G, const std::vector<int>& refined,
                  const std::vector<int>& memb, std::vector<int>& group_of,
                  std::vector<int>& coarse_memb) {
  std::map<int, int> compact_label;
  group_of.assign(static_cast<size_t>(G.n), -1);
  for (int v = 0; v < G.n; ++v) {
    int lbl = refined[static_cast<size_t>(v)];
    auto [it, inserted] = compact_label.insert({lbl, static_cast<int>(compact_label.size())});
    group_of[static_cast<size_t>(v)] = it->second;
  }
  int ng = static_cast<int>(compact_label.size());

  Compact out;
  out.n = ng;
  out.adj.assign(static_cast<size_t>(ng), {});
  out.self_loop.assign(static_cast<size_t>(ng), 0.0);
  coarse_memb.assign(static_cast<size_t>(ng), 0);
  std::map<int, int> comm_label;
  for (int v = 0; v < G.n; ++v) {
    int g = group_of[static_cast<size_t>(v)];
    auto [it, ins] =
        comm_label.insert({memb[static_cast<size_t>(v)], static_cast<int>(comm_label.size())});
    coarse_memb[static_cast<size_t>(g)] = it->second;
  }

  std::map<std::pair<int, int>, double> agg_edges;
  for (int v = 0; v < G.n; ++v) {
    int gv = group_of[static_cast<size_t>(v)];
    out.self_loop[static_cast<size_t>(gv)] += G.self_loop[static_cast<size_t>(v)];
    for (const auto& [u, w] : G.adj[static_cast<size_t>(v)]) {
      if (u < v) continue;  // count each pair once
      int gu = group_of[static_cast<size_t>(u)];
      if (gu == gv)
        out.self_loop[static_cast<size_t>(gv)] += 2.0 * w;
      else
        agg_edges[{std::min(gv, gu), std::max(gv, gu)}] += w;
    }
  }
  for (const auto& [pair, w] : agg_edges) {
    out.adj[static_cast<size_t>(pair.first)].push_back({pair.second, w});
    out.adj[static_cast<size_t>(pair.second)].push_back({pair.first, w});
  }
  for (auto& nb : out.adj) std::sort(nb.begin(), nb.end());
  out.degree.assign(static_cast<size_t>(ng), 0.0);
  for (int v = 0; v < ng; ++v) {
    double d = out.self_loop[static_cast<size_t>(v)];
    for (const auto& [u, w] : out.adj[static_cast<size_t>(v)]) d += w;
    out.degree[static_cast<size_t>(v)] = d;
    out.two_m += d;
  }
  return out;
}

// Give every connected component of every community its own label.
// Returns true when some community was split.
bool splitDisconnected(const Compact& G, std::vector<int>& memb) {
  std::vector<int> fresh(static_cast<size_t>(G.n), -1);
  int next = 0;
  bool split = false;
  for (int v0 = 0; v0 < G.n; ++v0) {
    if (fresh[static_cast<size_t>(v0)] != -1) continue;
    int label = next++;
    std::deque<int> bfs{v0};
    fresh[static_cast<size_t>(v0)] = label;
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop_front();
      for (const auto& [u, w] : G.adj[static_cast<size_t>(v)]) {
        (void)w;
        if (fresh[static_cast<size_t>(u)] == -1 &&
            memb[static_cast<size_t>(u)] == memb[static_cast<size_t>(v)]) {
          fresh[static_cast<size_t>(u)] = label;
          bfs.push_back(u);
        }
      }
    }
  }
  std::map<int, std::set<int>> pieces;  // old community -> fresh labels
  for (int v = 0; v < G.n; ++v)
    pieces[memb[static_cast<size_t>(v)]].insert(fresh[static_cast<size_t>(v)]);
  for (const auto& [old, parts] : pieces)
    if (parts.size() > 1) split = true;
  memb = fresh;
  return split;
}

}  // namespace

ClusterGraph clusterGraphFromScg(const SpatialConnectivityGraph& scg) {
  ClusterGraph g;
  g.vertices.reserve(scg.size());
  for (const auto& n : scg.nodes()) g.vertices.push_back(n.id);
  std::sort(g.vertices.begin(), g.vertices.end());
  for (const auto& e : scg.edges())
    g.edges.push_back({std::min(e.a, e.b), std::max(e.a, e.b), e.weight});
  std::sort(g.edges.begin(), g.edges.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return g;
}

double modularity(const ClusterGraph& g, const std::map<int, int>& membership, double gamma) {
  if (g.vertices.empty()) throw std::invalid_argument("modularity: empty graph");
  for (int v : g.vertices)
    if (!membership.count(v))
      throw std::invalid_argument("modularity: membership misses vertex " + std::to_string(v));

  std::map<int, double> s_in, s_tot;
  double m = 0.0;
  for (int v : g.vertices) {
    s_in[membership.at(v)] += 0.0;
    s_tot[membership.at(v)] += 0.0;
  }
  for (const auto& e : g.edges) {
    m += e.w;
    int ca = membership.at(e.a), cb = membership.at(e.b);
    s_tot[ca] += e.w;
    s_tot[cb] += e.w;
    if (ca == cb) s_in[ca] += 2.0 * e.w;
  }
  if (m <= 0.0) return 0.0;
  double q = 0.0;
  for (const auto& [c, tot] : s_tot) {
    double in = s_in.count(c) ? s_in.at(c) : 0.0;
    q += in / (2.0 * m) - gamma * (tot / (2.0 * m)) * (tot / (2.0 * m));
  }
  return q;
}

namespace {

// Visit order for one sweep. Seed 0 keeps index order; anything else is a
// Fisher-Yates permutation (own loop: std::shuffle output is not pinned
// across standard libraries).
std::vector<int> makeOrder(int n, uint64_t s) {
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (s == 0) return order;
  std::mt19937_64 rng(s);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng() % static_cast<uint64_t>(i + 1));
    std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
  }
  return order;
}

uint64_t subSeed(uint64_t s, uint64_t salt) {
  return s == 0 ? 0 : s * 0x9e3779b97f4a7c15ULL + salt + 1;
}

// One full multilevel pass from the given start seed; returns base-level labels.
std::vector<int> leidenOnePass(const Compact& base, double gamma, uint64_t s) {
  // flat[i] = community of base vertex i, maintained across levels
  std::vector<int> flat(static_cast<size_t>(base.n));
  for (int v = 0; v < base.n; ++v) flat[static_cast<size_t>(v)] = v;

  Compact G = base;
  std::vector<int> memb(static_cast<size_t>(G.n));
  for (int v = 0; v < G.n; ++v) memb[static_cast<size_t>(v)] = v;
  std::vector<int> chain(static_cast<size_t>(base.n));  // base vertex -> current supernode
  for (int v = 0; v < base.n; ++v) chain[static_cast<size_t>(v)] = v;

  for (int level = 0; level < 64; ++level) {
    bool moved = localMove(G, memb, gamma, makeOrder(G.n, subSeed(s, static_cast<uint64_t>(level))));
    for (int v = 0; v < base.n; ++v)
      flat[static_cast<size_t>(v)] = memb[static_cast<size_t>(chain[static_cast<size_t>(v)])];
    if (!moved) break;

    std::vector<int> refined = refine(G, memb, gamma);
    std::vector<int> group_of, coarse_memb;
    Compact next = aggregate(G, refined, memb, group_of, coarse_memb);
    if (next.n == G.n) break;
    for (int v = 0; v < base.n; ++v)
      chain[static_cast<size_t>(v)] = group_of[static_cast<size_t>(chain[static_cast<size_t>(v)])];
    G = std::move(next);
    memb = std::move(coarse_memb);
  }

  // Final polish on the base graph: alternate stability sweeps and
  // connectivity splits (both monotone in Q) until a fixed point.
  for (int round = 0; round < 256; ++round) {
    bool moved =
        localMove(base, flat, gamma, makeOrder(base.n, subSeed(s, 4096 + static_cast<uint64_t>(round))));
    bool split = splitDisconnected(base, flat);
    if (!moved && !split) break;
  }
  return flat;
}

}  // namespace

std::map<int, int> leidenPartition(const ClusterGraph& g, double gamma, uint64_t seed) {
  std::map<int, int> out;
  if (g.vertices.empty()) return out;

  std::map<int, int> index_of;
  Compact base = compactFrom(g, index_of);
  if (base.two_m <= 0.0) {
    for (int v : g.vertices) out[v] = v;  // edgeless: singletons
    return out;
  }

  // Greedy moves depend on visit order and can settle in different local
  // optima, so run a few deterministic restarts and keep the best partition.
  // Restart 0 uses index order; ties keep the earliest restart. Large graphs
  // get fewer restarts: the optima there are flat and the sweeps dominate
  // the mapping cycle budget.
  const int kRestarts = base.n <= 48 ? 8 : 2;
  double best_q = -std::numeric_limits<double>::infinity();
  std::vector<int> best_flat;
  for (int r = 0; r < kRestarts; ++r) {
    uint64_t s = r == 0 ? 0 : subSeed(seed + 1, static_cast<uint64_t>(r) * 7919);
    std::vector<int> flat = leidenOnePass(base, gamma, s);
    std::map<int, int> memb;
    for (int v : g.vertices) memb[v] = flat[static_cast<size_t>(index_of.at(v))];
    double q = modularity(g, memb, gamma);
    if (q > best_q + 1e-12) {
      best_q = q;
      best_flat = std::move(flat);
    }
  }

  // canonical labels: smallest member node id
  std::map<int, int> label_for;
  for (int v : g.vertices) {
    int c = best_flat[static_cast<size_t>(index_of.at(v))];
    if (!label_for.count(c)) label_for[c] = v;  // vertices sorted ascending
  }
  for (int v : g.vertices) out[v] = label_for.at(best_flat[static_cast<size_t>(index_of.at(v))]);
  return out;
}

ClusterGraph extractLocalSubgraph(const SpatialConnectivityGraph& scg,
                                  const std::map<int, Region>& regions,
                                  const std::set<int>& new_nodes) {
  std::map<int, int> region_of;
  for (const auto& [id, r] : regions)
    for (int v : r.members) region_of[v] = id;

  // regions owning a neighbor of a new node
  std::set<int> ring1;
  for (int v : new_nodes)
    for (int u : scg.neighbors(v)) {
      auto it = region_of.find(u);
      if (it != region_of.end()) ring1.insert(it->second);
    }
  // plus regions adjacent to those
  std::set<int> ring2 = ring1;
  for (const auto& e : scg.edges()) {
    auto ia = region_of.find(e.a);
    auto ib = region_of.find(e.b);
    if (ia == region_of.end() || ib == region_of.end()) continue;
    if (ia->second == ib->second) continue;
    if (ring1.count(ia->second)) ring2.insert(ib->second);
    if (ring1.count(ib->second)) ring2.insert(ia->second);
  }

  std::set<int> verts(new_nodes.begin(), new_nodes.end());
  for (int rid : ring2) {
    const Region& r = regions.at(rid);
    verts.insert(r.members.begin(), r.members.end());
  }

  ClusterGraph out;
  out.vertices.assign(verts.begin(), verts.end());
  for (const auto& e : scg.edges())
    if (verts.count(e.a) && verts.count(e.b))
      out.edges.push_back({std::min(e.a, e.b), std::max(e.a, e.b), e.weight});
  std::sort(out.edges.begin(), out.edges.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return out;
}

int RegionPartitioner::regionOf(int node_id) const {
  for (const auto& [id, r] : regions_)
    if (r.members.count(node_id)) return id;
  return -1;
}

std::vector<int> RegionPartitioner::update(SpatialConnectivityGraph& scg,
                                           const std::vector<int>& new_nodes_vec) {
  std::set<int> new_nodes(new_nodes_vec.begin(), new_nodes_vec.end());
  if (new_nodes.empty()) return {};

  ClusterGraph local = extractLocalSubgraph(scg, regions_, new_nodes);
  auto part = leidenPartition(local, cfg_.resolution_gamma, cfg_.rng_seed);

  std::map<int, std::set<int>> comms;
  for (const auto& [node, c] : part) comms[c].insert(node);

  std::set<int> sub_verts(local.vertices.begin(), local.vertices.end());
  std::map<int, std::set<int>> prior;  // prior regions drawn into the subgraph
  for (const auto& [id, r] : regions_)
    for (int v : r.members)
      if (sub_verts.count(v)) {
        prior[id] = r.members;
        break;
      }

  // Relabel communities to the prior id they overlap most; larger overlaps pick
  // first so an unchanged region always reclaims its id.
  struct Cand {
    int comm_label;
    int prior_id;
    size_t overlap;
  };
  std::vector<Cand> cands;
  for (const auto& [cl, members] : comms)
    for (const auto& [pid, pmembers] : prior) {
      size_t ov = 0;
      for (int v : members)
        if (pmembers.count(v)) ++ov;
      if (ov > 0) cands.push_back({cl, pid, ov});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.overlap != y.overlap) return x.overlap > y.overlap;
    if (x.prior_id != y.prior_id) return x.prior_id < y.prior_id;
    return x.comm_label < y.comm_label;
  });
  std::map<int, int> assigned;  // comm label -> region id
  std::set<int> taken;
  for (const auto& c : cands) {
    if (assigned.count(c.comm_label) || taken.count(c.prior_id)) continue;
    assigned[c.comm_label] = c.prior_id;
    taken.insert(c.prior_id);
  }
  std::map<int, std::set<int>> result;  // region id -> members (subgraph part)
  for (const auto& [cl, members] : comms) {
    int id = assigned.count(cl) ? assigned.at(cl) : next_id_++;
    result[id] = members;
  }

  // Consolidation: merge adjacent result regions whose inter-edge density
  // exceeds merge_density_factor * min(internal densities). Density of a
  // region too small to have internal pairs counts as 1.
  auto internal_density = [&](const std::set<int>& members) {
    size_t n = members.size();
    if (n < 2) return 1.0;
    double w = 0.0;
    for (const auto& e : scg.edges())
      if (members.count(e.a) && members.count(e.b)) w += e.weight;
    return w / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
  };
  bool merged = true;
  while (merged && result.size() > 1) {
    merged = false;
    std::map<int, double> dens;
    for (const auto& [id, members] : result) dens[id] = internal_density(members);
    for (auto ia = result.begin(); ia != result.end() && !merged; ++ia)
      for (auto ib = std::next(ia); ib != result.end() && !merged; ++ib) {
        double inter = 0.0;
        for (const auto& e : scg.edges()) {
          bool ab = ia->second.count(e.a) && ib->second.count(e.b);
          bool ba = ia->second.count(e.b) && ib->second.count(e.a);
          if (ab || ba) inter += e.weight;
        }
        if (inter <= 0.0) continue;
        double density = inter / (static_cast<double>(ia->second.size()) *
                                  static_cast<double>(ib->second.size()));
        double threshold =
            cfg_.merge_density_factor * std::min(dens.at(ia->first), dens.at(ib->first));
        if (density > threshold) {
          ia->second.insert(ib->second.begin(), ib->second.end());
          result.erase(ib);
          merged = true;
        }
      }
  }

  // Install: subgraph regions are replaced wholesale; others untouched.
  std::vector<int> changed;
  for (const auto& [pid, members] : prior) {
    auto it = result.find(pid);
    if (it == result.end() || it->second != members) changed.push_back(pid);
    if (it == result.end()) regions_.erase(pid);
  }
  for (const auto& [id, members] : result) {
    auto it = regions_.find(id);
    if (it == regions_.end()) {
      Region r;
      r.id = id;
      r.members = members;
      regions_[id] = std::move(r);
      changed.push_back(id);
    } else if (it->second.members != members) {
      it->second.members = members;
      if (!prior.count(id)) changed.push_back(id);
    }
  }
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());

  for (const auto& [id, r] : regions_)
    for (int v : r.members) scg.node(v).region_id = id;
  return changed;
}

}  // namespace ssnav
