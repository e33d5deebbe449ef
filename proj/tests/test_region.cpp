#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "ssnav/region/partition.hpp"

#include <deque>
#include <random>

using namespace ssnav;
using ssnav::test::bruteForceBestPartition;
using ssnav::test::communitySets;

namespace {

ClusterGraph makeGraph(int n, const std::vector<WeightedEdge>& edges) {
  ClusterGraph g;
  for (int i = 0; i < n; ++i) g.vertices.push_back(i);
  g.edges = edges;
  return g;
}

// two 4-cliques joined by one unit edge between vertices 3 and 4
ClusterGraph twoCliquesBridge(double bridge_w = 1.0) {
  std::vector<WeightedEdge> es;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) es.push_back({i, j, 1.0});
  for (int i = 4; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) es.push_back({i, j, 1.0});
  es.push_back({3, 4, bridge_w});
  return makeGraph(8, es);
}

ClusterGraph pathGraph(int n) {
  std::vector<WeightedEdge> es;
  for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1, 1.0});
  return makeGraph(n, es);
}

ClusterGraph starGraph(int leaves) {
  std::vector<WeightedEdge> es;
  for (int i = 1; i <= leaves; ++i) es.push_back({0, i, 1.0});
  return makeGraph(leaves + 1, es);
}

std::map<int, int> singletons(const ClusterGraph& g) {
  std::map<int, int> m;
  for (int v : g.vertices) m[v] = v;
  return m;
}

bool communityConnected(const ClusterGraph& g, const std::map<int, int>& memb, int label) {
  std::set<int> members;
  for (const auto& [v, c] : memb)
    if (c == label) members.insert(v);
  if (members.empty()) return true;
  std::map<int, std::vector<int>> adj;
  for (const auto& e : g.edges)
    if (members.count(e.a) && members.count(e.b)) {
      adj[e.a].push_back(e.b);
      adj[e.b].push_back(e.a);
    }
  std::set<int> seen{*members.begin()};
  std::deque<int> bfs{*members.begin()};
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop_front();
    for (int u : adj[v])
      if (!seen.count(u)) {
        seen.insert(u);
        bfs.push_back(u);
      }
  }
  return seen.size() == members.size();
}

void checkLeidenContract(const ClusterGraph& g, double gamma) {
  auto part = leidenPartition(g, gamma);
  REQUIRE(part.size() == g.vertices.size());
  std::set<int> labels;
  for (const auto& [v, c] : part) labels.insert(c);
  for (int c : labels) CHECK(communityConnected(g, part, c));
  CHECK(modularity(g, part, gamma) >= modularity(g, singletons(g), gamma) - 1e-12);
  // no single-vertex move improves Q (checked by direct re-evaluation);
  // candidate targets include a brand-new singleton community
  double q0 = modularity(g, part, gamma);
  int fresh_label = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<int> targets(labels.begin(), labels.end());
  targets.push_back(fresh_label);
  for (int v : g.vertices)
    for (int c : targets) {
      if (part.at(v) == c) continue;
      auto moved = part;
      moved[v] = c;
      CHECK(modularity(g, moved, gamma) <= q0 + 1e-9);
    }
}

}  // namespace

TEST_CASE("modularity formula pins") {
  ClusterGraph g = twoCliquesBridge();

  std::map<int, int> one;
  for (int v : g.vertices) one[v] = 0;
  CHECK(modularity(g, one, 1.0) == doctest::Approx(0.0).epsilon(1e-12));

  std::map<int, int> split;
  for (int v = 0; v < 8; ++v) split[v] = v < 4 ? 0 : 1;
  CHECK(modularity(g, split, 1.0) == doctest::Approx(11.0 / 26.0).epsilon(1e-12));

  CHECK(modularity(g, singletons(g), 1.0) < 0.0);

  SUBCASE("the clean split is the exhaustive optimum at gamma 1") {
    double best_q = 0.0;
    auto best = bruteForceBestPartition(g, 1.0, &best_q);
    CHECK(best_q == doctest::Approx(11.0 / 26.0).epsilon(1e-12));
    CHECK(communitySets(best) == communitySets(split));
  }
  SUBCASE("errors") {
    ClusterGraph empty;
    CHECK_THROWS_AS(modularity(empty, {}, 1.0), std::invalid_argument);
    std::map<int, int> missing = split;
    missing.erase(7);
    CHECK_THROWS_AS(modularity(g, missing, 1.0), std::invalid_argument);
  }
}

TEST_CASE("leiden matches exhaustive search on oracle graphs") {
  for (double gamma : {1.0, 0.02}) {
    CAPTURE(gamma);
    for (const auto& g : {twoCliquesBridge(), twoCliquesBridge(0.01), pathGraph(6), starGraph(5),
                          pathGraph(2), starGraph(7)}) {
      double best_q = 0.0;
      auto best = bruteForceBestPartition(g, gamma, &best_q);
      auto part = leidenPartition(g, gamma);
      CHECK(modularity(g, part, gamma) == doctest::Approx(best_q).epsilon(1e-9));
      checkLeidenContract(g, gamma);
    }
  }
}

TEST_CASE("a forced bridge splits exactly at the forced edge") {
  ClusterGraph g = twoCliquesBridge(0.01);
  auto part = leidenPartition(g, 0.02);
  std::set<std::set<int>> expect{{0, 1, 2, 3}, {4, 5, 6, 7}};
  CHECK(communitySets(part) == expect);
  // a unit bridge at the same low resolution merges everything instead
  auto merged = leidenPartition(twoCliquesBridge(1.0), 0.02);
  CHECK(communitySets(merged).size() == 1);
}

TEST_CASE("single vertex and edgeless graphs") {
  ClusterGraph g1 = makeGraph(1, {});
  auto p1 = leidenPartition(g1, 0.02);
  REQUIRE(p1.size() == 1);
  CHECK(p1.at(0) == 0);
  ClusterGraph g3 = makeGraph(3, {});
  auto p3 = leidenPartition(g3, 1.0);
  CHECK(communitySets(p3).size() == 3);
}

TEST_CASE("leiden on random graphs matches brute force quality") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 5 + static_cast<int>(rng() % 3);  // 5..7 vertices
    std::vector<WeightedEdge> es;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 3 != 0) es.push_back({i, j, (rng() % 4 == 0) ? 0.01 : 1.0});
    ClusterGraph g = makeGraph(n, es);
    for (double gamma : {1.0, 0.25, 0.02}) {
      double best_q = 0.0;
      bruteForceBestPartition(g, gamma, &best_q);
      auto part = leidenPartition(g, gamma);
      CHECK(modularity(g, part, gamma) >= best_q - 1e-9);
    }
  }
}

TEST_CASE("scaling all weights leaves the partition unchanged") {
  for (const auto& g : {twoCliquesBridge(0.01), pathGraph(6), starGraph(5)}) {
    ClusterGraph scaled = g;
    for (auto& e : scaled.edges) e.w *= 7.25;
    CHECK(communitySets(leidenPartition(g, 0.02)) ==
          communitySets(leidenPartition(scaled, 0.02)));
    CHECK(communitySets(leidenPartition(g, 1.0)) == communitySets(leidenPartition(scaled, 1.0)));
  }
}

namespace {

// SCG stub whose nodes are bare points; ids follow insertion order.
SpatialConnectivityGraph stubScg(int n) {
  SpatialConnectivityGraph scg;
  for (int i = 0; i < n; ++i) {
    Polyhedron p;
    p.seed = Vec3(i, 0, 0);
    p.centroid = p.seed;
    scg.addNode(std::move(p));
  }
  return scg;
}

void link(SpatialConnectivityGraph& scg, int a, int b, double w = 1.0) {
  scg.addEdge({a, b, w == 1.0 ? EdgeKind::Collision : EdgeKind::Parent, w});
}

}  // namespace

TEST_CASE("local subgraph pulls in touched regions and their neighbors only") {
  // regions: R1={0,1}, R2={2,3}, R3={4,5}; R1-R3 adjacent, R2 off on its own
  SpatialConnectivityGraph scg = stubScg(8);  // 6,7 are the new nodes
  link(scg, 0, 1);
  link(scg, 2, 3);
  link(scg, 4, 5);
  link(scg, 1, 4);  // R1 adjacent to R3
  link(scg, 6, 5);  // new node touches R3
  link(scg, 6, 7);
  std::map<int, Region> regions;
  regions[1] = {1, {0, 1}, "", false, {}};
  regions[2] = {2, {2, 3}, "", false, {}};
  regions[3] = {3, {4, 5}, "", false, {}};

  auto sub = extractLocalSubgraph(scg, regions, {6, 7});
  CHECK(sub.vertices == std::vector<int>{0, 1, 4, 5, 6, 7});  // R2 absent
  for (const auto& e : sub.edges) {
    CHECK(e.a != 2);
    CHECK(e.b != 3);
  }

  SUBCASE("bootstrap with no regions") {
    auto boot = extractLocalSubgraph(scg, {}, {6, 7});
    CHECK(boot.vertices == std::vector<int>{6, 7});
    REQUIRE(boot.edges.size() == 1);
    CHECK(boot.edges[0].a == 6);
    CHECK(boot.edges[0].b == 7);
  }
  SUBCASE("bridging two regions pulls both plus their neighbors") {
    link(scg, 7, 2);  // now also touches R2
    auto both = extractLocalSubgraph(scg, regions, {6, 7});
    CHECK(both.vertices == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  }
}

namespace {

// Three 4-cliques in a row, eps bridges between them: a synthetic
// three-room floor plan on the cluster-graph level.
SpatialConnectivityGraph threeRoomScg() {
  SpatialConnectivityGraph scg = stubScg(12);
  for (int base : {0, 4, 8})
    for (int i = base; i < base + 4; ++i)
      for (int j = i + 1; j < base + 4; ++j) link(scg, i, j);
  link(scg, 3, 4, 0.01);
  link(scg, 7, 8, 0.01);
  return scg;
}

}  // namespace

TEST_CASE("incremental partition: growth, new rooms, stability") {
  RegionConfig cfg;
  SpatialConnectivityGraph scg = stubScg(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) link(scg, i, j);
  RegionPartitioner part(cfg);
  auto changed = part.update(scg, {0, 1, 2, 3});
  REQUIRE(part.regions().size() == 1);
  int first_id = part.regions().begin()->first;
  CHECK(first_id == 1);  // ids start at one
  CHECK(scg.node(0).region_id == first_id);
  CHECK(changed == std::vector<int>{first_id});

  SUBCASE("extending the room keeps its id") {
    // two new nodes strongly tied into the clique
    Polyhedron p;
    int a = scg.addNode(p), b = scg.addNode(p);
    for (int i = 0; i < 4; ++i) {
      link(scg, a, i);
      link(scg, b, i);
    }
    link(scg, a, b);
    auto ch = part.update(scg, {a, b});
    REQUIRE(part.regions().size() == 1);
    CHECK(part.regions().begin()->first == first_id);
    CHECK(part.regions().at(first_id).members.count(a) == 1);
    CHECK(ch == std::vector<int>{first_id});
  }

  SUBCASE("a room behind a forced door becomes a new region") {
    Polyhedron p;
    std::vector<int> room2;
    for (int k = 0; k < 4; ++k) room2.push_back(scg.addNode(p));
    for (size_t i = 0; i < room2.size(); ++i)
      for (size_t j = i + 1; j < room2.size(); ++j) link(scg, room2[i], room2[j]);
    link(scg, 3, room2[0], 0.01);  // forced doorway
    part.update(scg, room2);
    REQUIRE(part.regions().size() == 2);
    CHECK(part.regions().count(first_id) == 1);
    CHECK(part.regions().at(first_id).members == std::set<int>{0, 1, 2, 3});
    // the new region holds exactly the new room
    int new_id = -1;
    for (const auto& [id, r] : part.regions())
      if (id != first_id) new_id = id;
    REQUIRE(new_id > first_id);
    CHECK(part.regions().at(new_id).members ==
          std::set<int>(room2.begin(), room2.end()));
  }
}

TEST_CASE("incremental result matches a full recluster on three rooms") {
  RegionConfig cfg;
  SpatialConnectivityGraph scg = threeRoomScg();

  // incremental: room by room, as a builder would discover them
  RegionPartitioner inc(cfg);
  inc.update(scg, {0, 1, 2, 3});
  inc.update(scg, {4, 5, 6, 7});
  inc.update(scg, {8, 9, 10, 11});

  // full: one shot over the whole graph
  auto full = leidenPartition(clusterGraphFromScg(scg), cfg.resolution_gamma);

  std::map<int, int> inc_memb;
  for (const auto& [id, r] : inc.regions())
    for (int v : r.members) inc_memb[v] = id;
  ClusterGraph g = clusterGraphFromScg(scg);
  double q_inc = modularity(g, inc_memb, cfg.resolution_gamma);
  double q_full = modularity(g, full, cfg.resolution_gamma);
  CHECK(q_inc >= q_full - 0.05);
  CHECK(communitySets(inc_memb) == communitySets(full));  // same rooms up to labels
  CHECK(inc.regions().size() == 3);
}

TEST_CASE("locality: untouched regions keep bit-identical assignment") {
  RegionConfig cfg;
  SpatialConnectivityGraph scg = threeRoomScg();
  RegionPartitioner part(cfg);
  part.update(scg, {0, 1, 2, 3});
  part.update(scg, {4, 5, 6, 7});
  part.update(scg, {8, 9, 10, 11});
  auto before = part.regions();
  std::vector<int> before_region_ids(12);
  for (int i = 0; i < 12; ++i) before_region_ids[static_cast<size_t>(i)] = scg.node(i).region_id;

  // grow the far room; rooms 1 and 2 must not move (room at 0..3 is two hops
  // from the new nodes, outside the candidate subgraph)
  Polyhedron p;
  int a = scg.addNode(p);
  for (int i = 8; i < 12; ++i) link(scg, a, i);
  auto changed = part.update(scg, {a});

  int far_room = before_region_ids[0];
  CHECK(part.regions().at(far_room).members == before.at(far_room).members);
  for (int i = 0; i < 4; ++i) CHECK(scg.node(i).region_id == before_region_ids[static_cast<size_t>(i)]);
  for (int id : changed) CHECK(id != far_room);

  SUBCASE("partition stays valid: disjoint, exhaustive, connected") {
    std::set<int> all;
    for (const auto& [id, r] : part.regions()) {
      for (int v : r.members) {
        CHECK(!all.count(v));
        all.insert(v);
      }
      // connectivity inside the scg
      std::set<int> seen{*r.members.begin()};
      std::deque<int> bfs{*r.members.begin()};
      while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop_front();
        for (int u : scg.neighbors(v))
          if (r.members.count(u) && !seen.count(u)) {
            seen.insert(u);
            bfs.push_back(u);
          }
      }
      CHECK(seen == r.members);
    }
    CHECK(all.size() == scg.size());
  }
}

TEST_CASE("incremental beats naive nearest-region assignment") {
  RegionConfig cfg;
  SpatialConnectivityGraph scg = stubScg(8);
  for (int base : {0, 4})
    for (int i = base; i < base + 4; ++i)
      for (int j = i + 1; j < base + 4; ++j) link(scg, i, j);
  link(scg, 3, 4, 0.01);
  RegionPartitioner part(cfg);
  part.update(scg, {0, 1, 2, 3});
  part.update(scg, {4, 5, 6, 7});

  // new room: 4-clique hanging off room 2 by a forced edge
  Polyhedron p;
  std::vector<int> fresh;
  for (int k = 0; k < 4; ++k) fresh.push_back(scg.addNode(p));
  for (size_t i = 0; i < fresh.size(); ++i)
    for (size_t j = i + 1; j < fresh.size(); ++j) link(scg, fresh[i], fresh[j]);
  link(scg, 7, fresh[0], 0.01);

  // baseline: staple the new nodes onto the adjacent existing region
  std::map<int, int> baseline;
  for (const auto& [id, r] : part.regions())
    for (int v : r.members) baseline[v] = id;
  int host = baseline.at(7);
  for (int v : fresh) baseline[v] = host;

  part.update(scg, fresh);
  std::map<int, int> incr;
  for (const auto& [id, r] : part.regions())
    for (int v : r.members) incr[v] = id;

  ClusterGraph g = clusterGraphFromScg(scg);
  CHECK(modularity(g, incr, cfg.resolution_gamma) >=
        modularity(g, baseline, cfg.resolution_gamma) - 1e-9);
}
