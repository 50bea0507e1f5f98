#pragma once
// Node/member graphs of assemblies and truss checks.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "octet/assembly.hpp"
#include "octet/lattice.hpp"

namespace octet {

enum class NodeTag : std::uint8_t { Boundary, Interior };

struct Member {
  std::size_t a = 0, b = 0;  ///< a < b
  friend auto operator<=>(const Member&, const Member&) = default;
};

struct FrameGraph {
  std::vector<Vec3> nodes;
  /// Exact coordinates, present when every node is a honeycomb vertex.
  std::optional<std::vector<LatticePoint>> lattice_nodes;
  std::vector<Member> members;
  std::vector<NodeTag> tags;
  /// Per member, the indices of the cells that contribute it (ascending).
  std::vector<std::vector<std::size_t>> provenance;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t member_count() const { return members.size(); }

  std::vector<std::size_t> valences() const {
    std::vector<std::size_t> v(nodes.size(), 0);
    for (const auto& m : members) ++v[m.a], ++v[m.b];
    return v;
  }

  std::size_t interior_count() const { return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), NodeTag::Interior)); }
};

namespace detail {

inline std::array<long long, 3> round_key(const Vec3& v) {
  // 1e-9 world tolerance: coordinates are grouped on a 1e-9 grid.
  return {std::llround(v.x * 1e9), std::llround(v.y * 1e9), std::llround(v.z * 1e9)};
}

/// Cells of the honeycomb having `p` as a vertex: 4 up, 4 down, 6 octa.
inline std::vector<LatticePlacement> incident_cells(const LatticePoint& p) {
  std::vector<LatticePlacement> out;
  for (const auto& o : up_offsets()) out.push_back({Species::TetraUp, p - o});
  for (const auto& o : down_offsets()) out.push_back({Species::TetraDown, p - o});
  for (const auto& o : octa_offsets()) out.push_back({Species::Octa, p - o});
  return out;
}

template <class Key>
FrameGraph build_graph(const std::vector<std::vector<Key>>& cell_nodes, const std::vector<std::vector<std::pair<int, int>>>& cell_edges,
                       const std::map<Key, Vec3>& position) {
  FrameGraph g;
  std::map<Key, std::size_t> index;
  for (const auto& [k, v] : position) {
    index.emplace(k, g.nodes.size());
    g.nodes.push_back(v);
  }
  std::map<Member, std::set<std::size_t>> members;
  for (std::size_t c = 0; c < cell_nodes.size(); ++c)
    for (const auto& [i, j] : cell_edges[c]) {
      std::size_t a = index.at(cell_nodes[c][static_cast<std::size_t>(i)]);
      std::size_t b = index.at(cell_nodes[c][static_cast<std::size_t>(j)]);
      if (a > b) std::swap(a, b);
      members[{a, b}].insert(c);
    }
  for (auto& [m, cells] : members) {
    g.members.push_back(m);
    g.provenance.emplace_back(cells.begin(), cells.end());
  }
  return g;
}

}  // namespace detail

/// Nodes are the deduplicated cell vertices in lexicographic coordinate order;
/// members are the deduplicated cell edges, sorted. For honeycomb assemblies a node
/// is interior when all 14 honeycomb cells around it are present; otherwise interior
/// means valence 12.
inline FrameGraph extract(const Assembly& a) {
  std::vector<std::vector<std::pair<int, int>>> edges;
  for (const auto& c : a.cells()) edges.emplace_back(c.cell.edges().begin(), c.cell.edges().end());
  FrameGraph g;
  if (a.is_lattice()) {
    std::vector<std::vector<LatticePoint>> nodes;
    std::map<LatticePoint, Vec3> pos;
    std::set<LatticePlacement> present;
    for (const auto& c : a.cells()) {
      // The floating vertex order of a lattice cell matches LatticePlacement::vertices().
      nodes.push_back(c.placement->vertices());
      present.insert(*c.placement);
      for (const auto& p : nodes.back()) pos.emplace(p, p.to_vec());
    }
    g = detail::build_graph(nodes, edges, pos);
    std::vector<LatticePoint> exact;
    for (const auto& [p, v] : pos) exact.push_back(p);
    g.tags.assign(g.nodes.size(), NodeTag::Boundary);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      const auto around = detail::incident_cells(exact[i]);
      if (std::all_of(around.begin(), around.end(), [&](const LatticePlacement& c) { return present.count(c) > 0; }))
        g.tags[i] = NodeTag::Interior;
    }
    g.lattice_nodes = std::move(exact);
    return g;
  }
  std::vector<std::vector<std::array<long long, 3>>> nodes;
  std::map<std::array<long long, 3>, Vec3> pos;
  for (const auto& c : a.cells()) {
    auto& ns = nodes.emplace_back();
    for (const Vec3& v : c.cell.vertices()) {
      ns.push_back(detail::round_key(v));
      pos.emplace(ns.back(), v);
    }
  }
  g = detail::build_graph(nodes, edges, pos);
  const auto val = g.valences();
  g.tags.assign(g.nodes.size(), NodeTag::Boundary);
  for (std::size_t i = 0; i < val.size(); ++i)
    if (val[i] == 12) g.tags[i] = NodeTag::Interior;
  return g;
}

inline FrameGraph extract(const LatticeAssembly& a) { return extract(Assembly::from_lattice(a)); }

struct FrameReport {
  bool uniform_members = true;
  bool interior_valence = true;
  bool connected = true;
  bool triangulated = true;
  std::size_t interior_nodes = 0;
  std::size_t components = 0;
  std::vector<std::string> failures;

  bool ok() const { return uniform_members && interior_valence && connected && triangulated; }
};

inline FrameReport validate(const FrameGraph& g) {
  FrameReport r;
  auto fail = [&](bool& flag, std::string msg) {
    flag = false;
    if (r.failures.size() < 64) r.failures.push_back(std::move(msg));
  };
  auto member_name = [&](const Member& m) { return "member " + std::to_string(m.a) + "-" + std::to_string(m.b); };

  // (a) equal member lengths
  if (g.lattice_nodes) {
    const auto& p = *g.lattice_nodes;
    for (const auto& m : g.members) {
      const LatticePoint d = p[m.b] - p[m.a];
      if (d.x * d.x + d.y * d.y + d.z * d.z != 2) fail(r.uniform_members, member_name(m) + " has squared length != 2");
    }
  } else if (!g.members.empty()) {
    const double ref = distance(g.nodes[g.members[0].a], g.nodes[g.members[0].b]);
    for (const auto& m : g.members)
      if (std::abs(distance(g.nodes[m.a], g.nodes[m.b]) - ref) > 1e-9)
        fail(r.uniform_members, member_name(m) + " length differs");
  }

  // (b) interior valence
  const auto val = g.valences();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (i < g.tags.size() && g.tags[i] == NodeTag::Interior) {
      ++r.interior_nodes;
      if (val[i] != 12) fail(r.interior_valence, "interior node " + std::to_string(i) + " has valence " + std::to_string(val[i]));
    }
  }

  // (c) connectivity
  std::vector<std::size_t> parent(g.nodes.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& m : g.members) parent[find(m.a)] = find(m.b);
  for (std::size_t i = 0; i < parent.size(); ++i) r.components += find(i) == i;
  if (r.components > 1) fail(r.connected, std::to_string(r.components) + " connected components");

  // (d) every member in a triangle
  std::vector<std::set<std::size_t>> adj(g.nodes.size());
  for (const auto& m : g.members) adj[m.a].insert(m.b), adj[m.b].insert(m.a);
  for (const auto& m : g.members) {
    const auto& A = adj[m.a];
    const auto& B = adj[m.b];
    const bool tri = std::any_of(A.begin(), A.end(), [&](std::size_t c) { return B.count(c) > 0; });
    if (!tri) fail(r.triangulated, member_name(m) + " is in no triangle");
  }
  return r;
}

}  // namespace octet
