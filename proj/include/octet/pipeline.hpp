#pragma once
// Fundamental unit -> half-module -> hexagonal module -> tiling -> floor plate -> tower.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "octet/assembly.hpp"
#include "octet/gluing.hpp"
#include "octet/lattice.hpp"

namespace octet {

// ---------------------------------------------------------------------------
// Plan-view helpers.

struct Vec2 {
  double x = 0, y = 0;
  friend bool operator<(const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }
};

/// Convex hull (counter-clockwise, collinear points dropped) of the plan projection
/// of all vertices, in the upright frame at unit scale.
inline std::vector<Vec2> plan_hull(std::span<const ConvexCell> cells) {
  const WorldTransform up = WorldTransform::upright();
  std::vector<Vec2> pts;
  for (const auto& c : cells)
    for (const Vec3& v : c.vertices()) {
      const Vec3 w = up(v);
      // Snap away float noise so equal projections compare equal.
      pts.push_back({std::round(w.x * 1e9) / 1e9, std::round(w.y * 1e9) / 1e9});
    }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  auto cr = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cr(h[k - 2], h[k - 1], pts[i]) <= 1e-12) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cr(h[k - 2], h[k - 1], pts[i - 1]) <= 1e-12) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

inline std::vector<double> polygon_edge_lengths(const std::vector<Vec2>& poly) {
  std::vector<double> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    out.push_back(std::hypot(b.x - a.x, b.y - a.y));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Units and modules.

/// Centre of the octa at anchor 0, the hub of every pipeline product.
inline Vec3 unit_center() { return {1, 0, 0}; }

/// Octa at the origin with an up-tetra on its (-,+,+) face and a down-tetra on the
/// opposite (+,-,-) face. One cell of each plan class, so it tiles its layer.
inline LatticeAssembly fundamental_unit() {
  LatticeAssembly a;
  a.add({Species::Octa, {0, 0, 0}});
  a.add({Species::TetraUp, {0, 0, 0}});
  a.add({Species::TetraDown, {1, -1, 0}});
  return a;
}

/// Upper half-octa of the unit's octa with the up-tetra on its (-,+,+) face.
inline Assembly half_module() {
  Assembly a;
  a.add(canonical_half_octa());
  a.add(LatticePlacement{Species::TetraUp, {0, 0, 0}});
  return a;
}

/// Rotation by 180 degrees about the plan-vertical axis through `c`, then reflection
/// in the horizontal plane through `c`; together a point inversion.
inline Isometry turn_and_reflect(const Vec3& c = unit_center()) {
  const Vec3 vertical{1, 1, 1};
  return compose(Isometry::reflection(vertical, c), Isometry::rotation(vertical, std::numbers::pi, c));
}

/// A half-module and its turned-and-reflected copy, square faces together.
inline Assembly half_module_pair() {
  Assembly a = half_module();
  a.append(half_module().transformed(turn_and_reflect()));
  return a;
}

struct HexModuleParams {
  /// Copies of the half-module pair; 3 closes one full turn.
  int pairs = 3;
};

/// +120 degrees about the plan-vertical axis combined with a rise of one layer.
/// Three applications give the pure lattice translation (2,2,2).
inline LatticeMotion module_screw() { return compose(LatticeMotion::translation({1, 0, 1}), LatticeMotion::c3()); }

/// Half-module pairs repeated around the plan-vertical axis by module_screw().
inline Assembly hexagonal_module(const HexModuleParams& p = {}) {
  if (p.pairs < 1) throw InvalidParams("hexagonal module needs at least one pair");
  const Assembly pair = half_module_pair();
  Assembly out;
  LatticeMotion m = LatticeMotion::identity();
  for (int i = 0; i < p.pairs; ++i) {
    out.append(pair.transformed(m.isometry()));
    m = compose(module_screw(), m);
  }
  return out;
}

/// Replaces every pair of half-octas that together form an octa with that octa.
inline Assembly merge_half_octas(const Assembly& a) {
  std::vector<bool> used(a.size(), false);
  Assembly out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (used[i]) continue;
    const ConvexCell& ci = a.cell(i);
    if (ci.shape() != Shape::HalfOcta) {
      out.add(a.cell(i), a.at(i).tags);
      continue;
    }
    bool merged = false;
    for (std::size_t j = i + 1; j < a.size() && !merged; ++j) {
      if (used[j] || a.cell(j).shape() != Shape::HalfOcta) continue;
      const ConvexCell& cj = a.cell(j);
      if (shared_vertex_count(ci, cj) != 4) continue;
      std::vector<LatticePoint> pts;
      bool ok = true;
      auto take = [&](const ConvexCell& c) {
        for (const Vec3& v : c.vertices()) {
          auto q = snap(v);
          if (!q) { ok = false; return; }
          if (std::find(pts.begin(), pts.end(), *q) == pts.end()) pts.push_back(*q);
        }
      };
      take(ci);
      take(cj);
      if (!ok || pts.size() != 6) continue;
      if (auto p = identify(std::span<const LatticePoint>(pts)); p && p->species == Species::Octa) {
        out.add(*p, a.at(i).tags);
        used[j] = true;
        merged = true;
      }
    }
    if (!merged) out.add(ci, a.at(i).tags);
  }
  return out;
}

/// nx * ny period translates of the fundamental unit in layer 0.
inline LatticeAssembly tile_plane(int nx, int ny) {
  if (nx < 1 || ny < 1) throw InvalidParams("tile_plane needs nx, ny >= 1");
  const LatticeAssembly unit = fundamental_unit();
  LatticeAssembly out;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) out.merge(unit.translated(layer_point(0, i, j)));
  return out;
}

/// Plan centre (6x units) of the octa of the fundamental unit.
inline Plan6 unit_plan_center() { return plan6(LatticePlacement{Species::Octa, {0, 0, 0}}); }

/// Hexagonal region of layer 0 centred on the unit octa.
inline LatticeAssembly floor_plate(double circumradius) {
  if (!(circumradius >= 1)) throw EmptyRegion("floor plate circumradius must be at least 1 edge");
  return cells_in_slab(0, HexRegion{unit_plan_center(), circumradius});
}

/// Three copies of the hexagonal module in 120 degree steps, with half-octas merged.
/// Used for the containment cross-check against plates.
inline LatticeAssembly module_floor_plan(const HexModuleParams& p = {}) {
  const LatticeAssembly mod = merge_half_octas(hexagonal_module(p)).to_lattice();
  // Pivot on the vertical through (1,1,0): the copies are disjoint and their union is
  // the most compact connected one among nearby lattice axes.
  const LatticePoint pivot{1, 1, 0};
  const LatticeMotion turn = compose(LatticeMotion::translation(pivot - LatticeMotion::c3()(pivot)), LatticeMotion::c3());
  LatticeAssembly out;
  LatticeMotion m = LatticeMotion::identity();
  for (int i = 0; i < 3; ++i) {
    for (const auto& c : mod.cells()) out.add(m(c));
    m = compose(turn, m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tower.

enum class FloorOffsetPolicy { Alternate, Fixed };

struct TowerParams {
  double bay_height = 66;
  double capital_depth = 11;
  int bays = 1;
  int floors_per_bay = 5;
  /// 1-based layer indices within a bay; empty means 1..floors_per_bay.
  std::vector<int> floor_layers;
  double plan_radius = 2;
  /// Degrees; a multiple of 60.
  int twist_per_bay = 0;
  FloorOffsetPolicy floor_offset_policy = FloorOffsetPolicy::Alternate;

  int layers_per_bay() const { return static_cast<int>(std::llround(bay_height / capital_depth)); }

  std::vector<int> resolved_floor_layers() const {
    if (!floor_layers.empty()) return floor_layers;
    std::vector<int> out;
    for (int i = 1; i <= floors_per_bay; ++i) out.push_back(i);
    return out;
  }

  void validate() const {
    if (!(bay_height > 0) || !(capital_depth > 0)) throw InvalidParams("bay_height and capital_depth must be positive");
    const double r = bay_height / capital_depth;
    if (std::abs(r - std::round(r)) > 1e-9) throw InvalidParams("capital_depth must divide bay_height");
    const int L = layers_per_bay();
    if (bays < 1) throw InvalidParams("bays must be at least 1");
    if (floors_per_bay < 0 || floors_per_bay > 6) throw InvalidParams("floors_per_bay must be between 0 and 6");
    if (floors_per_bay > L) throw InvalidParams("floors_per_bay exceeds bay_height/capital_depth");
    if (!floor_layers.empty() && static_cast<int>(floor_layers.size()) != floors_per_bay)
      throw InvalidParams("floor_layers must list floors_per_bay layers");
    std::set<int> seen;
    for (int l : resolved_floor_layers()) {
      if (l < 1 || l > L) throw InvalidParams("floor layer " + std::to_string(l) + " outside 1.." + std::to_string(L));
      if (!seen.insert(l).second) throw InvalidParams("floor layer " + std::to_string(l) + " listed twice");
    }
    if (!(plan_radius >= 1)) throw InvalidParams("plan_radius must be at least 1 edge");
    if (twist_per_bay % 60 != 0) throw InvalidParams("twist_per_bay must be a multiple of 60 degrees");
    if (twist_per_bay % 360 != 0 && L % 3 != 0)
      throw InvalidParams("a twist needs a bay layer count divisible by 3");
  }
};

struct FloorInfo {
  int bay = 0;
  int layer = 0;     ///< 1-based layer within the bay
  Int slab = 0;      ///< global slab index
  Plan6 offset;      ///< plan offset of the plate centre from the tower axis, before twist
};

struct Tower {
  TowerParams params;
  LatticeAssembly cells;
  std::vector<FloorInfo> floors;
  int layers_per_bay = 0;
};

namespace detail {

/// Lattice motion that carries the bay template (slabs 0..L-1) onto bay `b`,
/// rotated by b * twist about the tower axis. Odd multiples of 60 degrees are
/// realized by an inversion through an axis octa centre, since the honeycomb has
/// no pure 60-degree rotation about (1,1,1).
inline LatticeMotion bay_motion(int b, int L, int twist_deg) {
  const int steps = (((b * (twist_deg / 60)) % 6) + 6) % 6;
  LatticeMotion rot = LatticeMotion::identity();
  Int first_slab = 0;
  if (steps % 2 == 0) {
    for (int i = 0; i < steps / 2; ++i) rot = compose(LatticeMotion::c3(), rot);
  } else {
    // 180 degrees in plan from the inversion, the rest from c3.
    rot = LatticeMotion::inversion({2, 2, 2});
    const int k = (((steps - 3) / 2) % 3 + 3) % 3;
    for (int i = 0; i < k; ++i) rot = compose(LatticeMotion::c3(), rot);
    first_slab = 3 - L;
  }
  const Int shift = static_cast<Int>(b) * L - first_slab;
  return compose(LatticeMotion::translation({2 * shift / 3, 2 * shift / 3, 2 * shift / 3}), rot);
}

inline LatticeAssembly plate(Int slab, Plan6 center, double r) { return cells_in_slab(slab, HexRegion{center, r}); }

inline LatticeAssembly place_in_bay(const LatticeAssembly& local, Int local_slab, Plan6 center, double r, int b, int L,
                                    int twist) {
  if (twist % 360 == 0) return plate(static_cast<Int>(b) * L + local_slab, center, r);
  return local.transformed(bay_motion(b, L, twist));
}

inline std::vector<Plan6> plan_key(const LatticeAssembly& a) {
  std::set<Plan6> s;
  for (const auto& c : a.cells())
    for (const auto& v : c.vertices()) s.insert(plan6(v));
  return {s.begin(), s.end()};
}

/// In-layer lattice offsets in spiral order: by hex distance, then by angle.
inline std::vector<Plan6> offset_spiral(int rings) {
  std::vector<std::pair<std::pair<Int, double>, Plan6>> v;
  for (Int i = -rings; i <= rings; ++i)
    for (Int j = -rings; j <= rings; ++j) {
      const Int n = hex_norm6(6 * i, 6 * j);
      if (n > 6 * rings) continue;
      // Angle of i*u + j*v with u at 0 and v at 120 degrees.
      const double x = i - 0.5 * j, y = j * std::sqrt(3.0) / 2;
      double ang = std::atan2(y, x);
      if (ang < -1e-12) ang += 2 * std::numbers::pi;
      v.push_back({{n, ang}, Plan6{6 * i, 6 * j}});
    }
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Plan6> out;
  for (auto& e : v) out.push_back(e.second);
  return out;
}

}  // namespace detail

/// Stacks `bays` bays of bay_height/capital_depth layers. Every layer carries the
/// hexagonal structural plate about the tower axis; the top layer of each bay is
/// tagged CAPITAL; floor layers carry a FLOOR plate whose centre is offset so that no
/// two floors of the tower coincide in plan.
inline Tower build_tower(const TowerParams& params) {
  params.validate();
  const int L = params.layers_per_bay();
  const double r = params.plan_radius;
  const int twist = params.twist_per_bay;
  const Plan6 axis{0, 0};

  Tower tower;
  tower.params = params;
  tower.layers_per_bay = L;

  std::map<std::pair<Int, LatticePlacement>, std::uint8_t> cells;
  auto put = [&](const LatticeAssembly& a, std::uint8_t tags) {
    for (const auto& c : a.cells()) cells[{c.layer(), c}] |= tags;
  };

  for (int b = 0; b < params.bays; ++b)
    for (int j = 0; j < L; ++j) {
      const LatticeAssembly local = detail::plate(j, axis, r);
      put(detail::place_in_bay(local, j, axis, r, b, L, twist), kTagNone);
    }

  // Floors. Bays repeat the rotation every `cycle` bays; each cycle gets its own
  // floor template, carried into its bays by the bay motion. Offsets are chosen
  // greedily so that no two floors of the tower share a plan projection.
  const int steps = ((twist / 60) % 6 + 6) % 6;
  const int cycle = steps == 0 ? 1 : 6 / std::gcd(steps, 6);
  std::set<std::vector<Plan6>> used;
  const auto spiral = detail::offset_spiral(4 + static_cast<int>(std::ceil(r)) + params.bays);
  std::optional<Plan6> previous;
  for (int first = 0; first < params.bays; first += cycle) {
    const int last = std::min(params.bays, first + cycle);
    for (int layer : params.resolved_floor_layers()) {
      const Int j = layer - 1;
      auto images = [&](Plan6 off) {
        std::vector<LatticeAssembly> out;
        const LatticeAssembly local = detail::plate(j, off, r);
        for (int b = first; b < last; ++b) out.push_back(detail::place_in_bay(local, j, off, r, b, L, twist));
        return out;
      };
      Plan6 pick = axis;
      if (params.floor_offset_policy == FloorOffsetPolicy::Alternate) {
        bool found = false;
        for (const Plan6& off : spiral) {
          if (previous && off == *previous) continue;
          std::set<std::vector<Plan6>> keys;
          bool ok = true;
          for (const auto& img : images(off)) {
            auto k = detail::plan_key(img);
            if (used.count(k) || !keys.insert(std::move(k)).second) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          pick = off;
          found = true;
          break;
        }
        if (!found) throw InvalidParams("no floor offset keeps the floors apart in plan");
      }
      previous = pick;
      const auto imgs = images(pick);
      for (int b = first; b < last; ++b) {
        const LatticeAssembly& img = imgs[static_cast<std::size_t>(b - first)];
        used.insert(detail::plan_key(img));
        put(img, kTagFloor);
        const Int slab = img.empty() ? static_cast<Int>(b) * L + j : img.cell(0).layer();
        tower.floors.push_back({b, static_cast<int>(slab - static_cast<Int>(b) * L + 1), slab, pick});
      }
    }
  }
  std::sort(tower.floors.begin(), tower.floors.end(),
            [](const FloorInfo& x, const FloorInfo& y) { return std::tie(x.bay, x.slab) < std::tie(y.bay, y.slab); });

  for (auto& [key, tags] : cells) {
    const Int slab = key.first;
    tags &= static_cast<std::uint8_t>(~kTagCapital);
    if ((slab % L + L) % L == L - 1) tags |= kTagCapital;
  }
  for (const auto& [key, tags] : cells) tower.cells.add(key.second, tags);
  return tower;
}

}  // namespace octet
