#pragma once
// Exact tetrahedral-octahedral honeycomb on the FCC lattice, plan regions and the
// world transform that stands lattice (1,1,1) upright.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "octet/cell.hpp"
#include "octet/errors.hpp"
#include "octet/geom.hpp"

namespace octet {

using Int = std::int64_t;

struct LatticePoint {
  Int x = 0, y = 0, z = 0;

  constexpr Int operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr Int sum() const { return x + y + z; }
  constexpr bool on_lattice() const { return sum() % 2 == 0; }
  Vec3 to_vec() const { return {double(x), double(y), double(z)}; }

  friend constexpr LatticePoint operator+(LatticePoint a, LatticePoint b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr LatticePoint operator-(LatticePoint a, LatticePoint b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr LatticePoint operator*(Int k, LatticePoint a) { return {k * a.x, k * a.y, k * a.z}; }
  friend constexpr auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// (111) layer of a lattice point.
inline Int layer_index(const LatticePoint& p) {
  if (!p.on_lattice())
    throw ParityViolation("point (" + std::to_string(p.x) + "," + std::to_string(p.y) + "," +
                          std::to_string(p.z) + ") has odd coordinate sum");
  const Int s = p.sum();
  return s >= 0 ? s / 2 : -((-s) / 2);
}

/// Rounds a point to the lattice when it is within `tol` of an FCC node.
inline std::optional<LatticePoint> snap(const Vec3& v, double tol = 1e-6) {
  const LatticePoint p{std::llround(v.x), std::llround(v.y), std::llround(v.z)};
  if (!near(v, p.to_vec(), tol) || !p.on_lattice()) return std::nullopt;
  return p;
}

namespace detail {

inline const std::array<LatticePoint, 4>& up_offsets() {
  static const std::array<LatticePoint, 4> o{{{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}};
  return o;
}
inline const std::array<LatticePoint, 4>& down_offsets() {
  static const std::array<LatticePoint, 4> o{{{0, 0, 0}, {1, 1, 0}, {1, 0, -1}, {0, 1, -1}}};
  return o;
}
inline const std::array<LatticePoint, 6>& octa_offsets() {
  static const std::array<LatticePoint, 6> o{{{0, 0, 0}, {2, 0, 0}, {1, 1, 0}, {1, -1, 0}, {1, 0, 1}, {1, 0, -1}}};
  return o;
}

}  // namespace detail

/// One honeycomb cell: a canonical cell translated by an even anchor.
struct LatticePlacement {
  Species species = Species::Octa;
  LatticePoint anchor;

  friend constexpr auto operator<=>(const LatticePlacement&, const LatticePlacement&) = default;

  void validate() const {
    if (species == Species::HalfOcta) throw InvalidParams("half-octa is not a honeycomb cell");
    if (!anchor.on_lattice()) throw ParityViolation("placement anchor has odd coordinate sum");
  }

  std::vector<LatticePoint> vertices() const {
    std::vector<LatticePoint> out;
    auto emit = [&](const auto& offs) {
      for (const LatticePoint& o : offs) out.push_back(anchor + o);
    };
    switch (species) {
      case Species::TetraUp: emit(detail::up_offsets()); break;
      case Species::TetraDown: emit(detail::down_offsets()); break;
      default: emit(detail::octa_offsets()); break;
    }
    return out;
  }

  /// Twice the centroid, exact.
  LatticePoint centroid2() const {
    LatticePoint off{2, 0, 0};
    if (species == Species::TetraUp) off = {1, 1, 1};
    if (species == Species::TetraDown) off = {1, 1, -1};
    return 2 * anchor + off;
  }

  Int layer() const { return layer_index(anchor); }

  ConvexCell to_cell() const {
    return canonical_cell(species).transformed(Isometry::translate(anchor.to_vec()));
  }
};

/// Recovers the honeycomb placement whose vertex set equals `pts`, if any.
inline std::optional<LatticePlacement> identify(std::span<const LatticePoint> pts) {
  std::vector<LatticePoint> sorted(pts.begin(), pts.end());
  std::sort(sorted.begin(), sorted.end());
  auto try_species = [&](Species s, const auto& offs) -> std::optional<LatticePlacement> {
    if (offs.size() != sorted.size()) return std::nullopt;
    for (const LatticePoint& o : offs) {
      LatticePlacement cand{s, sorted.front() - o};
      if (!cand.anchor.on_lattice()) continue;
      auto vs = cand.vertices();
      std::sort(vs.begin(), vs.end());
      if (vs == sorted) return cand;
    }
    return std::nullopt;
  };
  if (auto p = try_species(Species::TetraUp, detail::up_offsets())) return p;
  if (auto p = try_species(Species::TetraDown, detail::down_offsets())) return p;
  if (auto p = try_species(Species::Octa, detail::octa_offsets())) return p;
  return std::nullopt;
}

/// Recovers the placement of a floating cell lying on honeycomb vertices.
inline std::optional<LatticePlacement> identify(const ConvexCell& c, double tol = 1e-6) {
  if (c.shape() == Shape::HalfOcta) return std::nullopt;
  std::vector<LatticePoint> pts;
  for (const Vec3& v : c.vertices()) {
    auto p = snap(v, tol);
    if (!p) return std::nullopt;
    pts.push_back(*p);
  }
  return identify(std::span<const LatticePoint>(pts));
}

/// Element of the cubic point group: (p)[i] = sign[i] * p[perm[i]].
struct SignedPermutation {
  std::array<int, 3> perm{0, 1, 2};
  std::array<int, 3> sign{1, 1, 1};

  LatticePoint operator()(const LatticePoint& p) const {
    return {sign[0] * p[perm[0]], sign[1] * p[perm[1]], sign[2] * p[perm[2]]};
  }

  LatticePlacement operator()(const LatticePlacement& c) const {
    auto vs = c.vertices();
    for (auto& v : vs) v = (*this)(v);
    return *identify(std::span<const LatticePoint>(vs));
  }

  Mat3 matrix() const {
    Mat3 m;
    m.m.fill(0);
    for (int i = 0; i < 3; ++i) m(i, perm[i]) = sign[i];
    return m;
  }

  bool proper() const { return matrix().determinant() > 0; }

  Isometry isometry() const { return {matrix(), {}, proper()}; }

  /// All 48 elements, identity first.
  static const std::vector<SignedPermutation>& all() {
    static const std::vector<SignedPermutation> group = [] {
      std::vector<SignedPermutation> g;
      std::array<int, 3> p{0, 1, 2};
      do {
        for (int s = 0; s < 8; ++s)
          g.push_back({p, {(s & 1) ? -1 : 1, (s & 2) ? -1 : 1, (s & 4) ? -1 : 1}});
      } while (std::next_permutation(p.begin(), p.end()));
      return g;
    }();
    return group;
  }
};

/// p -> g(p) + t; maps the honeycomb onto itself.
struct LatticeMotion {
  SignedPermutation g;
  LatticePoint t;

  LatticePoint operator()(const LatticePoint& p) const { return g(p) + t; }
  LatticePlacement operator()(const LatticePlacement& c) const {
    auto vs = c.vertices();
    for (auto& v : vs) v = (*this)(v);
    return *identify(std::span<const LatticePoint>(vs));
  }
  Isometry isometry() const { return {g.matrix(), t.to_vec(), g.proper()}; }

  /// a after b.
  friend LatticeMotion compose(const LatticeMotion& a, const LatticeMotion& b) {
    LatticeMotion r;
    for (int i = 0; i < 3; ++i) {
      r.g.perm[i] = b.g.perm[a.g.perm[i]];
      r.g.sign[i] = a.g.sign[i] * b.g.sign[a.g.perm[i]];
    }
    r.t = a.g(b.t) + a.t;
    return r;
  }

  static LatticeMotion identity() { return {}; }
  static LatticeMotion translation(const LatticePoint& t) { return {{}, t}; }
  /// +120 degrees about the (1,1,1) axis through the origin: (x,y,z) -> (z,x,y).
  static LatticeMotion c3() { return {{{2, 0, 1}, {1, 1, 1}}, {}}; }
  /// Point inversion through half of the even point `twice_center`.
  static LatticeMotion inversion(const LatticePoint& twice_center) {
    return {{{0, 1, 2}, {-1, -1, -1}}, twice_center};
  }
};

/// Cell tags used by the tower pipeline.
enum CellTag : std::uint8_t { kTagNone = 0, kTagCapital = 1, kTagFloor = 2 };

inline std::vector<std::string> tag_names(std::uint8_t tags) {
  std::vector<std::string> out;
  if (tags & kTagCapital) out.emplace_back("CAPITAL");
  if (tags & kTagFloor) out.emplace_back("FLOOR");
  return out;
}

inline std::uint8_t tag_from_name(const std::string& name) {
  if (name == "CAPITAL") return kTagCapital;
  if (name == "FLOOR") return kTagFloor;
  throw InvalidParams("unknown tag " + name);
}

/// Set of honeycomb cells in insertion order, with an occupancy index and per-cell tags.
class LatticeAssembly {
 public:
  LatticeAssembly() = default;
  explicit LatticeAssembly(std::span<const LatticePlacement> cells) {
    for (const auto& c : cells) add(c);
  }

  /// Adds a cell; returns false if already present (tags are then OR-ed in).
  bool add(const LatticePlacement& c, std::uint8_t tags = kTagNone) {
    c.validate();
    auto it = std::lower_bound(index_.begin(), index_.end(), c,
                               [](const Slot& s, const LatticePlacement& k) { return s.key < k; });
    if (it != index_.end() && it->key == c) {
      tags_[it->pos] |= tags;
      return false;
    }
    index_.insert(it, Slot{c, cells_.size()});
    cells_.push_back(c);
    tags_.push_back(tags);
    return true;
  }

  bool contains(const LatticePlacement& c) const {
    auto it = std::lower_bound(index_.begin(), index_.end(), c,
                               [](const Slot& s, const LatticePlacement& k) { return s.key < k; });
    return it != index_.end() && it->key == c;
  }

  std::span<const LatticePlacement> cells() const { return cells_; }
  const LatticePlacement& cell(std::size_t i) const { return cells_[i]; }
  std::uint8_t tags(std::size_t i) const { return tags_[i]; }
  void set_tags(std::size_t i, std::uint8_t t) { tags_[i] = t; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  Rational volume() const {
    Rational v(0);
    for (const auto& c : cells_) v += exact_volume(c.species);
    return v;
  }

  LatticeAssembly translated(const LatticePoint& t) const {
    LatticeAssembly out;
    for (std::size_t i = 0; i < size(); ++i) out.add({cells_[i].species, cells_[i].anchor + t}, tags_[i]);
    return out;
  }

  LatticeAssembly transformed(const SignedPermutation& g) const {
    LatticeAssembly out;
    for (std::size_t i = 0; i < size(); ++i) out.add(g(cells_[i]), tags_[i]);
    return out;
  }

  LatticeAssembly transformed(const LatticeMotion& m) const {
    LatticeAssembly out;
    for (std::size_t i = 0; i < size(); ++i) out.add(m(cells_[i]), tags_[i]);
    return out;
  }

  void merge(const LatticeAssembly& o) {
    for (std::size_t i = 0; i < o.size(); ++i) add(o.cells_[i], o.tags_[i]);
  }

  /// Same cells in canonical (sorted) order.
  LatticeAssembly sorted() const {
    LatticeAssembly out;
    for (const Slot& s : index_) out.add(s.key, tags_[s.pos]);
    return out;
  }

  /// Set equality, ignoring order and tags.
  bool same_cells(const LatticeAssembly& o) const {
    if (size() != o.size()) return false;
    for (std::size_t i = 0; i < index_.size(); ++i)
      if (!(index_[i].key == o.index_[i].key)) return false;
    return true;
  }

  std::vector<ConvexCell> to_cells() const {
    std::vector<ConvexCell> out;
    out.reserve(size());
    for (const auto& c : cells_) out.push_back(c.to_cell());
    return out;
  }

 private:
  struct Slot {
    LatticePlacement key;
    std::size_t pos;
  };
  std::vector<LatticePlacement> cells_;
  std::vector<std::uint8_t> tags_;
  std::vector<Slot> index_;
};

// ---------------------------------------------------------------------------
// Plan geometry. Plan coordinates (s, t) express the projection of a point along
// (1,1,1) in the basis u = (1,-1,0), v = (0,1,-1) of the (111) plane; the two
// basis vectors have length sqrt(2) and meet at 120 degrees. All plan work is done
// on 6*(s, t), which is integral for lattice points and doubled centroids.

struct Plan6 {
  Int s = 0, t = 0;
  friend constexpr auto operator<=>(const Plan6&, const Plan6&) = default;
};

inline Plan6 plan6(const LatticePoint& p) {
  const Int S = p.sum();
  return {6 * p.x - 2 * S, 2 * S - 6 * p.z};
}

/// Plan coordinates of a doubled point (e.g. LatticePlacement::centroid2).
inline Plan6 plan6_from_doubled(const LatticePoint& q) {
  const Int S = q.sum();
  return {3 * q.x - S, S - 3 * q.z};
}

inline Plan6 plan6(const LatticePlacement& c) { return plan6_from_doubled(c.centroid2()); }

/// Hexagon norm of a plan offset, in units of 1/6 edge: 0 at the centre, 6R on a
/// hexagon of circumradius R edges whose corners lie along +-u, +-v, +-(u+v).
constexpr Int hex_norm6(Int ds, Int dt) {
  const Int a = ds < 0 ? -ds : ds, b = dt < 0 ? -dt : dt, c = ds - dt < 0 ? dt - ds : ds - dt;
  return std::max({a, b, c});
}

/// Regular hexagon in plan: centre (6x plan units) and circumradius in edges.
struct HexRegion {
  Plan6 center;
  double radius = 1;
  bool contains(Plan6 p) const {
    return double(hex_norm6(p.s - center.s, p.t - center.t)) <= 6 * radius + 1e-9;
  }
};

/// Half-open parallelogram [s0, s0+nu) x [t0, t0+nv) in plan-period units.
struct PeriodRegion {
  Plan6 origin;
  Int nu = 1, nv = 1;
  bool contains(Plan6 p) const {
    const Int ds = p.s - origin.s, dt = p.t - origin.t;
    return ds >= 0 && ds < 6 * nu && dt >= 0 && dt < 6 * nv;
  }
};

using PlanRegion = std::variant<HexRegion, PeriodRegion>;

inline bool region_contains(const PlanRegion& r, Plan6 p) {
  return std::visit([&](const auto& x) { return x.contains(p); }, r);
}

/// Plan bounding box of a region in 6x units: {smin, smax, tmin, tmax}.
inline std::array<Int, 4> region_bounds6(const PlanRegion& r) {
  if (const auto* h = std::get_if<HexRegion>(&r)) {
    const Int R = static_cast<Int>(std::ceil(6 * h->radius));
    return {h->center.s - R, h->center.s + R, h->center.t - R, h->center.t + R};
  }
  const auto& p = std::get<PeriodRegion>(r);
  return {p.origin.s, p.origin.s + 6 * p.nu, p.origin.t, p.origin.t + 6 * p.nv};
}

inline bool region_degenerate(const PlanRegion& r) {
  if (const auto* h = std::get_if<HexRegion>(&r)) return !(h->radius > 0);
  const auto& p = std::get<PeriodRegion>(r);
  return p.nu <= 0 || p.nv <= 0;
}

/// Lattice point of layer k at in-layer offset i*u + j*v from (k, k, 0).
inline LatticePoint layer_point(Int k, Int i, Int j) {
  // (k, k, 0) lies in layer k; u and v span the in-layer translations.
  return LatticePoint{k, k, 0} + i * LatticePoint{1, -1, 0} + j * LatticePoint{0, 1, -1};
}

/// All honeycomb cells spanning layers [layer, layer+1] whose plan centroid lies in
/// `region`, sorted. A degenerate region (radius 0 or empty period box) yields an
/// empty assembly.
inline LatticeAssembly cells_in_slab(Int layer, const PlanRegion& region) {
  LatticeAssembly out;
  if (region_degenerate(region)) return out;
  const auto [smin, smax, tmin, tmax] = region_bounds6(region);
  const Plan6 base = plan6(layer_point(layer, 0, 0));
  auto floor_div = [](Int a, Int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  const Int i0 = floor_div(smin - base.s, 6) - 1, i1 = floor_div(smax - base.s, 6) + 1;
  const Int j0 = floor_div(tmin - base.t, 6) - 1, j1 = floor_div(tmax - base.t, 6) + 1;
  std::vector<LatticePlacement> found;
  for (Int i = i0; i <= i1; ++i)
    for (Int j = j0; j <= j1; ++j) {
      const LatticePoint a = layer_point(layer, i, j);
      for (Species s : {Species::TetraUp, Species::TetraDown, Species::Octa}) {
        LatticePlacement c{s, a};
        if (region_contains(region, plan6(c))) found.push_back(c);
      }
    }
  std::sort(found.begin(), found.end());
  for (const auto& c : found) out.add(c);
  return out;
}

// ---------------------------------------------------------------------------
// World transform.

/// Proper rotation taking lattice (1,1,1) to +Z, lattice u = (1,-1,0) to +X.
inline Mat3 upright_rotation() {
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r6 = std::sqrt(6.0);
  return Mat3::from_rows({1 / r2, -1 / r2, 0}, {1 / r6, 1 / r6, -2 / r6}, {1 / r3, 1 / r3, 1 / r3});
}

/// Height of one (111) layer in lattice units.
inline double lattice_layer_height() { return 2 / std::sqrt(3.0); }

struct WorldTransform {
  Isometry rotation{upright_rotation(), {}, true};
  double scale = 1;
  Vec3 origin;

  /// Raw lattice coordinates.
  static WorldTransform lattice() { return {Isometry::identity(), 1, {}}; }
  /// Upright, unit scale.
  static WorldTransform upright() { return {}; }
  /// Upright, scaled so one layer measures `layer_height` (feet).
  static WorldTransform feet(double layer_height = 11.0) {
    WorldTransform t;
    t.scale = layer_height / lattice_layer_height();
    return t;
  }

  void validate() const {
    if (!rotation.is_valid() || !rotation.proper) throw InvalidParams("world rotation must be proper");
    if (!(scale > 0)) throw InvalidParams("world scale must be positive");
  }

  Vec3 operator()(const Vec3& p) const { return rotation(p) * scale + origin; }
  Vec3 operator()(const LatticePoint& p) const { return (*this)(p.to_vec()); }

  /// Applies the transform as an isometry followed by a similarity scale.
  ConvexCell apply(const ConvexCell& c) const {
    std::vector<Vec3> vs;
    for (const Vec3& v : c.vertices()) vs.push_back((*this)(v));
    std::vector<ConvexCell::Face> fs(c.faces().begin(), c.faces().end());
    return ConvexCell(c.species(), std::move(vs), std::move(fs));
  }
};

inline std::vector<ConvexCell> to_world(const LatticeAssembly& a, const WorldTransform& t) {
  t.validate();
  std::vector<ConvexCell> out;
  out.reserve(a.size());
  for (const auto& c : a.cells()) out.push_back(t.apply(c.to_cell()));
  return out;
}

}  // namespace octet
