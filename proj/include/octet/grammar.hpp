#pragma once
// Shape grammar over tetrahedra, octahedra and half-octahedra: spatial relations,
// rules, matching, application, replay and deduplicated enumeration.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "octet/assembly.hpp"
#include "octet/fingerprint.hpp"
#include "octet/gluing.hpp"
#include "octet/lattice.hpp"
#include "octet/overlap.hpp"
#include "octet/pipeline.hpp"

namespace octet {

enum class Relation : std::uint8_t { FaceToFace, EdgeToEdge, VertexToVertex };

constexpr std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::FaceToFace: return "face";
    case Relation::EdgeToEdge: return "edge";
    case Relation::VertexToVertex: return "vertex";
  }
  return "?";
}

inline Relation relation_from_string(std::string_view s) {
  for (Relation r : {Relation::FaceToFace, Relation::EdgeToEdge, Relation::VertexToVertex})
    if (to_string(r) == s) return r;
  throw UnsupportedRelation("unknown relation " + std::string(s));
}

/// Edge relations: placements sharing exactly one edge. `Lattice` admits only
/// honeycomb pairs; `FaceFlush` also admits placements where a face of the incoming
/// cell continues a host face across the shared edge.
enum class EdgeCatalog : std::uint8_t { Lattice, FaceFlush };

struct GrammarOptions {
  EdgeCatalog edge_catalog = EdgeCatalog::FaceFlush;
};

/// `incoming` is placed against a feature of a `host` cell.
struct GrammarRule {
  std::string id;
  Shape host;
  Shape incoming;
  Relation relation;
};

struct Match {
  std::string rule;
  std::size_t host = 0;
  std::size_t feature = 0;
  std::size_t variant = 0;
  Isometry placement;     ///< maps canonical_cell(incoming) into place
  std::string state;      ///< Assembly::digest() of the assembly it was computed on
};

inline char shape_letter(Shape s) {
  switch (s) {
    case Shape::Tetra: return 'T';
    case Shape::Octa: return 'O';
    case Shape::HalfOcta: return 'H';
  }
  return '?';
}

/// Rule id, e.g. "T-on-O.face" places a tetra on an octa face.
inline std::string rule_id(Shape incoming, Shape host, Relation r) {
  return std::string(1, shape_letter(incoming)) + "-on-" + std::string(1, shape_letter(host)) + "." +
         std::string(to_string(r));
}

namespace detail {

struct CatalogKey {
  Species host;
  Shape incoming;
  Relation relation;
  friend auto operator<=>(const CatalogKey&, const CatalogKey&) = default;
};

/// Per-feature placements of the canonical incoming cell against the canonical host.
using Catalog = std::vector<std::vector<Isometry>>;

inline std::vector<long long> vertex_key(const ConvexCell& c) {
  std::vector<std::array<long long, 3>> vs;
  for (const Vec3& v : c.vertices()) vs.push_back({std::llround(v.x * 1e6), std::llround(v.y * 1e6), std::llround(v.z * 1e6)});
  std::sort(vs.begin(), vs.end());
  std::vector<long long> out;
  for (auto& a : vs) out.insert(out.end(), a.begin(), a.end());
  return out;
}

/// Proper isometry putting canonical incoming face 0 onto triangle (p, q, r) with the
/// incoming body on the side opposite `outward`.
inline Isometry place_on_triangle(const ConvexCell& incoming, const Vec3& p, const Vec3& q, const Vec3& r,
                                  const Vec3& outward) {
  const auto& f = incoming.face(0);
  const Vec3 nb = incoming.face_normal(0);
  const Vec3 q0 = incoming.vertex(f[0]);
  const Vec3 e1 = normalized(incoming.vertex(f[1]) - q0);
  const Mat3 from = Mat3::from_cols(e1, cross(nb, e1), nb);
  // Incoming outward normal must equal `outward`; order the target so that the
  // triangle is counter-clockwise about it.
  Vec3 a = p, b = q, c = r;
  if (dot(cross(b - a, c - a), outward) < 0) std::swap(b, c);
  const Vec3 f1 = normalized(b - a);
  const Mat3 to = Mat3::from_cols(f1, cross(outward, f1), normalized(outward));
  return frame_map(q0, from, a, to);
}

inline bool lattice_species(Species s) { return s != Species::HalfOcta; }

/// A proper isometry taking the vertex set of `from` onto that of `to` (same shape).
inline Isometry proper_pose_onto(const ConvexCell& from, const ConvexCell& to, double tol = 1e-7) {
  const int n = from.vertex_count();
  int ref[3] = {-1, -1, -1};
  for (int i = 1; i < n && ref[2] < 0; ++i)
    for (int j = i + 1; j < n && ref[2] < 0; ++j)
      for (int k = j + 1; k < n && ref[2] < 0; ++k) {
        const Mat3 D = Mat3::from_cols(from.vertex(i) - from.vertex(0), from.vertex(j) - from.vertex(0),
                                       from.vertex(k) - from.vertex(0));
        if (std::abs(D.determinant()) > 0.5) ref[0] = i, ref[1] = j, ref[2] = k;
      }
  const Mat3 D = Mat3::from_cols(from.vertex(ref[0]) - from.vertex(0), from.vertex(ref[1]) - from.vertex(0),
                                 from.vertex(ref[2]) - from.vertex(0));
  const Mat3 Dinv = D.inverse();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const Vec3 o = to.vertex(a);
          const Mat3 E = Mat3::from_cols(to.vertex(b) - o, to.vertex(c) - o, to.vertex(d) - o);
          const Mat3 L = E * Dinv;
          if (L.determinant() <= 0) continue;
          const Isometry iso{L, o - L * from.vertex(0), true};
          if (!iso.is_valid(tol)) continue;
          bool ok = true;
          for (const Vec3& v : from.vertices()) {
            const Vec3 w = iso(v);
            bool hit = false;
            for (const Vec3& u : to.vertices()) hit = hit || near(w, u, tol);
            if (!hit) { ok = false; break; }
          }
          if (ok) return iso;
        }
  throw InvalidParams("cells are not congruent");
}

inline Catalog build_catalog(const CatalogKey& key, const GrammarOptions& opt) {
  const ConvexCell host = canonical_cell(key.host);
  const ConvexCell inc = canonical_cell(key.incoming);
  Catalog cat;
  if (key.relation == Relation::FaceToFace) {
    cat.resize(static_cast<std::size_t>(host.face_count()));
    for (int f = 0; f < host.face_count(); ++f) {
      if (host.face(f).size() != 3) continue;
      cat[static_cast<std::size_t>(f)] = face_gluings(host, f, inc, 0);
    }
    return cat;
  }
  if (!lattice_species(key.host) || key.incoming == Shape::HalfOcta)
    throw UnsupportedRelation(std::string(to_string(key.relation)) + " relation is only catalogued for tetra and octa");

  const bool edge = key.relation == Relation::EdgeToEdge;
  cat.resize(static_cast<std::size_t>(edge ? host.edge_count() : host.vertex_count()));
  std::vector<std::vector<std::pair<std::vector<long long>, Isometry>>> found(cat.size());

  auto feature_of = [&](const ConvexCell& c) -> std::optional<std::size_t> {
    std::vector<int> shared;
    for (int i = 0; i < host.vertex_count(); ++i)
      for (const Vec3& v : c.vertices())
        if (near(host.vertex(i), v, 1e-7)) shared.push_back(i);
    if (edge && shared.size() == 2) {
      const auto e = std::make_pair(std::min(shared[0], shared[1]), std::max(shared[0], shared[1]));
      const auto es = host.edges();
      auto it = std::find(es.begin(), es.end(), e);
      if (it != es.end()) return static_cast<std::size_t>(it - es.begin());
    }
    if (!edge && shared.size() == 1) return static_cast<std::size_t>(shared[0]);
    return std::nullopt;
  };
  auto consider = [&](const ConvexCell& placed, const Isometry& iso) {
    if (interiors_overlap(host, placed)) return;
    auto f = feature_of(placed);
    if (!f) return;
    auto k = vertex_key(placed);
    for (const auto& e : found[*f])
      if (e.first == k) return;
    found[*f].emplace_back(std::move(k), iso);
  };

  // Honeycomb neighbours of the host.
  const Species inc_species[] = {Species::TetraUp, Species::TetraDown, Species::Octa};
  for (Int x = -3; x <= 3; ++x)
    for (Int y = -3; y <= 3; ++y)
      for (Int z = -3; z <= 3; ++z) {
        if ((x + y + z) % 2 != 0) continue;
        for (Species s : inc_species) {
          if (shape_of(s) != key.incoming) continue;
          const LatticePlacement lp{s, {x, y, z}};
          const ConvexCell placed = lp.to_cell();
          consider(placed, proper_pose_onto(inc, placed));
        }
      }

  if (edge && opt.edge_catalog == EdgeCatalog::FaceFlush) {
    for (std::size_t e = 0; e < static_cast<std::size_t>(host.edge_count()); ++e) {
      const auto [ia, ib] = host.edges()[e];
      const Vec3 a = host.vertex(ia), b = host.vertex(ib);
      for (int f = 0; f < host.face_count(); ++f) {
        const auto& face = host.face(f);
        if (std::find(face.begin(), face.end(), ia) == face.end() ||
            std::find(face.begin(), face.end(), ib) == face.end())
          continue;
        int ic = -1;
        for (int v : face)
          if (v != ia && v != ib) ic = v;
        if (face.size() != 3) continue;
        const Vec3 c = host.vertex(ic);
        const Vec3 d = normalized(b - a);
        const Vec3 foot = a + d * dot(c - a, d);
        const Vec3 c2 = foot * 2 - c;
        const Vec3 n = host.face_normal(f);
        for (double side : {1.0, -1.0}) {
          const Isometry iso = place_on_triangle(inc, a, b, c2, n * side);
          consider(inc.transformed(iso), iso);
        }
      }
    }
  }

  for (std::size_t f = 0; f < found.size(); ++f) {
    std::sort(found[f].begin(), found[f].end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& e : found[f]) cat[f].push_back(e.second);
  }
  return cat;
}

}  // namespace detail

/// Rule table plus precomputed alignment catalogs. Immutable after construction.
class Grammar {
 public:
  explicit Grammar(GrammarOptions opt = {}) : opt_(opt) {
    for (Relation r : {Relation::FaceToFace, Relation::EdgeToEdge, Relation::VertexToVertex})
      for (Shape host : {Shape::Tetra, Shape::Octa, Shape::HalfOcta})
        for (Shape inc : {Shape::Tetra, Shape::Octa, Shape::HalfOcta}) {
          if (r != Relation::FaceToFace && (host == Shape::HalfOcta || inc == Shape::HalfOcta)) continue;
          rules_.push_back({rule_id(inc, host, r), host, inc, r});
        }
    for (const auto& rule : rules_)
      for (Species hs : {Species::TetraUp, Species::TetraDown, Species::Octa, Species::HalfOcta}) {
        if (shape_of(hs) != rule.host) continue;
        detail::CatalogKey key{hs, rule.incoming, rule.relation};
        catalogs_.emplace(key, detail::build_catalog(key, opt_));
      }
  }

  const GrammarOptions& options() const { return opt_; }
  const std::vector<GrammarRule>& rules() const { return rules_; }

  const GrammarRule& rule(std::string_view id) const {
    for (const auto& r : rules_)
      if (r.id == id) return r;
    throw UnknownRule("no rule named " + std::string(id));
  }

  const GrammarRule& rule(Shape incoming, Shape host, Relation r) const { return rule(rule_id(incoming, host, r)); }

  /// Placements of the canonical incoming cell, per host feature, for a host in
  /// canonical pose.
  const detail::Catalog& catalog(Species host, Shape incoming, Relation r) const {
    auto it = catalogs_.find({host, incoming, r});
    if (it == catalogs_.end()) throw UnsupportedRelation("no catalog for this species pair");
    return it->second;
  }

  /// Placement for (host cell, feature, variant); throws UnknownFeature when out of range.
  Isometry placement(const ConvexCell& host, const GrammarRule& r, std::size_t feature, std::size_t variant) const {
    if (host.shape() != r.host) throw UnknownFeature("host cell is not a " + std::string(to_string(r.host)));
    const auto& cat = catalog(host.species(), r.incoming, r.relation);
    if (feature >= cat.size()) throw UnknownFeature("feature " + std::to_string(feature) + " out of range");
    if (r.relation == Relation::FaceToFace && host.face(static_cast<int>(feature)).size() != 3)
      throw NotTriangle("face " + std::to_string(feature) + " is the square face");
    if (variant >= cat[feature].size())
      throw UnknownFeature("variant " + std::to_string(variant) + " out of range for feature " + std::to_string(feature));
    return compose(pose_of(host), cat[feature][variant]);
  }

  /// Collision-free matches ordered by (host index, feature, variant).
  std::vector<Match> find_matches(const Assembly& a, std::string_view rule_name) const {
    const GrammarRule& r = rule(rule_name);
    if (a.empty()) throw EmptyAssembly("no cells to match against");
    const std::string state = a.digest();
    const ConvexCell inc = canonical_cell(r.incoming);
    std::vector<Match> out;
    for (std::size_t h = 0; h < a.size(); ++h) {
      const ConvexCell& host = a.cell(h);
      if (host.shape() != r.host) continue;
      const Isometry pose = pose_of(host);
      const auto& cat = catalog(host.species(), r.incoming, r.relation);
      for (std::size_t f = 0; f < cat.size(); ++f)
        for (std::size_t v = 0; v < cat[f].size(); ++v) {
          const Isometry iso = compose(pose, cat[f][v]);
          if (collides(a, inc.transformed(iso))) continue;
          out.push_back({r.id, h, f, v, iso, state});
        }
    }
    return out;
  }

  Assembly apply(const Assembly& a, const Match& m) const {
    if (m.state != a.digest()) throw StaleMatch("assembly changed since the match was computed");
    const GrammarRule& r = rule(m.rule);
    const ConvexCell placed = canonical_cell(r.incoming).transformed(m.placement);
    if (collides(a, placed)) throw CollisionDetected("placement overlaps an existing cell");
    Assembly out = a;
    out.add(placed);
    if (a.provenance()) {
      DerivationScript s = *a.provenance();
      s.steps.push_back({m.rule, m.host, m.feature, m.variant});
      out.set_provenance(std::move(s));
    }
    return out;
  }

  /// Applies one recorded step directly.
  Assembly apply_step(const Assembly& a, const DerivationStep& step) const {
    const GrammarRule& r = rule(step.rule);
    if (step.host >= a.size()) throw UnknownFeature("host " + std::to_string(step.host) + " out of range");
    const Isometry iso = placement(a.cell(step.host), r, step.feature, step.variant);
    Match m{r.id, step.host, step.feature, step.variant, iso, a.digest()};
    return apply(a, m);
  }

  static bool collides(const Assembly& a, const ConvexCell& c) {
    const Vec3 cc = c.centroid();
    for (const auto& x : a.cells()) {
      if (distance(x.cell.centroid(), cc) > 4.0) continue;
      if (interiors_overlap(x.cell, c)) return true;
    }
    return false;
  }

 private:
  GrammarOptions opt_;
  std::vector<GrammarRule> rules_;
  std::map<detail::CatalogKey, detail::Catalog> catalogs_;
};

inline const Grammar& default_grammar() {
  static const Grammar g;
  return g;
}

inline std::vector<Match> find_matches(const Assembly& a, std::string_view rule) {
  return default_grammar().find_matches(a, rule);
}

inline Assembly apply(const Assembly& a, const Match& m) { return default_grammar().apply(a, m); }

// ---------------------------------------------------------------------------
// Initial shapes and replay.

inline const std::vector<std::string>& initial_names() {
  static const std::vector<std::string> names{"tetra",           "tetra_up",    "tetra_down",      "octa",
                                              "half_octa",       "fundamental_unit", "half_module", "hexagonal_module"};
  return names;
}

inline Assembly initial_assembly(std::string_view name) {
  Assembly a;
  if (name == "tetra" || name == "tetra_up") a.add(LatticePlacement{Species::TetraUp, {0, 0, 0}});
  else if (name == "tetra_down") a.add(LatticePlacement{Species::TetraDown, {0, 0, 0}});
  else if (name == "octa") a.add(LatticePlacement{Species::Octa, {0, 0, 0}});
  else if (name == "half_octa") a.add(canonical_half_octa());
  else if (name == "fundamental_unit") a = Assembly::from_lattice(fundamental_unit());
  else if (name == "half_module") a = half_module();
  else if (name == "hexagonal_module") a = hexagonal_module();
  else throw InvalidParams("unknown initial shape " + std::string(name));
  a.set_provenance({std::string(name), {}});
  return a;
}

inline Assembly replay(const DerivationScript& s, const Grammar& g = default_grammar()) {
  Assembly a = initial_assembly(s.initial);
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    try {
      a = g.apply_step(a, s.steps[i]);
    } catch (const Error& e) {
      throw StepFailed(i, e);
    }
  }
  return a;
}

/// A derivation that grows `initial` into a translate of `target` (the translate
/// that contains the initial cells, first found in target order). Each step places a
/// missing target cell against a present one, preferring face relations, then edge,
/// then vertex. Throws InvalidParams when no translate contains the initial shape or
/// some target cell cannot be reached.
inline DerivationScript script_for(const LatticeAssembly& target_in, std::string_view initial,
                                   const Grammar& g = default_grammar()) {
  Assembly a = initial_assembly(initial);
  if (!a.is_lattice()) throw InvalidParams("initial shape must be a honeycomb assembly");
  std::optional<LatticeAssembly> fit;
  const LatticePlacement first = *a.at(0).placement;
  for (const auto& c : target_in.cells()) {
    if (c.species != first.species) continue;
    const LatticeAssembly moved = target_in.translated(first.anchor - c.anchor);
    bool all = true;
    for (const auto& x : a.cells()) all = all && moved.contains(*x.placement);
    if (all) {
      fit = moved;
      break;
    }
  }
  if (!fit) throw InvalidParams("no translate of the target contains the initial shape");
  const LatticeAssembly& target = *fit;
  std::set<LatticePlacement> present;
  for (const auto& c : a.cells()) present.insert(*c.placement);
  DerivationScript script{std::string(initial), {}};
  std::vector<LatticePlacement> todo;
  for (const auto& c : target.cells())
    if (!present.count(c)) todo.push_back(c);

  auto try_place = [&](const LatticePlacement& want, Relation rel) -> std::optional<DerivationStep> {
    const auto want_vs = want.vertices();
    const ConvexCell want_cell = want.to_cell();
    for (std::size_t h = 0; h < a.size(); ++h) {
      const ConvexCell& host = a.cell(h);
      if (distance(host.centroid(), want_cell.centroid()) > 3.0) continue;
      const GrammarRule& r = g.rule(shape_of(want.species), host.shape(), rel);
      const auto& cat = g.catalog(host.species(), r.incoming, rel);
      for (std::size_t f = 0; f < cat.size(); ++f)
        for (std::size_t v = 0; v < cat[f].size(); ++v) {
          const ConvexCell placed = canonical_cell(r.incoming).transformed(g.placement(host, r, f, v));
          if (auto id = identify(placed); id && *id == want) return DerivationStep{r.id, h, f, v};
        }
    }
    return std::nullopt;
  };

  while (!todo.empty()) {
    bool progressed = false;
    for (Relation rel : {Relation::FaceToFace, Relation::EdgeToEdge, Relation::VertexToVertex}) {
      for (auto it = todo.begin(); it != todo.end(); ++it) {
        auto step = try_place(*it, rel);
        if (!step) continue;
        a = g.apply_step(a, *step);
        script.steps.push_back(*step);
        todo.erase(it);
        progressed = true;
        break;
      }
      if (progressed) break;
    }
    if (!progressed) throw InvalidParams("target has cells unreachable from the initial shape");
  }
  return script;
}

// ---------------------------------------------------------------------------
// Enumeration.

/// All two-cell designs of a `host`-shape seed and an `incoming` cell under the
/// relation's catalog, deduplicated by fingerprint, in discovery order. For the face
/// relation every incoming face and rotation is tried. `seed_pose` moves the seed.
inline std::vector<Assembly> enumerate_unique(Shape host, Shape incoming, Relation rel,
                                              const Isometry& seed_pose = Isometry::identity(),
                                              const Grammar& g = default_grammar()) {
  if (rel != Relation::FaceToFace && (host == Shape::HalfOcta || incoming == Shape::HalfOcta))
    throw UnsupportedRelation(std::string(to_string(rel)) + " relation is only catalogued for tetra and octa");
  Assembly seed;
  seed.add(canonical_cell(host).transformed(seed_pose));
  const ConvexCell& h = seed.cell(0);
  const ConvexCell inc = canonical_cell(incoming);
  std::vector<Assembly> out;
  std::vector<Fingerprint> seen;
  auto offer = [&](const ConvexCell& placed) {
    if (interiors_overlap(h, placed)) return;
    Assembly a = seed;
    a.add(placed);
    Fingerprint fp = fingerprint(a);
    if (std::find(seen.begin(), seen.end(), fp) != seen.end()) return;
    seen.push_back(std::move(fp));
    out.push_back(std::move(a));
  };
  if (rel == Relation::FaceToFace) {
    for (int fa = 0; fa < h.face_count(); ++fa) {
      if (h.face(fa).size() != 3) continue;
      for (int fb = 0; fb < inc.face_count(); ++fb) {
        if (inc.face(fb).size() != 3) continue;
        for (const Isometry& iso : face_gluings(h, fa, inc, fb)) offer(inc.transformed(iso));
      }
    }
    return out;
  }
  const GrammarRule& r = g.rule(incoming, host, rel);
  const auto& cat = g.catalog(h.species(), incoming, rel);
  for (std::size_t f = 0; f < cat.size(); ++f)
    for (std::size_t v = 0; v < cat[f].size(); ++v) offer(inc.transformed(g.placement(h, r, f, v)));
  return out;
}

}  // namespace octet
