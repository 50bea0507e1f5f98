#pragma once
// Scene documents (JSON), derivation scripts, tower configs and OBJ output.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "octet/assembly.hpp"
#include "octet/fingerprint.hpp"
#include "octet/frame.hpp"
#include "octet/pipeline.hpp"

namespace octet {

using Json = nlohmann::ordered_json;

enum class Units : std::uint8_t { Lattice, Feet };

inline std::string to_string(Units u) { return u == Units::Feet ? "feet" : "lattice"; }

inline Units units_from_string(const std::string& s) {
  if (s == "lattice") return Units::Lattice;
  if (s == "feet") return Units::Feet;
  throw InvalidParams("units must be 'lattice' or 'feet', got '" + s + "'");
}

inline WorldTransform transform_for(Units u) { return u == Units::Feet ? WorldTransform::feet() : WorldTransform::lattice(); }

struct SceneCell {
  Species species = Species::Octa;
  std::vector<Vec3> vertices;
  std::vector<std::string> tags;
  friend bool operator==(const SceneCell&, const SceneCell&) = default;
};

struct SceneFrame {
  std::vector<Vec3> nodes;
  std::vector<Member> members;
  friend bool operator==(const SceneFrame&, const SceneFrame&) = default;
};

struct SceneDocument {
  std::string units = "lattice";
  WorldTransform transform = WorldTransform::lattice();
  std::string fingerprint;
  std::vector<SceneCell> cells;
  SceneFrame frame;
  std::optional<DerivationScript> provenance;
};

// ---------------------------------------------------------------------------
// Schema helpers.

namespace detail {

inline std::string ptr(const std::string& base, const std::string& key) { return base + "/" + key; }
inline std::string ptr(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

inline const Json& field(const Json& obj, const std::string& base, const std::string& key) {
  if (!obj.contains(key)) throw SchemaViolation(ptr(base, key), "missing required field");
  return obj.at(key);
}

inline void expect_object(const Json& j, const std::string& at) {
  if (!j.is_object()) throw SchemaViolation(at.empty() ? "/" : at, "expected an object");
}

inline void expect_array(const Json& j, const std::string& at) {
  if (!j.is_array()) throw SchemaViolation(at, "expected an array");
}

inline void only_keys(const Json& obj, const std::string& base, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* allowed : keys) known = known || k == allowed;
    if (!known) throw SchemaViolation(ptr(base, k), "unknown field");
  }
}

inline double number(const Json& j, const std::string& at) {
  if (!j.is_number()) throw SchemaViolation(at, "expected a number");
  return j.get<double>();
}

inline std::size_t index(const Json& j, const std::string& at) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw SchemaViolation(at, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::string text(const Json& j, const std::string& at) {
  if (!j.is_string()) throw SchemaViolation(at, "expected a string");
  return j.get<std::string>();
}

inline double clean(double v) { return v == 0 ? 0.0 : v; }

inline Json vec_json(const Vec3& v) { return Json::array({clean(v.x), clean(v.y), clean(v.z)}); }

inline Vec3 vec_from(const Json& j, const std::string& at) {
  expect_array(j, at);
  if (j.size() != 3) throw SchemaViolation(at, "expected 3 coordinates");
  return {number(j[0], ptr(at, 0)), number(j[1], ptr(at, 1)), number(j[2], ptr(at, 2))};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Derivation scripts.

inline Json script_to_json(const DerivationScript& s) {
  Json steps = Json::array();
  for (const auto& st : s.steps)
    steps.push_back({{"rule", st.rule}, {"host", st.host}, {"feature", st.feature}, {"variant", st.variant}});
  return {{"initial", s.initial}, {"steps", steps}};
}

inline DerivationScript script_from_json(const Json& j, const std::string& base = "") {
  using namespace detail;
  expect_object(j, base);
  only_keys(j, base, {"initial", "steps"});
  DerivationScript s;
  s.initial = text(field(j, base, "initial"), ptr(base, "initial"));
  const Json& steps = field(j, base, "steps");
  expect_array(steps, ptr(base, "steps"));
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string at = ptr(ptr(base, "steps"), i);
    const Json& st = steps[i];
    expect_object(st, at);
    only_keys(st, at, {"rule", "host", "feature", "variant"});
    s.steps.push_back({text(field(st, at, "rule"), ptr(at, "rule")), index(field(st, at, "host"), ptr(at, "host")),
                       index(field(st, at, "feature"), ptr(at, "feature")),
                       index(field(st, at, "variant"), ptr(at, "variant"))});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Tower configuration.

inline Json tower_params_to_json(const TowerParams& p) {
  return {{"bay_height", p.bay_height},
          {"capital_depth", p.capital_depth},
          {"bays", p.bays},
          {"floors_per_bay", p.floors_per_bay},
          {"floor_layers", p.floor_layers},
          {"plan_radius", p.plan_radius},
          {"twist_per_bay", p.twist_per_bay},
          {"floor_offset_policy", p.floor_offset_policy == FloorOffsetPolicy::Fixed ? "fixed" : "alternate"}};
}

/// Missing fields keep their defaults; unknown fields are rejected.
inline TowerParams tower_params_from_json(const Json& j) {
  using namespace detail;
  expect_object(j, "");
  only_keys(j, "", {"bay_height", "capital_depth", "bays", "floors_per_bay", "floor_layers", "plan_radius",
                    "twist_per_bay", "floor_offset_policy"});
  TowerParams p;
  auto integer = [&](const char* k) {
    const Json& v = j.at(k);
    if (!v.is_number_integer()) throw SchemaViolation(ptr("", k), "expected an integer");
    return v.get<int>();
  };
  if (j.contains("bay_height")) p.bay_height = number(j["bay_height"], "/bay_height");
  if (j.contains("capital_depth")) p.capital_depth = number(j["capital_depth"], "/capital_depth");
  if (j.contains("bays")) p.bays = integer("bays");
  if (j.contains("floors_per_bay")) p.floors_per_bay = integer("floors_per_bay");
  if (j.contains("floor_layers")) {
    const Json& a = j["floor_layers"];
    expect_array(a, "/floor_layers");
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].is_number_integer()) throw SchemaViolation(ptr("/floor_layers", i), "expected an integer");
      p.floor_layers.push_back(a[i].get<int>());
    }
  }
  if (j.contains("plan_radius")) p.plan_radius = number(j["plan_radius"], "/plan_radius");
  if (j.contains("twist_per_bay")) p.twist_per_bay = integer("twist_per_bay");
  if (j.contains("floor_offset_policy")) {
    const std::string s = text(j["floor_offset_policy"], "/floor_offset_policy");
    if (s == "alternate") p.floor_offset_policy = FloorOffsetPolicy::Alternate;
    else if (s == "fixed") p.floor_offset_policy = FloorOffsetPolicy::Fixed;
    else throw SchemaViolation("/floor_offset_policy", "expected 'alternate' or 'fixed'");
  }
  return p;
}

// ---------------------------------------------------------------------------
// Scenes.

/// Geometry, frame and provenance of `a` in the given units.
inline SceneDocument make_scene(const Assembly& a, Units units = Units::Lattice) {
  SceneDocument d;
  d.units = to_string(units);
  d.transform = transform_for(units);
  if (!a.empty()) d.fingerprint = fingerprint(a).hex();
  for (const auto& c : a.cells()) {
    SceneCell sc{c.cell.species(), {}, tag_names(c.tags)};
    for (const Vec3& v : c.cell.vertices()) sc.vertices.push_back(d.transform(v));
    d.cells.push_back(std::move(sc));
  }
  if (!a.empty()) {
    const FrameGraph g = extract(a);
    for (const Vec3& v : g.nodes) d.frame.nodes.push_back(d.transform(v));
    d.frame.members = g.members;
  }
  d.provenance = a.provenance();
  return d;
}

inline Json scene_to_json(const SceneDocument& d) {
  using detail::vec_json;
  Json rot = Json::array();
  for (int r = 0; r < 3; ++r) rot.push_back(vec_json(d.transform.rotation.linear.row(r)));
  Json cells = Json::array();
  for (const auto& c : d.cells) {
    Json vs = Json::array();
    for (const Vec3& v : c.vertices) vs.push_back(vec_json(v));
    cells.push_back({{"species", std::string(to_string(c.species))}, {"vertices", vs}, {"tags", c.tags}});
  }
  Json nodes = Json::array();
  for (const Vec3& v : d.frame.nodes) nodes.push_back(vec_json(v));
  Json members = Json::array();
  for (const auto& m : d.frame.members) members.push_back(Json::array({m.a, m.b}));
  return {{"units", d.units},
          {"transform",
           {{"rotation", rot}, {"translation", vec_json(d.transform.rotation.translation)},
            {"scale", d.transform.scale}, {"origin", vec_json(d.transform.origin)}}},
          {"fingerprint", d.fingerprint},
          {"cells", cells},
          {"frame", {{"nodes", nodes}, {"members", members}}},
          {"provenance", d.provenance ? script_to_json(*d.provenance) : Json(nullptr)}};
}

inline std::string emit_scene(const SceneDocument& d) { return scene_to_json(d).dump(1) + "\n"; }

inline SceneDocument scene_from_json(const Json& j) {
  using namespace detail;
  expect_object(j, "");
  only_keys(j, "", {"units", "transform", "fingerprint", "cells", "frame", "provenance"});
  SceneDocument d;
  d.units = text(field(j, "", "units"), "/units");
  if (d.units != "lattice" && d.units != "feet") throw SchemaViolation("/units", "expected 'lattice' or 'feet'");

  const Json& t = field(j, "", "transform");
  expect_object(t, "/transform");
  only_keys(t, "/transform", {"rotation", "translation", "scale", "origin"});
  const Json& rot = field(t, "/transform", "rotation");
  expect_array(rot, "/transform/rotation");
  if (rot.size() != 3) throw SchemaViolation("/transform/rotation", "expected 3 rows");
  Mat3 m = Mat3::from_rows(vec_from(rot[0], "/transform/rotation/0"), vec_from(rot[1], "/transform/rotation/1"),
                           vec_from(rot[2], "/transform/rotation/2"));
  d.transform.rotation = {m, vec_from(field(t, "/transform", "translation"), "/transform/translation"), m.determinant() > 0};
  d.transform.scale = number(field(t, "/transform", "scale"), "/transform/scale");
  d.transform.origin = vec_from(field(t, "/transform", "origin"), "/transform/origin");
  try {
    d.transform.rotation.proper = true;
    d.transform.validate();
  } catch (const Error& e) {
    throw SchemaViolation("/transform", e.what());
  }

  d.fingerprint = text(field(j, "", "fingerprint"), "/fingerprint");

  const Json& cells = field(j, "", "cells");
  expect_array(cells, "/cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string at = ptr("/cells", i);
    const Json& c = cells[i];
    expect_object(c, at);
    only_keys(c, at, {"species", "vertices", "tags"});
    SceneCell sc;
    try {
      sc.species = species_from_string(text(field(c, at, "species"), ptr(at, "species")));
    } catch (const SchemaViolation&) {
      throw;
    } catch (const Error& e) {
      throw SchemaViolation(ptr(at, "species"), e.what());
    }
    const Json& vs = field(c, at, "vertices");
    expect_array(vs, ptr(at, "vertices"));
    const std::size_t want = static_cast<std::size_t>(canonical_cell(sc.species).vertex_count());
    if (vs.size() != want) throw SchemaViolation(ptr(at, "vertices"), "expected " + std::to_string(want) + " vertices");
    for (std::size_t k = 0; k < vs.size(); ++k) sc.vertices.push_back(vec_from(vs[k], ptr(ptr(at, "vertices"), k)));
    const Json& tags = field(c, at, "tags");
    expect_array(tags, ptr(at, "tags"));
    for (std::size_t k = 0; k < tags.size(); ++k) {
      const std::string name = text(tags[k], ptr(ptr(at, "tags"), k));
      if (name != "CAPITAL" && name != "FLOOR") throw SchemaViolation(ptr(ptr(at, "tags"), k), "unknown tag");
      sc.tags.push_back(name);
    }
    d.cells.push_back(std::move(sc));
  }

  const Json& f = field(j, "", "frame");
  expect_object(f, "/frame");
  only_keys(f, "/frame", {"nodes", "members"});
  const Json& nodes = field(f, "/frame", "nodes");
  expect_array(nodes, "/frame/nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) d.frame.nodes.push_back(vec_from(nodes[i], ptr("/frame/nodes", i)));
  const Json& members = field(f, "/frame", "members");
  expect_array(members, "/frame/members");
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::string at = ptr("/frame/members", i);
    expect_array(members[i], at);
    if (members[i].size() != 2) throw SchemaViolation(at, "expected a node index pair");
    const std::size_t a = index(members[i][0], ptr(at, 0)), b = index(members[i][1], ptr(at, 1));
    if (a >= d.frame.nodes.size() || b >= d.frame.nodes.size()) throw SchemaViolation(at, "node index out of range");
    if (a == b) throw SchemaViolation(at, "member endpoints coincide");
    d.frame.members.push_back({a, b});
  }

  const Json& p = field(j, "", "provenance");
  if (!p.is_null()) d.provenance = script_from_json(p, "/provenance");
  return d;
}

inline SceneDocument parse_scene(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaViolation("/", std::string("malformed JSON: ") + e.what());
  }
  return scene_from_json(j);
}

/// Rebuilds the assembly in lattice coordinates by undoing the scene transform.
inline Assembly scene_assembly(const SceneDocument& d) {
  const Isometry inv = d.transform.rotation.inverse();
  Assembly a;
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    const SceneCell& c = d.cells[i];
    std::vector<Vec3> vs;
    for (const Vec3& v : c.vertices) vs.push_back(inv((v - d.transform.origin) / d.transform.scale));
    const ConvexCell ref = canonical_cell(c.species);
    ConvexCell cell(c.species, std::move(vs), {ref.faces().begin(), ref.faces().end()});
    if (const std::string err = check_cell(cell, 1e-6); !err.empty())
      throw SchemaViolation("/cells/" + std::to_string(i), err);
    std::uint8_t tags = 0;
    for (const auto& t : c.tags) tags |= tag_from_name(t);
    a.add(cell, tags);
  }
  if (d.provenance) a.set_provenance(*d.provenance);
  return a;
}

// ---------------------------------------------------------------------------
// Files.

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out << bytes;
  out.flush();
  if (!out) throw IoFailure("write to " + path + " failed");
}

inline Json parse_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaViolation("/", std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Wavefront OBJ.

namespace detail {
inline std::string g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0 ? 0.0 : v);
  return buf;
}
inline void obj_vertex(std::string& out, const Vec3& v) { out += "v " + g9(v.x) + ' ' + g9(v.y) + ' ' + g9(v.z) + '\n'; }
}  // namespace detail

/// `v` lines for every cell vertex (cell by cell), then one `f` line per face.
inline std::string obj_cells(const SceneDocument& d) {
  std::string out = "# cells " + std::to_string(d.cells.size()) + "\n";
  for (const auto& c : d.cells)
    for (const Vec3& v : c.vertices) detail::obj_vertex(out, v);
  std::size_t base = 1;
  for (const auto& c : d.cells) {
    const ConvexCell ref = canonical_cell(c.species);
    // Faces re-oriented outward for this cell's handedness.
    const ConvexCell cell(c.species, c.vertices, {ref.faces().begin(), ref.faces().end()});
    for (const auto& f : cell.faces()) {
      out += 'f';
      for (int k : f) out += ' ' + std::to_string(base + static_cast<std::size_t>(k));
      out += '\n';
    }
    base += c.vertices.size();
  }
  return out;
}

/// `v` lines for frame nodes, then one `l` line per member.
inline std::string obj_frame(const SceneDocument& d) {
  std::string out = "# frame " + std::to_string(d.frame.nodes.size()) + " nodes\n";
  for (const Vec3& v : d.frame.nodes) detail::obj_vertex(out, v);
  for (const auto& m : d.frame.members) out += "l " + std::to_string(m.a + 1) + ' ' + std::to_string(m.b + 1) + '\n';
  return out;
}

}  // namespace octet
