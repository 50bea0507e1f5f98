#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "octet/grammar.hpp"
#include "octet/scene.hpp"

using namespace octet;

namespace {

const std::string kData = OCTET_DATA_DIR;

std::size_t count_prefix(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
  return n;
}

Json minimal_scene() { return Json::parse(emit_scene(make_scene(initial_assembly("tetra")))); }

void expect_violation(const Json& j, const std::string& pointer) {
  try {
    scene_from_json(j);
    FAIL() << "no violation, expected " << pointer;
  } catch (const SchemaViolation& e) {
    EXPECT_EQ(e.pointer(), pointer) << e.what();
  }
}

}  // namespace

TEST(Scene, RoundTripIsIdentity) {
  for (const char* name : {"octa", "fundamental_unit", "half_module", "hexagonal_module"})
    for (Units u : {Units::Lattice, Units::Feet}) {
      const std::string text = emit_scene(make_scene(initial_assembly(name), u));
      EXPECT_EQ(emit_scene(parse_scene(text)), text) << name;
    }
}

TEST(Scene, GoldenFilesRoundTrip) {
  int seen = 0;
  for (const auto& e : std::filesystem::directory_iterator(kData + "/golden")) {
    if (e.path().extension() != ".json") continue;
    const std::string text = read_file(e.path().string());
    EXPECT_EQ(emit_scene(parse_scene(text)), text) << e.path();
    ++seen;
  }
  EXPECT_GE(seen, 3);
}

TEST(Scene, GoldenFilesAreCurrent) {
  EXPECT_EQ(read_file(kData + "/golden/fundamental_unit.json"),
            emit_scene(make_scene(initial_assembly("fundamental_unit"))));
  EXPECT_EQ(read_file(kData + "/golden/hexagonal_module.json"),
            emit_scene(make_scene(initial_assembly("hexagonal_module"))));
}

TEST(Scene, ContentsMatchAssembly) {
  const Assembly a = initial_assembly("fundamental_unit");
  const SceneDocument d = make_scene(a, Units::Feet);
  EXPECT_EQ(d.cells.size(), 3u);
  EXPECT_EQ(d.frame.nodes.size(), 8u);
  EXPECT_EQ(d.frame.members.size(), 18u);
  EXPECT_EQ(d.fingerprint, fingerprint(a).hex());
  const Assembly back = scene_assembly(d);
  EXPECT_TRUE(back.is_lattice());
  EXPECT_EQ(fingerprint(back), fingerprint(a));
  EXPECT_EQ(back.volume(), Rational(2));
}

TEST(Scene, TowerCellCountSurvives) {
  TowerParams p;
  p.plan_radius = 1;
  const Tower t = build_tower(p);
  const SceneDocument d = parse_scene(emit_scene(make_scene(Assembly::from_lattice(t.cells), Units::Feet)));
  EXPECT_EQ(d.cells.size(), t.cells.size());
  const Assembly back = scene_assembly(d);
  ASSERT_TRUE(back.is_lattice());
  const LatticeAssembly la = back.to_lattice();
  EXPECT_TRUE(la.same_cells(t.cells));
  for (std::size_t i = 0; i < la.size(); ++i) EXPECT_EQ(back.at(i).tags, t.cells.tags(i));
}

TEST(Scene, SchemaViolations) {
  Json j = minimal_scene();
  j.erase("cells");
  expect_violation(j, "/cells");

  j = minimal_scene();
  j["extra"] = 1;
  expect_violation(j, "/extra");

  j = minimal_scene();
  j["cells"][0]["species"] = "pyramid";
  expect_violation(j, "/cells/0/species");

  j = minimal_scene();
  j["cells"][0]["vertices"].erase(0);
  expect_violation(j, "/cells/0/vertices");

  j = minimal_scene();
  j["cells"][0]["vertices"][2][1] = "x";
  expect_violation(j, "/cells/0/vertices/2/1");

  j = minimal_scene();
  j["cells"][0]["tags"] = Json::array({"ROOF"});
  expect_violation(j, "/cells/0/tags/0");

  j = minimal_scene();
  j["frame"]["members"][0] = Json::array({0, 99});
  expect_violation(j, "/frame/members/0");

  j = minimal_scene();
  j["units"] = "metres";
  expect_violation(j, "/units");

  j = minimal_scene();
  j["provenance"]["steps"] = Json::array({Json{{"rule", "T-on-O.face"}}});
  expect_violation(j, "/provenance/steps/0/host");

  EXPECT_THROW(parse_scene("{not json"), SchemaViolation);
}

TEST(Obj, CellFaces) {
  const SceneDocument d = make_scene(initial_assembly("tetra"));
  const std::string obj = obj_cells(d);
  EXPECT_EQ(count_prefix(obj, "v "), 4u);
  EXPECT_EQ(count_prefix(obj, "f "), 4u);
  EXPECT_EQ(obj, obj_cells(parse_scene(emit_scene(d))));
}

TEST(Obj, FrameCountsMatchGraph) {
  const Assembly a = initial_assembly("fundamental_unit");
  const SceneDocument d = make_scene(a, Units::Feet);
  const FrameGraph g = extract(a);
  const std::string obj = obj_frame(d);
  EXPECT_EQ(count_prefix(obj, "v "), g.node_count());
  EXPECT_EQ(count_prefix(obj, "l "), g.member_count());
}

TEST(Obj, NineSignificantDigits) {
  const SceneDocument d = make_scene(initial_assembly("octa"), Units::Feet);
  const std::string obj = obj_frame(d);
  std::istringstream in(obj);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) != 0) continue;
    std::istringstream ls(line.substr(2));
    std::string tok;
    while (ls >> tok) {
      std::size_t digits = 0;
      for (char c : tok.substr(0, tok.find('e'))) digits += std::isdigit(static_cast<unsigned char>(c)) != 0;
      EXPECT_LE(digits, 9u) << tok;
    }
  }
}

TEST(Files, WriteFailureIsIoFailure) {
  EXPECT_THROW(write_file("/nonexistent-dir/x.obj", "v 0 0 0\n"), IoFailure);
  EXPECT_THROW(read_file("/nonexistent-dir/x.json"), IoFailure);
}

TEST(Config, TowerParamsRoundTrip) {
  TowerParams p;
  p.bays = 3;
  p.twist_per_bay = 120;
  p.floor_layers = {1, 3, 5};
  p.floors_per_bay = 3;
  const TowerParams q = tower_params_from_json(tower_params_to_json(p));
  EXPECT_EQ(tower_params_to_json(q), tower_params_to_json(p));
  Json bad = tower_params_to_json(p);
  bad["height"] = 1;
  EXPECT_THROW(tower_params_from_json(bad), SchemaViolation);
  const TowerParams shipped = tower_params_from_json(parse_json_file(kData + "/city_tower.json"));
  EXPECT_NO_THROW(shipped.validate());
}

TEST(Config, ScriptRoundTrip) {
  const DerivationScript s{"fundamental_unit", {{"T-on-O.face", 0, 1, 2}, {"O-on-T.edge", 3, 4, 0}}};
  EXPECT_EQ(script_from_json(script_to_json(s)), s);
  Json j = script_to_json(s);
  j["steps"][1]["variant"] = -1;
  EXPECT_THROW(script_from_json(j), SchemaViolation);
}
