// octet: command-line front end.
//
// Exit codes: 0 success, 1 domain error (or failed validation), 2 usage error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "octet/frame.hpp"
#include "octet/grammar.hpp"
#include "octet/pipeline.hpp"
#include "octet/scene.hpp"
#include "octet/session.hpp"

using namespace octet;

namespace {

void write_out(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") std::cout << bytes;
  else write_file(path, bytes);
}

std::vector<Relation> relations_for(const std::string& r) {
  if (r == "all") return {Relation::FaceToFace, Relation::EdgeToEdge, Relation::VertexToVertex};
  return {relation_from_string(r)};
}

int run_enumerate(const std::string& pair, const std::string& relation, bool lattice_edges) {
  const auto comma = pair.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--pair", "expected two shapes separated by a comma");
  const Shape a = shape_from_string(pair.substr(0, comma));
  const Shape b = shape_from_string(pair.substr(comma + 1));
  const Grammar lattice_grammar({EdgeCatalog::Lattice});
  const Grammar& g = lattice_edges ? lattice_grammar : default_grammar();
  std::vector<Fingerprint> all;
  for (Relation rel : relations_for(relation)) {
    const auto designs = enumerate_unique(a, b, rel, Isometry::identity(), g);
    std::cout << to_string(rel) << ": " << designs.size() << "\n";
    for (const auto& d : designs) {
      const Fingerprint fp = fingerprint(d);
      std::cout << "  " << fp.hex() << "\n";
      if (std::find(all.begin(), all.end(), fp) == all.end()) all.push_back(fp);
    }
  }
  std::cout << "unique designs: " << all.size() << "\n";
  return 0;
}

int run_validate(const std::string& scene_path) {
  const SceneDocument d = parse_scene(read_file(scene_path));
  const Assembly a = scene_assembly(d);
  bool ok = true;
  auto line = [&](bool pass, const std::string& what) {
    ok = ok && pass;
    std::cout << (pass ? "ok   " : "FAIL ") << what << "\n";
  };
  std::size_t bad_cells = 0;
  for (const auto& c : a.cells()) bad_cells += !check_cell(c.cell, 1e-6).empty();
  line(bad_cells == 0, "cells well formed (" + std::to_string(a.size()) + " cells, " + std::to_string(bad_cells) + " bad)");
  const auto overlaps = overlap_audit(a);
  line(overlaps.empty(), "no interior overlaps (" + std::to_string(overlaps.size()) + " overlapping pairs)");
  if (a.empty()) {
    line(false, "scene has cells");
    return 1;
  }
  const FrameGraph g = extract(a);
  const FrameReport r = validate(g);
  line(r.uniform_members, "uniform member length (" + std::to_string(g.member_count()) + " members)");
  line(r.interior_valence, "interior valence 12 (" + std::to_string(r.interior_nodes) + " interior nodes)");
  line(r.connected, "connected (" + std::to_string(r.components) + " components)");
  line(r.triangulated, "every member in a triangle");
  line(g.node_count() == d.frame.nodes.size() && g.members == d.frame.members, "stored frame matches cells");
  if (d.provenance) {
    const Assembly replayed = replay(*d.provenance);
    line(fingerprint(replayed) == fingerprint(a), "provenance replays to the scene");
  }
  for (const auto& f : r.failures) std::cout << "  " << f << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"octet: octet-truss shape grammar and tower generator"};
  app.require_subcommand(1);

  std::string units_flag;
  auto add_units = [&](CLI::App* c) {
    c->add_option("--units", units_flag, "lattice or feet")->check(CLI::IsMember({"lattice", "feet"}));
  };
  auto units_or = [&](Units dflt) { return units_flag.empty() ? dflt : units_from_string(units_flag); };
  std::string out;

  auto* enumerate = app.add_subcommand("enumerate", "count unique two-cell designs");
  std::string pair = "tetra,octa", relation = "all";
  bool lattice_edges = false;
  enumerate->add_option("--pair", pair, "two shapes, e.g. tetra,octa");
  enumerate->add_option("--relation", relation, "face, edge, vertex or all")
      ->check(CLI::IsMember({"face", "edge", "vertex", "all"}));
  enumerate->add_flag("--lattice-edges", lattice_edges, "edge relation restricted to honeycomb placements");

  auto* derive = app.add_subcommand("derive", "replay a derivation script into a scene");
  std::string script_path;
  derive->add_option("--script", script_path, "derivation script (JSON)")->required();
  derive->add_option("--out", out, "scene output path (default stdout)");
  add_units(derive);

  auto* unit = app.add_subcommand("unit", "fundamental unit scene");
  auto* half = app.add_subcommand("half-module", "half-module scene");
  auto* hex = app.add_subcommand("hex-module", "hexagonal module scene");
  auto* plate = app.add_subcommand("plate", "floor plate scene");
  double radius = 2;
  plate->add_option("--radius", radius, "hexagon circumradius in edge lengths")->required();
  auto* tower = app.add_subcommand("tower", "tower scene from a config");
  std::string config;
  tower->add_option("--config", config, "tower config (JSON)");
  for (auto* c : {unit, half, hex, plate, tower}) {
    c->add_option("--out", out, "scene output path (default stdout)");
    add_units(c);
  }

  auto* tower_script = app.add_subcommand("tower-script", "derivation script that grows a tower from a seed");
  std::string seed = "fundamental_unit";
  tower_script->add_option("--config", config, "tower config (JSON)");
  tower_script->add_option("--initial", seed, "seed shape");
  tower_script->add_option("--out", out, "script output path (default stdout)");

  auto* exp = app.add_subcommand("export", "write a scene as Wavefront OBJ");
  std::string scene_path, obj_path;
  bool frame_only = false, cells_only = false;
  exp->add_option("--scene", scene_path, "scene JSON")->required();
  exp->add_option("--obj", obj_path, "OBJ output path")->required();
  auto* fflag = exp->add_flag("--frame", frame_only, "members as l lines (default)");
  exp->add_flag("--cells", cells_only, "cell faces as f lines")->excludes(fflag);

  auto* val = app.add_subcommand("validate", "check a scene");
  val->add_option("--scene", scene_path, "scene JSON")->required();

  auto* serve = app.add_subcommand("serve", "run the session service");
  int port = 8080;
  std::string host = "127.0.0.1", snapshots;
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "bind address");
  serve->add_option("--snapshots", snapshots, "directory for per-session script snapshots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto tower_params = [&] { return config.empty() ? TowerParams{} : tower_params_from_json(parse_json_file(config)); };
    if (*enumerate) return run_enumerate(pair, relation, lattice_edges);
    if (*derive) {
      const DerivationScript s = script_from_json(parse_json_file(script_path));
      write_out(out, emit_scene(make_scene(replay(s), units_or(Units::Lattice))));
      return 0;
    }
    if (*unit) write_out(out, emit_scene(make_scene(initial_assembly("fundamental_unit"), units_or(Units::Lattice))));
    if (*half) write_out(out, emit_scene(make_scene(initial_assembly("half_module"), units_or(Units::Lattice))));
    if (*hex) write_out(out, emit_scene(make_scene(initial_assembly("hexagonal_module"), units_or(Units::Lattice))));
    if (*plate) write_out(out, emit_scene(make_scene(Assembly::from_lattice(floor_plate(radius)), units_or(Units::Lattice))));
    if (*tower) {
      const Tower t = build_tower(tower_params());
      write_out(out, emit_scene(make_scene(Assembly::from_lattice(t.cells), units_or(Units::Feet))));
    }
    if (*tower_script) {
      const Tower t = build_tower(tower_params());
      write_out(out, script_to_json(script_for(t.cells, seed)).dump(1) + "\n");
    }
    if (*exp) {
      const SceneDocument d = parse_scene(read_file(scene_path));
      write_file(obj_path, cells_only ? obj_cells(d) : obj_frame(d));
    }
    if (*val) return run_validate(scene_path);
    if (*serve) {
      SessionService service(default_grammar(), snapshots);
      httplib::Server server;
      mount(server, service);
      std::cerr << "listening on " << host << ":" << port << "\n";
      if (!server.listen(host, port)) throw IoFailure("cannot bind " + host + ":" + std::to_string(port));
    }
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
