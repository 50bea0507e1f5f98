#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include "octet/session.hpp"

using namespace octet;

namespace {

using Query = std::multimap<std::string, std::string>;

Reply post(SessionService& s, const std::string& path, const Json& body) { return s.handle("POST", path, {}, body.dump()); }
Reply get(SessionService& s, const std::string& path, const Query& q = {}) { return s.handle("GET", path, q, ""); }

std::string create(SessionService& s, const std::string& initial) {
  const Reply r = post(s, "/sessions", {{"initial", initial}});
  EXPECT_EQ(r.status, 201) << r.body.dump();
  return r.body["id"].get<std::string>();
}

}  // namespace

TEST(Session, CreateFromSpeciesAndProducts) {
  SessionService s;
  Reply r = post(s, "/sessions", {{"initial", "octa"}});
  ASSERT_EQ(r.status, 201);
  EXPECT_EQ(r.body["cell_count"], 1);
  EXPECT_EQ(r.body["cells"].size(), 1u);
  EXPECT_EQ(r.body["fingerprint"], fingerprint(initial_assembly("octa")).hex());
  r = post(s, "/sessions", {{"initial", "fundamental_unit"}});
  ASSERT_EQ(r.status, 201);
  EXPECT_EQ(r.body["cell_count"], 3);
  EXPECT_EQ(r.body["fingerprint"], fingerprint(fundamental_unit()).hex());
  EXPECT_EQ(post(s, "/sessions", {{"initial", "pyramid"}}).status, 400);
  EXPECT_EQ(post(s, "/sessions", {{"seed", "octa"}}).status, 400);
  EXPECT_EQ(s.handle("POST", "/sessions", {}, "{oops").status, 400);
  EXPECT_EQ(s.session_count(), 2u);
}

TEST(Session, MatchesMirrorTheGrammar) {
  SessionService s;
  const std::string id = create(s, "octa");
  const Reply r = get(s, "/sessions/" + id + "/matches", {{"rule", "T-on-O.face"}});
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body["matches"].size(), 24u);
  const auto direct = find_matches(initial_assembly("octa"), "T-on-O.face");
  for (std::size_t i = 0; i < direct.size(); ++i) {
    EXPECT_EQ(r.body["matches"][i]["host"], direct[i].host);
    EXPECT_EQ(r.body["matches"][i]["feature"], direct[i].feature);
    EXPECT_EQ(r.body["matches"][i]["variant"], direct[i].variant);
  }
  EXPECT_EQ(r.body["state"], direct[0].state);
  EXPECT_EQ(get(s, "/sessions/" + id + "/matches", {{"rule", "T-on-O.face"}}).body.dump(), r.body.dump());
  EXPECT_EQ(get(s, "/sessions/" + id + "/matches", {{"rule", "Z-on-O.face"}}).status, 400);
  EXPECT_EQ(get(s, "/sessions/" + id + "/matches").status, 400);
  EXPECT_EQ(get(s, "/sessions/nope/matches", {{"rule", "T-on-O.face"}}).status, 404);
}

TEST(Session, ApplyUndoAndStaleness) {
  SessionService s;
  const std::string id = create(s, "octa");
  const std::string base = "/sessions/" + id;
  const Reply m = get(s, base + "/matches", {{"rule", "T-on-O.face"}});
  const std::string fp0 = get(s, base).body["fingerprint"];
  const std::string state0 = m.body["state"];

  Reply a = post(s, base + "/apply", {{"rule", "T-on-O.face"}, {"match", 5}, {"state", state0}});
  ASSERT_EQ(a.status, 200) << a.body.dump();
  EXPECT_EQ(a.body["cell_count"], 2);
  EXPECT_NE(a.body["state"], state0);

  // The old match list is stale now.
  EXPECT_EQ(post(s, base + "/apply", {{"rule", "T-on-O.face"}, {"match", 6}, {"state", state0}}).status, 409);
  EXPECT_EQ(post(s, base + "/apply", {{"rule", "T-on-O.face"}, {"match", 999}, {"state", a.body["state"]}}).status, 400);
  EXPECT_EQ(post(s, base + "/apply", {{"match", 1}}).status, 400);

  const Reply u = post(s, base + "/undo", Json::object());
  ASSERT_EQ(u.status, 200);
  EXPECT_EQ(u.body["fingerprint"], fp0);
  EXPECT_EQ(u.body["state"], state0);
  EXPECT_EQ(post(s, base + "/undo", Json::object()).status, 409);
}

TEST(Session, RecordedScriptReplays) {
  SessionService s;
  const std::string id = create(s, "octa");
  const std::string base = "/sessions/" + id;
  const char* rules[] = {"T-on-O.face", "O-on-T.face", "T-on-O.face", "T-on-O.vertex", "O-on-O.edge"};
  Json last;
  for (const char* rule : rules) {
    const Reply m = get(s, base + "/matches", {{"rule", rule}});
    ASSERT_FALSE(m.body["matches"].empty()) << rule;
    const std::size_t pick = m.body["matches"].size() / 3;
    last = post(s, base + "/apply", {{"rule", rule}, {"match", pick}, {"state", m.body["state"]}}).body;
  }
  const Reply script = get(s, base + "/script");
  const Assembly replayed = replay(script_from_json(script.body));
  EXPECT_EQ(fingerprint(replayed).hex(), last["fingerprint"]);
  EXPECT_EQ(replayed.digest(), last["state"]);
  EXPECT_EQ(script_to_json(s.script(id)), script.body);
}

TEST(Session, SceneMatchesState) {
  SessionService s;
  const std::string id = create(s, "fundamental_unit");
  const Reply r = get(s, "/sessions/" + id + "/scene", {{"units", "feet"}});
  ASSERT_EQ(r.status, 200);
  const SceneDocument d = scene_from_json(r.body);
  EXPECT_EQ(d.cells.size(), 3u);
  EXPECT_EQ(d.units, "feet");
  EXPECT_EQ(emit_scene(d), r.body.dump(1) + "\n");
  EXPECT_EQ(get(s, "/sessions/" + id + "/scene", {{"units", "cubits"}}).status, 400);
}

TEST(Session, UnknownRoutes) {
  SessionService s;
  EXPECT_EQ(get(s, "/nowhere").status, 404);
  EXPECT_EQ(get(s, "/sessions").status, 405);
  EXPECT_EQ(s.handle("OPTIONS", "/sessions", {}, "").status, 204);
  EXPECT_EQ(get(s, "/rules").body["rules"].size(), default_grammar().rules().size());
}

TEST(Session, ConcurrentAppliesToOneSessionSerialize) {
  SessionService s;
  const std::string id = create(s, "octa");
  const std::string base = "/sessions/" + id;
  const Reply m = get(s, base + "/matches", {{"rule", "T-on-O.face"}});
  std::vector<int> status(8, 0);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&, i] {
      status[static_cast<std::size_t>(i)] =
          post(s, base + "/apply", {{"rule", "T-on-O.face"}, {"match", i}, {"state", m.body["state"]}}).status;
    });
  for (auto& t : threads) t.join();
  EXPECT_EQ(std::count(status.begin(), status.end(), 200), 1);
  EXPECT_EQ(std::count(status.begin(), status.end(), 409), 7);
  EXPECT_EQ(get(s, base).body["cell_count"], 2);
}

TEST(Session, SessionsAreIndependent) {
  SessionService s;
  std::vector<std::string> ids;
  for (int i = 0; i < 6; ++i) ids.push_back(create(s, "octa"));
  std::vector<std::thread> threads;
  for (const auto& id : ids)
    threads.emplace_back([&s, id] {
      for (int k = 0; k < 3; ++k) {
        const Reply m = get(s, "/sessions/" + id + "/matches", {{"rule", "T-on-O.face"}});
        post(s, "/sessions/" + id + "/apply", {{"rule", "T-on-O.face"}, {"match", 0}, {"state", m.body["state"]}});
      }
    });
  for (auto& t : threads) t.join();
  const Json first = get(s, "/sessions/" + ids[0]).body;
  for (const auto& id : ids) {
    const Json st = get(s, "/sessions/" + id).body;
    EXPECT_EQ(st["cell_count"], 4);
    EXPECT_EQ(st["state"], first["state"]);
  }
}

TEST(Session, SnapshotsScripts) {
  const auto dir = std::filesystem::temp_directory_path() / "octet_session_snapshots";
  std::filesystem::remove_all(dir);
  SessionService s(default_grammar(), dir.string());
  const std::string id = create(s, "octa");
  const Reply m = get(s, "/sessions/" + id + "/matches", {{"rule", "T-on-O.face"}});
  post(s, "/sessions/" + id + "/apply", {{"rule", "T-on-O.face"}, {"match", 0}, {"state", m.body["state"]}});
  const DerivationScript saved = script_from_json(parse_json_file((dir / (id + ".json")).string()));
  EXPECT_EQ(saved.steps.size(), 1u);
  EXPECT_EQ(replay(saved).digest(), get(s, "/sessions/" + id).body["state"]);
  std::filesystem::remove_all(dir);
}

// End-to-end over a real socket.
TEST(Http, LiveServer) {
  SessionService service;
  httplib::Server server;
  mount(server, service);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client cli("127.0.0.1", port);
  auto r = cli.Post("/sessions", R"({"initial":"octa"})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 201);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
  const Json created = Json::parse(r->body);
  const std::string base = "/sessions/" + created["id"].get<std::string>();

  r = cli.Get(base + "/matches?rule=T-on-O.face");
  ASSERT_TRUE(r);
  const Json matches = Json::parse(r->body);
  EXPECT_EQ(matches["matches"].size(), 24u);

  const Json body{{"rule", "T-on-O.face"}, {"match", 0}, {"state", matches["state"]}};
  r = cli.Post(base + "/apply", body.dump(), "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  r = cli.Post(base + "/apply", body.dump(), "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 409);
  r = cli.Post(base + "/undo", "{}", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(Json::parse(r->body)["fingerprint"], created["fingerprint"]);
  r = cli.Get(base + "/scene");
  ASSERT_TRUE(r);
  EXPECT_EQ(scene_from_json(Json::parse(r->body)).cells.size(), 1u);
  r = cli.Get("/sessions/zzz");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 404);

  server.stop();
  th.join();
}
