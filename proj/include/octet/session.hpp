#pragma once
// Interactive derivation sessions over HTTP/JSON.
//
// SessionService holds the state and answers requests as (status, JSON) pairs;
// serve() binds it to an httplib server.

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <regex>
#include <shared_mutex>
#include <string>
#include <vector>

#include <httplib.h>

#include "octet/grammar.hpp"
#include "octet/scene.hpp"

namespace octet {

struct Reply {
  int status = 200;
  Json body;
};

struct Session {
  std::string id;
  std::string initial;
  Assembly current;
  std::vector<DerivationStep> steps;
  std::vector<Assembly> history;  ///< assemblies before each step
  mutable std::shared_mutex mutex;
};

class SessionService {
 public:
  explicit SessionService(const Grammar& grammar = default_grammar(), std::string snapshot_dir = {})
      : grammar_(grammar), snapshot_dir_(std::move(snapshot_dir)) {}

  /// `method` is "GET", "POST" or "OPTIONS"; `path` excludes the query string.
  Reply handle(const std::string& method, const std::string& path, const std::multimap<std::string, std::string>& query,
               const std::string& body) {
    try {
      return route(method, path, query, body);
    } catch (const Error& e) {
      return error(400, e.code(), e.what());
    } catch (const Json::exception& e) {
      return error(400, "BadRequest", e.what());
    }
  }

  std::size_t session_count() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
  }

  /// Recorded script of a session (for offline replay).
  DerivationScript script(const std::string& id) const {
    auto s = find(id);
    if (!s) throw InvalidParams("unknown session " + id);
    std::shared_lock lock(s->mutex);
    return {s->initial, s->steps};
  }

 private:
  static Reply error(int status, const std::string& code, const std::string& message) {
    return {status, {{"error", code}, {"message", message}}};
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  static Json state_json(const Session& s) {
    Json cells = Json::array();
    for (const auto& c : s.current.cells()) {
      Json vs = Json::array();
      for (const Vec3& v : c.cell.vertices()) vs.push_back(detail::vec_json(v));
      cells.push_back({{"species", std::string(to_string(c.cell.species()))}, {"vertices", vs}, {"tags", tag_names(c.tags)}});
    }
    return {{"id", s.id},
            {"state", s.current.digest()},
            {"fingerprint", fingerprint(s.current).hex()},
            {"cell_count", s.current.size()},
            {"cells", cells},
            {"script", script_to_json({s.initial, s.steps})}};
  }

  static Json isometry_json(const Isometry& iso) {
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r) rows.push_back(detail::vec_json(iso.linear.row(r)));
    return {{"rotation", rows}, {"translation", detail::vec_json(iso.translation)}, {"proper", iso.proper}};
  }

  void snapshot(const Session& s) const {
    if (snapshot_dir_.empty()) return;
    std::filesystem::create_directories(snapshot_dir_);
    write_file((std::filesystem::path(snapshot_dir_) / (s.id + ".json")).string(),
               script_to_json({s.initial, s.steps}).dump(1) + "\n");
  }

  Reply route(const std::string& method, const std::string& path, const std::multimap<std::string, std::string>& query,
              const std::string& body) {
    if (method == "OPTIONS") return {204, nullptr};
    if (path == "/rules" && method == "GET") {
      Json rules = Json::array();
      for (const auto& r : grammar_.rules())
        rules.push_back({{"id", r.id}, {"host", std::string(to_string(r.host))},
                         {"incoming", std::string(to_string(r.incoming))}, {"relation", std::string(to_string(r.relation))}});
      return {200, {{"rules", rules}}};
    }
    if (path == "/sessions") {
      if (method != "POST") return error(405, "MethodNotAllowed", method + " " + path);
      return create(body);
    }
    static const std::regex re("^/sessions/([A-Za-z0-9_-]+)(/(matches|apply|undo|scene|script))?$");
    std::smatch m;
    if (!std::regex_match(path, m, re)) return error(404, "NotFound", path);
    auto s = find(m[1].str());
    if (!s) return error(404, "UnknownSession", "no session " + m[1].str());
    const std::string action = m[3].str();
    if (action.empty() && method == "GET") {
      std::shared_lock lock(s->mutex);
      return {200, state_json(*s)};
    }
    if (action == "matches" && method == "GET") return matches(*s, query);
    if (action == "apply" && method == "POST") return apply(*s, body);
    if (action == "undo" && method == "POST") return undo(*s);
    if (action == "scene" && method == "GET") {
      Units units = Units::Lattice;
      if (auto it = query.find("units"); it != query.end()) units = units_from_string(it->second);
      std::shared_lock lock(s->mutex);
      return {200, scene_to_json(make_scene(s->current, units))};
    }
    if (action == "script" && method == "GET") {
      std::shared_lock lock(s->mutex);
      return {200, script_to_json({s->initial, s->steps})};
    }
    return error(405, "MethodNotAllowed", method + " " + path);
  }

  Reply create(const std::string& body) {
    const Json j = body.empty() ? Json::object() : Json::parse(body);
    if (!j.is_object() || !j.contains("initial") || !j["initial"].is_string())
      return error(400, "BadRequest", "body must be {\"initial\": <species or pipeline product>}");
    const std::string initial = j["initial"].get<std::string>();
    Assembly a;
    try {
      a = initial_assembly(initial);
    } catch (const Error& e) {
      return error(400, e.code(), e.what());
    }
    auto s = std::make_shared<Session>();
    s->id = "s" + std::to_string(++counter_);
    s->initial = initial;
    s->current = std::move(a);
    {
      std::unique_lock lock(mutex_);
      sessions_.emplace(s->id, s);
    }
    snapshot(*s);
    std::shared_lock lock(s->mutex);
    return {201, state_json(*s)};
  }

  Reply matches(Session& s, const std::multimap<std::string, std::string>& query) {
    auto it = query.find("rule");
    if (it == query.end()) return error(400, "BadRequest", "missing rule parameter");
    std::shared_lock lock(s.mutex);
    std::vector<Match> ms;
    try {
      ms = grammar_.find_matches(s.current, it->second);
    } catch (const UnknownRule& e) {
      return error(400, e.code(), e.what());
    }
    Json list = Json::array();
    for (std::size_t i = 0; i < ms.size(); ++i)
      list.push_back({{"index", i}, {"host", ms[i].host}, {"feature", ms[i].feature}, {"variant", ms[i].variant},
                      {"preview", isometry_json(ms[i].placement)}});
    return {200, {{"rule", it->second}, {"state", s.current.digest()}, {"matches", list}}};
  }

  Reply apply(Session& s, const std::string& body) {
    const Json j = Json::parse(body);
    if (!j.is_object() || !j.contains("rule") || !j["rule"].is_string() || !j.contains("match") ||
        !j["match"].is_number_integer() || !j.contains("state") || !j["state"].is_string())
      return error(400, "BadRequest", "body must be {\"rule\", \"match\", \"state\"}");
    const std::string rule = j["rule"].get<std::string>();
    const long long index = j["match"].get<long long>();
    std::unique_lock lock(s.mutex);
    if (j["state"].get<std::string>() != s.current.digest())
      return error(409, "StaleMatch", "session changed since the match list was fetched");
    const auto ms = grammar_.find_matches(s.current, rule);
    if (index < 0 || static_cast<std::size_t>(index) >= ms.size())
      return error(400, "UnknownFeature", "match index " + std::to_string(index) + " out of range");
    const Match& m = ms[static_cast<std::size_t>(index)];
    Assembly next = grammar_.apply(s.current, m);
    s.history.push_back(std::move(s.current));
    s.current = std::move(next);
    s.steps.push_back({m.rule, m.host, m.feature, m.variant});
    snapshot(s);
    return {200, state_json(s)};
  }

  Reply undo(Session& s) {
    std::unique_lock lock(s.mutex);
    if (s.steps.empty()) return error(409, "NothingToUndo", "session is at its initial shape");
    s.current = std::move(s.history.back());
    s.history.pop_back();
    s.steps.pop_back();
    snapshot(s);
    return {200, state_json(s)};
  }

  const Grammar& grammar_;
  std::string snapshot_dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<std::uint64_t> counter_{0};
};

/// Routes every request on `server` to `service`, adding CORS headers.
inline void mount(httplib::Server& server, SessionService& service) {
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    const Reply r = service.handle(req.method, req.path, req.params, req.body);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    if (!r.body.is_null()) res.set_content(r.body.dump(), "application/json");
  };
  const std::string any = R"(/.*)";
  server.Get(any, handler);
  server.Post(any, handler);
  server.Options(any, handler);
}

}  // namespace octet
