#include "spdf/service.hpp"

#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "spdf/error.hpp"

namespace spdf::service {
namespace fs = std::filesystem;
using nlohmann::json;

ProjectStore::ProjectStore(std::optional<fs::path> root, std::map<std::string, fs::path> mounts)
    : root_(std::move(root)) {
  if (root_) {
    if (!fs::is_directory(*root_)) fail(ErrorKind::NotFound, "store root does not exist: " + root_->string());
    for (const auto& e : fs::directory_iterator(*root_)) {
      if (e.is_directory() && Workspace::exists(e.path())) {
        workspaces_[e.path().filename().string()] = std::make_unique<Workspace>(Workspace::open(e.path()));
      }
    }
  }
  for (const auto& [id, dir] : mounts) workspaces_[id] = std::make_unique<Workspace>(Workspace::open(dir));
}

std::vector<std::string> ProjectStore::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, w] : workspaces_) out.push_back(id);
  return out;
}

Workspace& ProjectStore::get(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = workspaces_.find(id);
  if (it == workspaces_.end()) fail(ErrorKind::NotFound, "unknown project: " + id);
  return *it->second;
}

Workspace& ProjectStore::create(const std::string& id, corpus::Project project) {
  std::lock_guard lock(mutex_);
  if (!corpus::is_valid_id(id)) fail(ErrorKind::InvalidArgument, "invalid project id: '" + id + "'");
  if (!root_) fail(ErrorKind::InvalidArgument, "this store has no root directory for new projects");
  if (workspaces_.contains(id)) fail(ErrorKind::Conflict, "project already exists: " + id);
  auto w = std::make_unique<Workspace>(Workspace::create(*root_ / id, std::move(project)));
  auto& ref = *w;
  workspaces_[id] = std::move(w);
  return ref;
}

namespace {

int http_status(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Parse:
    case ErrorKind::Numerical: return 400;
    case ErrorKind::NotFound: return 404;
    case ErrorKind::Conflict: return 409;
    case ErrorKind::Unavailable: return 503;
    case ErrorKind::Io: return 500;
  }
  return 500;
}

void reply(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed JSON body: ") + e.what());
  }
}

std::string param(const httplib::Request& req, const char* name, std::string fallback = {}) {
  return req.has_param(name) ? req.get_param_value(name) : fallback;
}

json summary(const std::string& id, const corpus::Project& p) {
  json assignments = json::array();
  for (const auto& a : p.assignments()) {
    assignments.push_back({{"id", a.id},
                           {"title", a.title},
                           {"weights", {{"w_cs", a.weights.cs}, {"w_sn", a.weights.sn}, {"w_se", a.weights.se}}},
                           {"documents", p.documents_for(a.id).size()}});
  }
  json people = json::array();
  for (const auto& person : p.people()) people.push_back({{"id", person.id}, {"full_name", person.full_name}});
  return {{"id", id}, {"assignments", assignments}, {"people", people}, {"documents", p.documents().size()}};
}

json match_list(const std::vector<social::IdentityMatch>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(social::match_to_json(m));
  return out;
}

json social_report(const SocialIngestReport& r) {
  json skipped = json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"line", s.line}, {"reason", s.reason}});
  json pending = match_list(r.pending);
  return {{"actions", r.actions}, {"skipped", skipped}, {"pending", pending}};
}

corpus::Project project_from_upload(const json& body) {
  if (body.contains("root")) {
    const fs::path root = body.at("root").get<std::string>();
    return body.contains("manifest") ? corpus::load_project(root, corpus::parse_manifest(body.at("manifest")))
                                     : corpus::load_project(root);
  }
  auto manifest = corpus::parse_manifest(body.at("manifest"));
  std::vector<corpus::Document> docs;
  if (body.contains("submissions")) {
    for (const auto& [aid, per_person] : body.at("submissions").items()) {
      for (const auto& [pid, content] : per_person.items()) {
        corpus::Document d;
        d.id = corpus::document_id(aid, pid);
        d.author = pid;
        d.assignment = aid;
        d.content = content.get<std::string>();
        if (d.content.empty()) continue;
        d.content_hash = corpus::content_digest(d.content);
        docs.push_back(std::move(d));
      }
    }
  }
  return corpus::Project(std::move(manifest), std::move(docs));
}

}  // namespace

Service::Service(ProjectStore& store) : store_(store), server_(std::make_unique<httplib::Server>()) { routes(); }

Service::~Service() { stop(); }

void Service::routes() {
  auto& s = *server_;
  using Req = httplib::Request;
  using Res = httplib::Response;

  s.set_exception_handler([](const Req&, Res& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      reply(res, {{"error", e.what()}, {"retryable", e.retryable()}}, http_status(e.kind()));
    } catch (const json::exception& e) {
      reply(res, {{"error", std::string("bad request: ") + e.what()}, {"retryable", false}}, 400);
    } catch (const std::exception& e) {
      reply(res, {{"error", e.what()}, {"retryable", false}}, 500);
    }
  });

  const std::string P = R"(/api/projects/([A-Za-z0-9_.\-]+))";
  const std::string A = R"(/assignments/([A-Za-z0-9_.\-]+))";

  s.Get("/api/projects", [this](const Req&, Res& res) {
    json out = json::array();
    for (const auto& id : store_.ids()) out.push_back(summary(id, store_.get(id).project()));
    reply(res, out);
  });

  s.Post("/api/projects", [this](const Req& req, Res& res) {
    const auto body = parse_body(req);
    const auto id = body.at("id").get<std::string>();
    auto& w = store_.create(id, project_from_upload(body));
    reply(res, summary(id, w.project()), 201);
  });

  s.Get(P, [this](const Req& req, Res& res) {
    const std::string id = req.matches[1];
    reply(res, summary(id, store_.get(id).project()));
  });

  s.Post(P + "/similarity", [this](const Req& req, Res& res) {
    auto& w = store_.get(req.matches[1]);
    const auto body = parse_body(req);
    if (body.contains("report_csv")) {
      std::istringstream in(body.at("report_csv").get<std::string>());
      reply(res, {{"imported", w.import_similarity(in)}});
      return;
    }
    std::optional<sim::FingerprintParams> params;
    if (body.contains("k") || body.contains("w")) {
      params = sim::FingerprintParams{body.value("k", std::size_t{5}), body.value("w", std::size_t{4})};
    }
    const auto assignment = body.value("assignment", std::string());
    w.run_similarity(assignment, params);
    json counts = json::object();
    const auto p = w.project();
    for (const auto& a : p.assignments()) {
      if (assignment.empty() || a.id == assignment) counts[a.id] = w.similarity(a.id).size();
    }
    reply(res, {{"records", counts}});
  });

  s.Post(P + "/social", [this](const Req& req, Res& res) {
    auto& w = store_.get(req.matches[1]);
    const auto body = parse_body(req);
    auto directory = social::parse_directory(body.value("directory", json::array()));
    std::string actions;
    if (body.contains("actions")) {
      const auto& a = body.at("actions");
      if (a.is_string()) {
        actions = a.get<std::string>();
      } else {
        for (const auto& line : a) actions += line.dump() + "\n";
      }
    }
    reply(res, social_report(w.ingest_social(std::move(directory), std::move(actions))));
  });

  s.Get(P + "/identities", [this](const Req& req, Res& res) {
    auto& w = store_.get(req.matches[1]);
    reply(res, {{"matches", match_list(w.identities())}, {"pending", match_list(w.pending_identities())}});
  });

  s.Post(P + "/identities", [this](const Req& req, Res& res) {
    auto& w = store_.get(req.matches[1]);
    const auto body = parse_body(req);
    const auto decision = body.value("decision", std::string("confirmed"));
    if (decision != "confirmed" && decision != "rejected") {
      fail(ErrorKind::InvalidArgument, "decision must be 'confirmed' or 'rejected'");
    }
    reply(res, social_report(w.decide_identity(
                   body.at("network").get<std::string>(), body.at("handle").get<std::string>(),
                   body.at("person").get<std::string>(),
                   decision == "confirmed" ? social::IdentityDecision::Confirmed : social::IdentityDecision::Rejected)));
  });

  s.Post(P + "/search", [this](const Req& req, Res& res) {
    auto& w = store_.get(req.matches[1]);
    const auto body = parse_body(req);
    const auto assignment = body.value("assignment", std::string());
    if (body.contains("fixture")) {
      std::map<std::string, std::uint64_t> table;
      for (const auto& [k, v] : body.at("fixture").items()) table[k] = v.get<std::uint64_t>();
      search::FixtureProvider provider(std::move(table));
      w.ingest_search(provider, assignment);
    } else if (body.contains("fixture_path")) {
      auto provider = search::FixtureProvider::from_file(body.at("fixture_path").get<std::string>());
      w.ingest_search(provider, assignment);
    } else {
      search::HttpProvider provider(search::HttpProvider::Config::from_env());
      w.ingest_search(provider, assignment);
    }
    reply(res, {{"ok", true}});
  });

  s.Get(P + A + "/pairs", [this](const Req& req, Res& res) {
    auto& w = store_.get(req.matches[1]);
    const auto sort = ranking::parse_factor(param(req, "sort", "total"));
    json out = json::array();
    for (const auto& a : w.ranked_table(std::string(req.matches[2]), sort)) out.push_back(ranking::assessment_to_json(a));
    reply(res, out);
  });

  s.Get(P + R"(/pairs/([A-Za-z0-9_.:\-]+))", [this](const Req& req, Res& res) {
    reply(res, store_.get(req.matches[1]).pair_detail(std::string(req.matches[2])));
  });

  s.Put(P + R"(/pairs/([A-Za-z0-9_.:\-]+)/status)", [this](const Req& req, Res& res) {
    auto& w = store_.get(req.matches[1]);
    const auto body = parse_body(req);
    std::optional<std::uint64_t> revision;
    if (body.contains("revision") && !body.at("revision").is_null()) revision = body.at("revision").get<std::uint64_t>();
    const auto updated = w.set_status(std::string(req.matches[2]), ranking::parse_status(body.at("status").get<std::string>()),
                                      body.value("actor", std::string("anonymous")), revision);
    reply(res, ranking::assessment_to_json(updated));
  });

  s.Get(P + A + "/clusters", [this](const Req& req, Res& res) {
    auto& w = store_.get(req.matches[1]);
    const std::string aid = req.matches[2];
    if (req.has_param("factor")) {
      reply(res, ranking::cluster_stats_to_json(w.clusters(aid, ranking::parse_factor(req.get_param_value("factor")))));
      return;
    }
    json out = json::array();
    for (auto f : {ranking::Factor::Cs, ranking::Factor::Sn, ranking::Factor::Se, ranking::Factor::Total}) {
      out.push_back(ranking::cluster_stats_to_json(w.clusters(aid, f)));
    }
    reply(res, out);
  });

  s.Get(P + "/graph", [this](const Req& req, Res& res) {
    reply(res, store_.get(req.matches[1]).graph(param(req, "assignment")));
  });

  s.Get(P + "/matrix", [this](const Req& req, Res& res) {
    auto& w = store_.get(req.matches[1]);
    auto assignment = param(req, "assignment");
    if (assignment.empty()) {
      const auto p = w.project();
      if (p.assignments().empty()) fail(ErrorKind::InvalidArgument, "project has no assignments");
      assignment = p.assignments().front().id;
    }
    reply(res, w.matrix(assignment, ranking::parse_factor(param(req, "factor", "total"))));
  });

  s.Put(P + A + "/weights", [this](const Req& req, Res& res) {
    auto& w = store_.get(req.matches[1]);
    const auto body = parse_body(req);
    corpus::Weights weights{body.at("w_cs").get<double>(), body.at("w_sn").get<double>(), body.at("w_se").get<double>()};
    w.set_weights(std::string(req.matches[2]), weights);
    reply(res, {{"w_cs", weights.cs}, {"w_sn", weights.sn}, {"w_se", weights.se}});
  });

  s.Post(P + "/eval", [this](const Req& req, Res& res) {
    reply(res, glm::report_to_json(store_.get(req.matches[1]).evaluate()));
  });

  s.Get(P + "/journal", [this](const Req& req, Res& res) {
    json out = json::array();
    for (const auto& e : store_.get(req.matches[1]).journal()) out.push_back(ranking::journal_to_json(e));
    reply(res, out);
  });
}

int Service::bind(const ServiceConfig& config) {
  if (config.port == 0) {
    const int port = server_->bind_to_any_port(config.host);
    if (port < 0) fail(ErrorKind::Io, "cannot bind " + config.host);
    return port;
  }
  if (!server_->bind_to_port(config.host, config.port)) {
    fail(ErrorKind::Io, "cannot bind " + config.host + ":" + std::to_string(config.port));
  }
  return config.port;
}

void Service::run() { server_->listen_after_bind(); }

void Service::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace spdf::service
