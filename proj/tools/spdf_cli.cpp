// spdf: batch driver for the detection pipeline.

#include <charconv>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spdf/cohort.hpp"
#include "spdf/error.hpp"
#include "spdf/service.hpp"
#include "spdf/workspace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using spdf::ErrorKind;

namespace {

constexpr std::uint64_t kDefaultSeed = 20140401;

std::string_view kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::NotFound: return "not_found";
    case ErrorKind::Conflict: return "conflict";
    case ErrorKind::Unavailable: return "unavailable";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Numerical: return "numerical";
  }
  return "internal";
}

int exit_code(ErrorKind k) { return 3 + static_cast<int>(k); }

void report_error(std::string_view kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

fs::path workspace_dir(const fs::path& project) { return project / ".spdf"; }

spdf::Workspace open_workspace(const fs::path& project) {
  const auto dir = workspace_dir(project);
  if (!spdf::Workspace::exists(dir)) {
    spdf::fail(ErrorKind::NotFound, "no workspace in " + project.string() + "; run ingest first");
  }
  return spdf::Workspace::open(dir);
}

spdf::corpus::Weights parse_weights(const std::string& s) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    double x = 0;
    const auto* end = part.data() + part.size();
    if (auto [p, ec] = std::from_chars(part.data(), end, x); ec != std::errc() || p != end) {
      spdf::fail(ErrorKind::InvalidArgument, "--weights expects cs,sn,se; got '" + s + "'");
    }
    v.push_back(x);
  }
  if (v.size() != 3) spdf::fail(ErrorKind::InvalidArgument, "--weights expects three values cs,sn,se");
  return {v[0], v[1], v[2]};
}

// NETWORK:HANDLE=PERSON
std::tuple<std::string, std::string, std::string> parse_identity(const std::string& s) {
  const auto colon = s.find(':');
  const auto eq = s.rfind('=');
  if (colon == std::string::npos || eq == std::string::npos || eq < colon) {
    spdf::fail(ErrorKind::InvalidArgument, "identity decision must look like NETWORK:HANDLE=PERSON; got '" + s + "'");
  }
  return {s.substr(0, colon), s.substr(colon + 1, eq - colon - 1), s.substr(eq + 1)};
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

json social_json(const spdf::SocialIngestReport& r) {
  json skipped = json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"line", s.line}, {"reason", s.reason}});
  json pending = json::array();
  for (const auto& m : r.pending) pending.push_back(spdf::social::match_to_json(m));
  return {{"actions", r.actions}, {"skipped", skipped}, {"pending", pending}};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) spdf::fail(ErrorKind::Io, "cannot write " + path.string());
}

spdf::service::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spdf: source plagiarism detection with social and search evidence"};
  app.require_subcommand(1);

  fs::path project;
  std::string assignment;
  auto add_project = [&](CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--project", project, "project directory (contains project.json)");
    if (required) opt->required();
  };

  // ingest
  auto* ingest = app.add_subcommand("ingest", "load the manifest and submissions into a new workspace");
  add_project(ingest);
  bool force = false;
  ingest->add_flag("--force", force, "replace an existing workspace");

  // similarity
  auto* similarity = app.add_subcommand("similarity", "run the fingerprint engine or import a report");
  add_project(similarity);
  similarity->add_option("--assignment", assignment, "restrict to one assignment");
  std::optional<std::size_t> k, w;
  similarity->add_option("--k", k, "k-gram length");
  similarity->add_option("--w", w, "winnowing window");
  fs::path import_csv;
  similarity->add_option("--import", import_csv, "CSV report with header doc_i,doc_j,s_ij");

  // social
  auto* social = app.add_subcommand("social", "import the account directory and social actions, review identities");
  add_project(social);
  fs::path accounts, actions;
  social->add_option("--accounts", accounts, "JSON directory of accounts [{network,handle,display_name}]; default <project>/social/accounts.json");
  social->add_option("--actions", actions, "JSON-lines file of actions; default <project>/social/actions.jsonl");
  std::vector<std::string> confirm, reject;
  social->add_option("--confirm", confirm, "accept an identity match NETWORK:HANDLE=PERSON");
  social->add_option("--reject", reject, "reject an identity match NETWORK:HANDLE=PERSON");

  // search
  auto* search = app.add_subcommand("search", "query the search provider for every pair");
  add_project(search);
  search->add_option("--assignment", assignment, "restrict to one assignment");
  fs::path fixture;
  search->add_option("--fixture", fixture, "JSON object mapping query strings to hit counts");

  // rank
  auto* rank = app.add_subcommand("rank", "print the ranked pair table as CSV");
  add_project(rank);
  rank->add_option("--assignment", assignment, "assignment id")->required();
  std::string sort = "total";
  rank->add_option("--sort", sort, "total|cs|sn|se");
  std::string weights;
  rank->add_option("--weights", weights, "store new weights cs,sn,se for the assignment first");

  // status
  auto* status = app.add_subcommand("status", "record an investigator decision");
  add_project(status);
  std::string pair, decision, actor = "cli";
  std::optional<std::uint64_t> revision;
  status->add_option("--pair", pair, "pair id assignment:p_i:p_j")->required();
  status->add_option("--status", decision, "confirmed|rejected|not_checked")->required();
  status->add_option("--actor", actor, "who decided");
  status->add_option("--revision", revision, "expected current revision");

  // eval
  auto* eval = app.add_subcommand("eval", "compare the models with and without social evidence");
  add_project(eval, false);
  bool self_test = false, null_config = false;
  std::uint64_t seed = kDefaultSeed;
  eval->add_flag("--self-test", self_test, "run on a seeded synthetic cohort instead of a project");
  eval->add_flag("--null", null_config, "self-test with social links independent of copying");
  eval->add_option("--seed", seed, "seed for --self-test")->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  add_project(serve, false);
  fs::path store;
  std::string addr = "127.0.0.1:8080";
  serve->add_option("--store", store, "directory holding one workspace per project");
  serve->add_option("--addr", addr, "host:port")->capture_default_str();

  // export
  auto* exp = app.add_subcommand("export", "write similarity, rankings, features, graph and journal files");
  add_project(exp);
  fs::path out_dir;
  exp->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return 2;
  }

  try {
    if (*ingest) {
      if (spdf::Workspace::exists(workspace_dir(project)) && !force) {
        spdf::fail(ErrorKind::Conflict, "workspace already exists in " + project.string() + "; use --force");
      }
      auto p = spdf::corpus::load_project(project);
      const auto ws = spdf::Workspace::create(workspace_dir(project), std::move(p));
      const auto loaded = ws.project();
      print_json({{"people", loaded.people().size()},
                  {"assignments", loaded.assignments().size()},
                  {"documents", loaded.documents().size()}});
    } else if (*similarity) {
      auto ws = open_workspace(project);
      if (!import_csv.empty()) {
        print_json({{"imported", ws.import_similarity(import_csv)}});
      } else {
        std::optional<spdf::sim::FingerprintParams> params;
        if (k || w) params = spdf::sim::FingerprintParams{k.value_or(5), w.value_or(4)};
        ws.run_similarity(assignment, params);
        json counts = json::object();
        const auto p = ws.project();
        for (const auto& a : p.assignments()) {
          if (assignment.empty() || a.id == assignment) counts[a.id] = ws.similarity(a.id).size();
        }
        print_json({{"records", counts}});
      }
    } else if (*social) {
      auto ws = open_workspace(project);
      spdf::SocialIngestReport report;
      // Bare `social` reads the conventional files under <project>/social/.
      if (accounts.empty() && actions.empty() && confirm.empty() && reject.empty()) {
        accounts = project / "social" / "accounts.json";
        actions = project / "social" / "actions.jsonl";
      }
      if (!accounts.empty() || !actions.empty()) {
        auto directory = accounts.empty() ? std::vector<spdf::social::DirectoryEntry>{}
                                          : spdf::social::read_directory(accounts);
        std::string lines;
        if (!actions.empty()) {
          std::ifstream in(actions, std::ios::binary);
          if (!in) spdf::fail(ErrorKind::NotFound, "cannot open " + actions.string());
          lines.assign(std::istreambuf_iterator<char>(in), {});
        }
        report = ws.ingest_social(std::move(directory), std::move(lines));
      }
      for (const auto& c : confirm) {
        auto [net, handle, person] = parse_identity(c);
        report = ws.decide_identity(net, handle, person, spdf::social::IdentityDecision::Confirmed);
      }
      for (const auto& r : reject) {
        auto [net, handle, person] = parse_identity(r);
        report = ws.decide_identity(net, handle, person, spdf::social::IdentityDecision::Rejected);
      }
      print_json(social_json(report));
    } else if (*search) {
      auto ws = open_workspace(project);
      if (!fixture.empty()) {
        auto provider = spdf::search::FixtureProvider::from_file(fixture);
        ws.ingest_search(provider, assignment);
      } else {
        spdf::search::HttpProvider provider(spdf::search::HttpProvider::Config::from_env());
        ws.ingest_search(provider, assignment);
      }
      print_json({{"ok", true}});
    } else if (*rank) {
      auto ws = open_workspace(project);
      if (!weights.empty()) ws.set_weights(assignment, parse_weights(weights));
      const auto rows = ws.ranked_table(assignment, spdf::ranking::parse_factor(sort));
      spdf::ranking::write_ranked_csv(std::cout, rows);
    } else if (*status) {
      auto ws = open_workspace(project);
      const auto a = ws.set_status(pair, spdf::ranking::parse_status(decision), actor, revision);
      print_json(spdf::ranking::assessment_to_json(a));
    } else if (*eval) {
      if (self_test) {
        spdf::cohort::Config config;
        config.seed = seed;
        config.social_signal = !null_config;
        const auto outcome = spdf::cohort::evaluate(spdf::cohort::generate(config));
        auto j = spdf::glm::report_to_json(outcome.report);
        j["cohort"] = {{"seed", seed}, {"social_signal", !null_config}, {"pairs", outcome.pairs},
                       {"copied", outcome.copied}};
        print_json(j);
      } else {
        if (project.empty()) spdf::fail(ErrorKind::InvalidArgument, "eval needs --project or --self-test");
        print_json(spdf::glm::report_to_json(open_workspace(project).evaluate()));
      }
    } else if (*serve) {
      std::map<std::string, fs::path> mounts;
      if (!project.empty()) {
        auto name = fs::weakly_canonical(project).filename().string();
        mounts[name.empty() ? "default" : name] = workspace_dir(project);
      }
      if (store.empty() && mounts.empty()) spdf::fail(ErrorKind::InvalidArgument, "serve needs --store or --project");
      std::optional<fs::path> root;
      if (!store.empty()) {
        fs::create_directories(store);
        root = store;
      }
      spdf::service::ProjectStore projects(root, mounts);
      spdf::service::ServiceConfig config;
      const auto colon = addr.rfind(':');
      if (colon == std::string::npos) spdf::fail(ErrorKind::InvalidArgument, "--addr expects host:port");
      config.host = addr.substr(0, colon);
      config.port = std::stoi(addr.substr(colon + 1));
      spdf::service::Service service(projects);
      const int port = service.bind(config);
      std::cout << json{{"listening", config.host + ":" + std::to_string(port)}}.dump() << std::endl;
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      service.run();
      g_service = nullptr;
    } else if (*exp) {
      const auto ws = open_workspace(project);
      fs::create_directories(out_dir);
      const auto p = ws.project();
      for (const auto& a : p.assignments()) {
        std::ostringstream sim_csv, rank_csv;
        spdf::sim::write_similarity_csv(sim_csv, ws.similarity(a.id));
        write_file(out_dir / ("similarity-" + a.id + ".csv"), sim_csv.str());
        spdf::ranking::write_ranked_csv(rank_csv, ws.ranked_table(a.id));
        write_file(out_dir / ("ranked-" + a.id + ".csv"), rank_csv.str());
        json clusters = json::array();
        for (auto f : {spdf::ranking::Factor::Cs, spdf::ranking::Factor::Sn, spdf::ranking::Factor::Se,
                       spdf::ranking::Factor::Total}) {
          clusters.push_back(spdf::ranking::cluster_stats_to_json(ws.clusters(a.id, f)));
        }
        write_file(out_dir / ("clusters-" + a.id + ".json"), clusters.dump(2) + "\n");
        write_file(out_dir / ("matrix-" + a.id + ".json"),
                   ws.matrix(a.id, spdf::ranking::Factor::Total).dump(2) + "\n");
      }
      std::ostringstream features;
      spdf::glm::write_features_csv(features, ws.features());
      write_file(out_dir / "features.csv", features.str());
      write_file(out_dir / "graph.json", ws.graph().dump(2) + "\n");
      json journal = json::array();
      for (const auto& e : ws.journal()) journal.push_back(spdf::ranking::journal_to_json(e));
      write_file(out_dir / "journal.json", journal.dump(2) + "\n");
      print_json({{"out", out_dir.string()}});
    }
  } catch (const spdf::Error& e) {
    report_error(kind_name(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
  return 0;
}
