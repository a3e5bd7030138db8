#include "spdf/corpus.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "spdf/error.hpp"
#include "spdf/text.hpp"

namespace spdf::corpus {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::Io, "cannot read file: " + path.string());
  return ss.str();
}

std::set<std::string> keyword_set(const json& j) {
  std::set<std::string> out;
  if (j.is_null()) return out;
  for (const auto& k : j) {
    auto kw = text::encode_utf8(text::case_fold(text::decode_utf8(k.get<std::string>())));
    if (!kw.empty()) out.insert(std::move(kw));
  }
  return out;
}

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view b64) {
  if (b64.size() % 4 != 0) fail(ErrorKind::Parse, "malformed base64 content");
  std::string out(3 * b64.size() / 4, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(b64.data()),
                                static_cast<int>(b64.size()));
  if (n < 0) fail(ErrorKind::Parse, "malformed base64 content");
  std::size_t padding = 0;
  if (!b64.empty() && b64.back() == '=') ++padding;
  if (b64.size() > 1 && b64[b64.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

}  // namespace

void Weights::validate() const {
  for (double w : {cs, sn, se}) {
    if (!(w >= 0.0 && w <= 1.0)) fail(ErrorKind::InvalidArgument, "weights must lie in [0,1]");
  }
  if (std::abs(cs + sn + se - 1.0) > 1e-9) {
    fail(ErrorKind::InvalidArgument, "weights must sum to 1 (got " + std::to_string(cs + sn + se) + ")");
  }
}

bool is_valid_id(std::string_view id) {
  if (id.empty() || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.';
  });
}

std::string document_id(std::string_view assignment, std::string_view person) {
  std::string id(assignment);
  id += ':';
  id += person;
  return id;
}

std::string content_digest(std::string_view content) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(content.data(), content.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::Io, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xF]);
  }
  return hex;
}

Project::Project(Manifest manifest, std::vector<Document> documents)
    : manifest_(std::move(manifest)), documents_(std::move(documents)) {
  std::set<std::string> ids;
  for (const auto& p : manifest_.people) {
    if (!ids.insert(p.id).second) fail(ErrorKind::InvalidArgument, "duplicate person id: " + p.id);
  }
  ids.clear();
  for (const auto& a : manifest_.assignments) {
    if (!ids.insert(a.id).second) fail(ErrorKind::InvalidArgument, "duplicate assignment id: " + a.id);
  }
  std::sort(documents_.begin(), documents_.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const auto& d = documents_[i];
    person(d.author);
    assignment(d.assignment);
    if (d.id != document_id(d.assignment, d.author)) fail(ErrorKind::InvalidArgument, "bad document id: " + d.id);
    if (d.content.empty()) fail(ErrorKind::InvalidArgument, "empty document: " + d.id);
    if (i > 0 && documents_[i - 1].id == d.id) fail(ErrorKind::InvalidArgument, "duplicate document: " + d.id);
  }
}

const Person& Project::person(std::string_view id) const {
  for (const auto& p : manifest_.people) {
    if (p.id == id) return p;
  }
  fail(ErrorKind::NotFound, "unknown person: " + std::string(id));
}

const Assignment& Project::assignment(std::string_view id) const {
  for (const auto& a : manifest_.assignments) {
    if (a.id == id) return a;
  }
  fail(ErrorKind::NotFound, "unknown assignment: " + std::string(id));
}

Assignment& Project::mutable_assignment(std::string_view id) {
  return const_cast<Assignment&>(std::as_const(*this).assignment(id));
}

const Document& Project::document(std::string_view id) const {
  auto it = std::lower_bound(documents_.begin(), documents_.end(), id,
                             [](const Document& d, std::string_view key) { return d.id < key; });
  if (it == documents_.end() || it->id != id) fail(ErrorKind::NotFound, "unknown document: " + std::string(id));
  return *it;
}

bool Project::has_document(std::string_view id) const {
  auto it = std::lower_bound(documents_.begin(), documents_.end(), id,
                             [](const Document& d, std::string_view key) { return d.id < key; });
  return it != documents_.end() && it->id == id;
}

const Document* Project::documents_of(std::string_view person_id, std::string_view assignment_id) const {
  person(person_id);
  assignment(assignment_id);
  const auto id = document_id(assignment_id, person_id);
  return has_document(id) ? &document(id) : nullptr;
}

std::vector<const Document*> Project::documents_for(std::string_view assignment_id) const {
  assignment(assignment_id);
  std::vector<const Document*> out;
  for (const auto& d : documents_) {
    if (d.assignment == assignment_id) out.push_back(&d);
  }
  return out;
}

Manifest parse_manifest(const json& j) {
  Manifest m;
  try {
    for (const auto& ja : j.at("assignments")) {
      Assignment a;
      a.id = ja.at("id").get<std::string>();
      a.title = ja.value("title", a.id);
      a.keywords = keyword_set(ja.value("keywords", json::array()));
      if (ja.contains("weights")) {
        const auto& w = ja.at("weights");
        a.weights = {w.at("w_cs").get<double>(), w.at("w_sn").get<double>(), w.at("w_se").get<double>()};
      }
      a.language_profile = ja.value("language_profile", std::string("generic-code"));
      if (!is_valid_id(a.id)) fail(ErrorKind::InvalidArgument, "invalid assignment id: '" + a.id + "'");
      a.weights.validate();
      m.assignments.push_back(std::move(a));
    }
    for (const auto& jp : j.at("people")) {
      Person p;
      p.id = jp.at("id").get<std::string>();
      p.full_name = jp.at("full_name").get<std::string>();
      for (const auto& acc : jp.value("accounts", json::array())) {
        p.accounts.push_back({acc.at("network").get<std::string>(), acc.at("handle").get<std::string>()});
      }
      p.keywords = keyword_set(jp.value("keywords", json::array()));
      if (!is_valid_id(p.id)) fail(ErrorKind::InvalidArgument, "invalid person id: '" + p.id + "'");
      if (p.full_name.empty()) fail(ErrorKind::InvalidArgument, "person " + p.id + " has an empty full_name");
      std::set<Account> seen(p.accounts.begin(), p.accounts.end());
      if (seen.size() != p.accounts.size()) {
        fail(ErrorKind::InvalidArgument, "person " + p.id + " lists a duplicate account");
      }
      m.people.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed manifest: ") + e.what());
  }
  Project check(m, {});  // id uniqueness
  return m;
}

json manifest_to_json(const Manifest& m) {
  json j;
  j["assignments"] = json::array();
  for (const auto& a : m.assignments) {
    j["assignments"].push_back({{"id", a.id},
                                {"title", a.title},
                                {"keywords", a.keywords},
                                {"weights", {{"w_cs", a.weights.cs}, {"w_sn", a.weights.sn}, {"w_se", a.weights.se}}},
                                {"language_profile", a.language_profile}});
  }
  j["people"] = json::array();
  for (const auto& p : m.people) {
    json accounts = json::array();
    for (const auto& acc : p.accounts) accounts.push_back({{"network", acc.network}, {"handle", acc.handle}});
    j["people"].push_back(
        {{"id", p.id}, {"full_name", p.full_name}, {"accounts", accounts}, {"keywords", p.keywords}});
  }
  return j;
}

Manifest read_manifest(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorKind::NotFound, "manifest not found: " + path.string());
  const auto raw = read_file(path);
  json j;
  try {
    j = json::parse(raw);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  return parse_manifest(j);
}

Project load_project(const fs::path& root, const Manifest& manifest) {
  if (!fs::is_directory(root)) fail(ErrorKind::NotFound, "project root does not exist: " + root.string());
  std::set<std::string> people;
  for (const auto& p : manifest.people) people.insert(p.id);
  std::set<std::string> assignments;
  for (const auto& a : manifest.assignments) assignments.insert(a.id);

  std::vector<Document> documents;
  const fs::path submissions = root / "submissions";
  if (!fs::exists(submissions)) return Project(manifest, {});

  std::vector<fs::path> assignment_dirs;
  for (const auto& e : fs::directory_iterator(submissions)) {
    if (e.is_directory()) assignment_dirs.push_back(e.path());
  }
  std::sort(assignment_dirs.begin(), assignment_dirs.end());

  for (const auto& adir : assignment_dirs) {
    const auto aid = adir.filename().string();
    if (!assignments.contains(aid)) fail(ErrorKind::NotFound, "unknown assignment directory: " + aid);
    std::vector<fs::path> person_dirs;
    for (const auto& e : fs::directory_iterator(adir)) {
      if (e.is_directory()) person_dirs.push_back(e.path());
    }
    std::sort(person_dirs.begin(), person_dirs.end());
    for (const auto& pdir : person_dirs) {
      const auto pid = pdir.filename().string();
      if (!people.contains(pid)) {
        fail(ErrorKind::NotFound, "unknown person directory '" + pid + "' under submissions/" + aid);
      }
      std::vector<fs::path> files;
      for (const auto& e : fs::recursive_directory_iterator(pdir)) {
        if (e.is_regular_file()) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
        return a.lexically_relative(pdir).generic_string() < b.lexically_relative(pdir).generic_string();
      });
      std::string content;
      for (std::size_t i = 0; i < files.size(); ++i) {
        if (i > 0) content.push_back('\n');
        content += read_file(files[i]);
      }
      // an all-empty submission is treated as missing
      if (content.empty()) continue;
      Document d;
      d.id = document_id(aid, pid);
      d.author = pid;
      d.assignment = aid;
      d.content_hash = content_digest(content);
      d.content = std::move(content);
      documents.push_back(std::move(d));
    }
  }
  return Project(manifest, std::move(documents));
}

Project load_project(const fs::path& root) { return load_project(root, read_manifest(root / "project.json")); }

json project_to_json(const Project& p) {
  json j;
  j["manifest"] = manifest_to_json(p.manifest());
  j["documents"] = json::array();
  for (const auto& d : p.documents()) {
    json jd = {{"id", d.id}, {"author", d.author}, {"assignment", d.assignment}, {"content_hash", d.content_hash}};
    if (text::is_valid_utf8(d.content)) {
      jd["content"] = d.content;
    } else {
      jd["content_base64"] = base64_encode(d.content);
    }
    j["documents"].push_back(std::move(jd));
  }
  return j;
}

Project project_from_json(const json& j) {
  try {
    Manifest m = parse_manifest(j.at("manifest"));
    std::vector<Document> docs;
    for (const auto& jd : j.at("documents")) {
      Document d;
      d.id = jd.at("id").get<std::string>();
      d.author = jd.at("author").get<std::string>();
      d.assignment = jd.at("assignment").get<std::string>();
      d.content = jd.contains("content_base64") ? base64_decode(jd.at("content_base64").get<std::string>())
                                                : jd.at("content").get<std::string>();
      d.content_hash = content_digest(d.content);
      if (jd.contains("content_hash") && jd.at("content_hash").get<std::string>() != d.content_hash) {
        fail(ErrorKind::Parse, "content hash mismatch for document " + d.id);
      }
      docs.push_back(std::move(d));
    }
    return Project(std::move(m), std::move(docs));
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed project document: ") + e.what());
  }
}

}  // namespace spdf::corpus
