#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace spdf::corpus {

struct Account {
  std::string network;
  std::string handle;

  bool operator==(const Account&) const = default;
  auto operator<=>(const Account&) const = default;
};

struct Person {
  std::string id;
  std::string full_name;
  std::vector<Account> accounts;
  std::set<std::string> keywords;

  bool operator==(const Person&) const = default;
};

/// Per-assignment factor weights; they must sum to one.
struct Weights {
  double cs = 1.0;
  double sn = 0.0;
  double se = 0.0;

  void validate() const;
  bool operator==(const Weights&) const = default;
};

struct Assignment {
  std::string id;
  std::string title;
  std::set<std::string> keywords;
  Weights weights;
  std::string language_profile = "generic-code";

  bool operator==(const Assignment&) const = default;
};

/// One submission. Authorship is the `author` field: every document has exactly one.
struct Document {
  std::string id;  // "<assignment>:<person>"
  std::string author;
  std::string assignment;
  std::string content;
  std::string content_hash;  // lowercase hex SHA-256 of content

  bool operator==(const Document&) const = default;
};

struct Manifest {
  std::vector<Assignment> assignments;
  std::vector<Person> people;

  bool operator==(const Manifest&) const = default;
};

class Project {
 public:
  Project() = default;
  Project(Manifest manifest, std::vector<Document> documents);

  // Rvalue overloads keep `for (auto& a : ws.project().assignments())` safe.
  const std::vector<Person>& people() const& { return manifest_.people; }
  std::vector<Person> people() && { return std::move(manifest_.people); }
  const std::vector<Assignment>& assignments() const& { return manifest_.assignments; }
  std::vector<Assignment> assignments() && { return std::move(manifest_.assignments); }
  const std::vector<Document>& documents() const& { return documents_; }
  std::vector<Document> documents() && { return std::move(documents_); }
  const Manifest& manifest() const { return manifest_; }

  const Person& person(std::string_view id) const;
  const Assignment& assignment(std::string_view id) const;
  Assignment& mutable_assignment(std::string_view id);
  const Document& document(std::string_view id) const;
  bool has_document(std::string_view id) const;

  /// The submission of `person` for `assignment`, or nullptr when it is missing.
  const Document* documents_of(std::string_view person, std::string_view assignment) const;

  /// Documents of one assignment in id order.
  std::vector<const Document*> documents_for(std::string_view assignment) const;

  bool operator==(const Project&) const = default;

 private:
  Manifest manifest_;
  std::vector<Document> documents_;  // sorted by id
};

/// Ids are used as directory names and inside pair ids, so they are restricted
/// to [A-Za-z0-9_.-].
bool is_valid_id(std::string_view id);

std::string document_id(std::string_view assignment, std::string_view person);
std::string content_digest(std::string_view content);

Manifest parse_manifest(const nlohmann::json& j);
nlohmann::json manifest_to_json(const Manifest& m);
Manifest read_manifest(const std::filesystem::path& path);

/// Reads `root/submissions/<assignment>/<person>/...`. Files of one submission are
/// concatenated in lexicographic path order, separated by '\n'.
Project load_project(const std::filesystem::path& root, const Manifest& manifest);

/// Same, with the manifest taken from `root/project.json`.
Project load_project(const std::filesystem::path& root);

nlohmann::json project_to_json(const Project& p);
Project project_from_json(const nlohmann::json& j);

}  // namespace spdf::corpus
