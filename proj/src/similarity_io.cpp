#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include "spdf/error.hpp"
#include "spdf/simengine.hpp"

namespace spdf::sim {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
  fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + why);
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::vector<SimilarityRecord> read_similarity_csv(std::istream& in, const corpus::Project& project) {
  std::vector<SimilarityRecord> out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != "doc_i,doc_j,s_ij") bad_line(lineno, "expected header 'doc_i,doc_j,s_ij'");
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = row.find(',', start);
      cells.push_back(trim(row.substr(start, comma == std::string_view::npos ? row.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 3) bad_line(lineno, "expected 3 fields, got " + std::to_string(cells.size()));
    SimilarityRecord r;
    r.doc_i = cells[0];
    r.doc_j = cells[1];
    const auto sv = cells[2];
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), r.s);
    if (ec != std::errc{} || ptr != sv.data() + sv.size()) bad_line(lineno, "unparseable similarity '" + std::string(sv) + "'");
    if (!(r.s > 0.0 && r.s <= 1.0)) bad_line(lineno, "similarity " + std::string(sv) + " outside (0,1]");
    for (const auto& id : {r.doc_i, r.doc_j}) {
      if (!project.has_document(id)) bad_line(lineno, "unknown document id '" + id + "'");
    }
    if (r.doc_i == r.doc_j) bad_line(lineno, "document compared with itself");
    const auto& di = project.document(r.doc_i);
    const auto& dj = project.document(r.doc_j);
    if (di.author == dj.author) bad_line(lineno, "both documents have the same author");
    if (di.assignment != dj.assignment) bad_line(lineno, "documents belong to different assignments");
    if (auto [it, fresh] = seen.try_emplace(r.doc_i + "," + r.doc_j, lineno); !fresh) {
      bad_line(lineno, "duplicate record " + it->first + " (first on line " + std::to_string(it->second) + ")");
    }
    out.push_back(std::move(r));
  }
  if (!header_seen) fail(ErrorKind::Parse, "line 1: missing header 'doc_i,doc_j,s_ij'");
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.doc_i, a.doc_j) < std::tie(b.doc_i, b.doc_j);
  });
  return out;
}

std::vector<SimilarityRecord> import_similarity_report(const std::filesystem::path& path,
                                                       const corpus::Project& project) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read similarity report: " + path.string());
  return read_similarity_csv(in, project);
}

void write_similarity_csv(std::ostream& out, std::span<const SimilarityRecord> records) {
  out << "doc_i,doc_j,s_ij\n";
  for (const auto& r : records) out << r.doc_i << ',' << r.doc_j << ',' << format_real(r.s) << '\n';
}

}  // namespace spdf::sim
