#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spdf/corpus.hpp"

namespace spdf::sim {

enum class Profile { GenericCode, PlainText };

Profile parse_profile(std::string_view name);
std::string_view profile_name(Profile p);

/// Half-open byte range into the source document.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

struct TokenStream {
  std::vector<std::uint64_t> tokens;
  std::vector<Span> spans;  // one per token, monotone and non-overlapping

  std::size_t size() const { return tokens.size(); }
};

TokenStream tokenize(std::string_view content, Profile profile);

struct FingerprintParams {
  std::size_t k = 5;  // gram length in tokens
  std::size_t w = 4;  // winnowing window, in k-grams

  bool operator==(const FingerprintParams&) const = default;
};

FingerprintParams default_params(Profile profile);

struct Fingerprint {
  std::uint64_t hash = 0;
  std::size_t position = 0;  // token index of the k-gram start
  Span bytes;                // source bytes covered by the k-gram

  bool operator==(const Fingerprint&) const = default;
};

struct FingerprintSet {
  std::vector<Fingerprint> prints;  // ascending by position, unique positions
  std::vector<std::uint64_t> distinct_hashes;  // sorted, deduplicated
  std::vector<Span> first_spans;               // aligned with distinct_hashes; may be left empty
  FingerprintParams params;
  std::size_t token_count = 0;

  bool empty() const { return prints.empty(); }
};

/// Polynomial rolling hash over every k-gram of `tokens`; empty when there are fewer than k tokens.
std::vector<std::uint64_t> kgram_hashes(std::span<const std::uint64_t> tokens, std::size_t k);

/// Positions selected by winnowing: the minimum of every window of `w` consecutive
/// hashes, taking the rightmost one on ties. Fewer than `w` hashes form a single window.
std::vector<std::size_t> winnow(std::span<const std::uint64_t> hashes, std::size_t w);

FingerprintSet fingerprint(const TokenStream& stream, FingerprintParams params);

struct SimilarityRecord {
  std::string doc_i;
  std::string doc_j;
  double s = 0.0;  // share of doc_i's fingerprints found in doc_j, in (0,1]
  std::vector<std::pair<Span, Span>> matched_spans;

  bool operator==(const SimilarityRecord&) const = default;
};

/// Directed containment of `a` in `b`. Nothing when the two share no fingerprint.
std::optional<SimilarityRecord> pairwise_similarity(std::string_view doc_i, const FingerprintSet& a,
                                                    std::string_view doc_j, const FingerprintSet& b);

struct SimilarityInput {
  std::string doc_id;
  std::string author;
  FingerprintSet prints;
};

/// Every ordered pair with distinct authors, sorted by (doc_i, doc_j). OpenMP-parallel over pairs.
std::vector<SimilarityRecord> all_pairs(std::span<const SimilarityInput> docs);

/// Single-threaded reference for all_pairs; identical output.
std::vector<SimilarityRecord> all_pairs_serial(std::span<const SimilarityInput> docs);

/// Tokenizes and fingerprints every document of the assignment (in parallel) and runs all_pairs.
std::vector<SimilarityRecord> all_pairs_similarity(const corpus::Project& project, std::string_view assignment,
                                                   std::optional<FingerprintParams> params = std::nullopt);

std::vector<SimilarityRecord> all_pairs_similarity_serial(const corpus::Project& project,
                                                          std::string_view assignment,
                                                          std::optional<FingerprintParams> params = std::nullopt);

/// CSV with header `doc_i,doc_j,s_ij`.
std::vector<SimilarityRecord> read_similarity_csv(std::istream& in, const corpus::Project& project);
std::vector<SimilarityRecord> import_similarity_report(const std::filesystem::path& path,
                                                       const corpus::Project& project);
void write_similarity_csv(std::ostream& out, std::span<const SimilarityRecord> records);

std::string format_real(double v);

}  // namespace spdf::sim
