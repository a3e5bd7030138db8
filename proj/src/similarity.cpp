#include <omp.h>

#include <algorithm>
#include <map>

#include "spdf/error.hpp"
#include "spdf/simengine.hpp"

namespace spdf::sim {
namespace {

std::size_t intersection_size(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

// Span of the earliest print of each distinct hash, for sets built without them.
std::vector<Span> first_spans_of(const FingerprintSet& f) {
  std::map<std::uint64_t, Span> first;
  for (const auto& p : f.prints) first.try_emplace(p.hash, p.bytes);
  std::vector<Span> out;
  out.reserve(f.distinct_hashes.size());
  for (auto h : f.distinct_hashes) out.push_back(first.at(h));
  return out;
}

std::vector<std::pair<Span, Span>> matched_spans(const FingerprintSet& a, const FingerprintSet& b) {
  const bool have_spans = b.first_spans.size() == b.distinct_hashes.size();
  const std::vector<Span> computed = have_spans ? std::vector<Span>{} : first_spans_of(b);
  const auto& spans_b = have_spans ? b.first_spans : computed;

  std::vector<std::pair<Span, Span>> out;
  for (const auto& p : a.prints) {
    const auto it = std::lower_bound(b.distinct_hashes.begin(), b.distinct_hashes.end(), p.hash);
    if (it == b.distinct_hashes.end() || *it != p.hash) continue;
    const Span sb = spans_b[static_cast<std::size_t>(it - b.distinct_hashes.begin())];
    const Span sa = p.bytes;
    // Merge runs that overlap on both sides.
    if (!out.empty()) {
      auto& [pa, pb] = out.back();
      if (sa.begin <= pa.end && sb.begin >= pb.begin && sb.begin <= pb.end) {
        pa.end = std::max(pa.end, sa.end);
        pb.end = std::max(pb.end, sb.end);
        continue;
      }
    }
    out.emplace_back(sa, sb);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> ordered_pairs(std::span<const SimilarityInput> docs) {
  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return docs[a].doc_id < docs[b].doc_id; });

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i : order) {
    for (std::size_t j : order) {
      if (i != j && docs[i].author != docs[j].author) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

void check_params(std::span<const SimilarityInput> docs) {
  for (const auto& d : docs) {
    if (!(d.prints.params == docs.front().prints.params)) {
      fail(ErrorKind::InvalidArgument, "fingerprint parameters differ between documents");
    }
  }
}

std::vector<SimilarityInput> prepare(const corpus::Project& project, std::string_view assignment,
                                     std::optional<FingerprintParams> params, bool parallel) {
  const auto& a = project.assignment(assignment);
  const Profile profile = parse_profile(a.language_profile);
  const FingerprintParams p = params.value_or(default_params(profile));
  const auto docs = project.documents_for(assignment);

  std::vector<SimilarityInput> inputs(docs.size());
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const auto* d = docs[static_cast<std::size_t>(i)];
      inputs[static_cast<std::size_t>(i)] = {d->id, d->author, fingerprint(tokenize(d->content, profile), p)};
    } catch (...) {
#pragma omp critical(spdf_prepare_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return inputs;
}

}  // namespace

std::optional<SimilarityRecord> pairwise_similarity(std::string_view doc_i, const FingerprintSet& a,
                                                    std::string_view doc_j, const FingerprintSet& b) {
  if (!(a.params == b.params)) fail(ErrorKind::InvalidArgument, "fingerprint parameters differ");
  if (a.distinct_hashes.empty()) return std::nullopt;
  const std::size_t shared = intersection_size(a.distinct_hashes, b.distinct_hashes);
  if (shared == 0) return std::nullopt;
  SimilarityRecord r;
  r.doc_i = doc_i;
  r.doc_j = doc_j;
  r.s = static_cast<double>(shared) / static_cast<double>(a.distinct_hashes.size());
  r.matched_spans = matched_spans(a, b);
  return r;
}

std::vector<SimilarityRecord> all_pairs_serial(std::span<const SimilarityInput> docs) {
  if (docs.empty()) return {};
  check_params(docs);
  std::vector<SimilarityRecord> out;
  for (auto [i, j] : ordered_pairs(docs)) {
    if (auto r = pairwise_similarity(docs[i].doc_id, docs[i].prints, docs[j].doc_id, docs[j].prints)) {
      out.push_back(std::move(*r));
    }
  }
  return out;
}

std::vector<SimilarityRecord> all_pairs(std::span<const SimilarityInput> docs) {
  if (docs.empty()) return {};
  check_params(docs);
  const auto pairs = ordered_pairs(docs);
  std::vector<std::optional<SimilarityRecord>> slots(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    slots[static_cast<std::size_t>(k)] =
        pairwise_similarity(docs[i].doc_id, docs[i].prints, docs[j].doc_id, docs[j].prints);
  }
  std::vector<SimilarityRecord> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  return out;
}

std::vector<SimilarityRecord> all_pairs_similarity(const corpus::Project& project, std::string_view assignment,
                                                   std::optional<FingerprintParams> params) {
  const auto inputs = prepare(project, assignment, params, true);
  return all_pairs(inputs);
}

std::vector<SimilarityRecord> all_pairs_similarity_serial(const corpus::Project& project,
                                                          std::string_view assignment,
                                                          std::optional<FingerprintParams> params) {
  const auto inputs = prepare(project, assignment, params, false);
  return all_pairs_serial(inputs);
}

}  // namespace spdf::sim
