#include <algorithm>
#include <deque>

#include "spdf/error.hpp"
#include "spdf/simengine.hpp"

namespace spdf::sim {
namespace {

// Polynomial hash mod 2^64 over token codes premixed with a fixed seed; the
// final value goes through the splitmix64 finalizer so window minima are
// spread evenly across the sequence.
constexpr std::uint64_t kBase = 0x100000001b3ULL;
constexpr std::uint64_t kSeed = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<std::uint64_t> kgram_hashes(std::span<const std::uint64_t> tokens, std::size_t k) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "gram length k must be >= 1");
  std::vector<std::uint64_t> out;
  if (tokens.size() < k) return out;
  out.reserve(tokens.size() - k + 1);

  std::uint64_t top = 1;  // kBase^(k-1)
  for (std::size_t i = 1; i < k; ++i) top *= kBase;

  std::uint64_t h = 0;
  for (std::size_t i = 0; i < k; ++i) h = h * kBase + mix64(tokens[i] ^ kSeed);
  out.push_back(mix64(h));
  for (std::size_t i = k; i < tokens.size(); ++i) {
    h = (h - mix64(tokens[i - k] ^ kSeed) * top) * kBase + mix64(tokens[i] ^ kSeed);
    out.push_back(mix64(h));
  }
  return out;
}

std::vector<std::size_t> winnow(std::span<const std::uint64_t> hashes, std::size_t w) {
  if (w == 0) fail(ErrorKind::InvalidArgument, "window size w must be >= 1");
  std::vector<std::size_t> picked;
  if (hashes.empty()) return picked;
  const std::size_t window = std::min(w, hashes.size());

  // Front holds the rightmost minimum of the current window.
  std::deque<std::size_t> q;
  for (std::size_t j = 0; j < hashes.size(); ++j) {
    while (!q.empty() && hashes[q.back()] >= hashes[j]) q.pop_back();
    q.push_back(j);
    if (q.front() + window <= j) q.pop_front();
    if (j + 1 >= window) {
      if (picked.empty() || picked.back() != q.front()) picked.push_back(q.front());
    }
  }
  return picked;
}

FingerprintSet fingerprint(const TokenStream& stream, FingerprintParams params) {
  if (params.k == 0 || params.w == 0) fail(ErrorKind::InvalidArgument, "fingerprint parameters must be >= 1");
  FingerprintSet out;
  out.params = params;
  out.token_count = stream.size();
  const auto hashes = kgram_hashes(stream.tokens, params.k);
  for (std::size_t pos : winnow(hashes, params.w)) {
    Span bytes{};
    if (!stream.spans.empty()) bytes = {stream.spans[pos].begin, stream.spans[pos + params.k - 1].end};
    out.prints.push_back({hashes[pos], pos, bytes});
  }
  // Sort by (hash, position) so the first entry of each run is the earliest occurrence.
  std::vector<std::pair<std::uint64_t, std::size_t>> order;
  order.reserve(out.prints.size());
  for (std::size_t i = 0; i < out.prints.size(); ++i) order.emplace_back(out.prints[i].hash, i);
  std::sort(order.begin(), order.end());
  for (const auto& [hash, i] : order) {
    if (!out.distinct_hashes.empty() && out.distinct_hashes.back() == hash) continue;
    out.distinct_hashes.push_back(hash);
    out.first_spans.push_back(out.prints[i].bytes);
  }
  return out;
}

}  // namespace spdf::sim
