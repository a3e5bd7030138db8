#include "spdf/cohort.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "spdf/ranking.hpp"
#include "spdf/searchlink.hpp"
#include "spdf/simengine.hpp"
#include "spdf/socialgraph.hpp"

namespace spdf::cohort {
namespace {

using Rng = std::mt19937_64;

constexpr std::size_t kVocabulary = 4000;
constexpr std::size_t kPromptWords = 40;

std::string word(std::size_t i) {
  static constexpr const char* syllables[] = {"ka", "lo", "mi", "ne", "su", "ta", "ri", "po", "ve", "da",
                                              "go", "bu", "fe", "ji", "zo", "an", "el", "or", "ut", "is"};
  std::string w;
  do {
    w += syllables[i % 20];
    i /= 20;
  } while (i > 0);
  return w + "x";
}

std::vector<std::string> random_words(Rng& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, kVocabulary - 1);
  std::vector<std::string> out(n);
  for (auto& w : out) w = word(pick(rng));
  return out;
}

// Partition of people into consecutive clusters after a shuffle.
std::vector<std::size_t> partition(Rng& rng, std::size_t people, std::size_t size) {
  std::vector<std::size_t> order(people);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> cluster(people);
  for (std::size_t i = 0; i < people; ++i) cluster[order[i]] = i / size;
  return cluster;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += (i % 12 == 0) ? ".\n" : " ";
    out += words[i];
  }
  return out;
}

}  // namespace

Cohort generate(const Config& config) {
  Rng rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = config.people;

  const auto copy_cluster = partition(rng, n, config.cluster_size);
  const auto social_cluster = config.social_signal ? copy_cluster : partition(rng, n, config.cluster_size);

  corpus::Manifest manifest;
  auto pid = [](std::size_t i) { return "p" + std::string(i < 10 ? "0" : "") + std::to_string(i); };
  for (std::size_t i = 0; i < n; ++i) {
    corpus::Person p;
    p.id = pid(i);
    p.full_name = "Student " + std::to_string(i);
    p.accounts = {{"FB", "fb." + p.id}, {"TW", "tw_" + p.id}};
    p.keywords = {"nick" + p.id};
    manifest.people.push_back(std::move(p));
  }

  Cohort out;
  std::vector<corpus::Document> docs;
  for (std::size_t a = 0; a < config.assignments; ++a) {
    corpus::Assignment asg;
    asg.id = "hw" + std::to_string(a + 1);
    asg.title = "Essay " + std::to_string(a + 1);
    asg.keywords = {"essay" + std::to_string(a + 1)};
    asg.language_profile = "plain-text";
    asg.weights = {0.5, 0.25, 0.25};
    manifest.assignments.push_back(asg);

    // Everybody quotes some of the prompt, which gives a background similarity.
    const auto prompt = random_words(rng, kPromptWords);
    std::vector<std::vector<std::string>> own(n);
    std::uniform_int_distribution<std::size_t> length(120, 320);
    for (auto& text : own) text = random_words(rng, length(rng));

    std::vector<std::vector<std::string>> inserts(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double p = copy_cluster[i] == copy_cluster[j] ? config.p_copy_linked : config.p_copy_other;
        if (unit(rng) >= p) continue;
        out.copied.insert(ranking::pair_id(asg.id, pid(i), pid(j)));
        const bool i_copies = unit(rng) < 0.5;
        const auto& source = own[i_copies ? j : i];
        auto& sink = inserts[i_copies ? i : j];
        // Partial, reworded copy: a contiguous chunk with some words replaced.
        const double fraction = 0.03 + 0.35 * unit(rng);
        const double reword = 0.6 * unit(rng);
        const auto len = std::max<std::size_t>(3, static_cast<std::size_t>(fraction * source.size()));
        std::uniform_int_distribution<std::size_t> start(0, source.size() - len);
        const auto s0 = start(rng);
        for (std::size_t t = s0; t < s0 + len; ++t) {
          sink.push_back(unit(rng) < reword ? random_words(rng, 1)[0] : source[t]);
        }
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> words;
      const auto quoted = static_cast<std::size_t>(kPromptWords * (0.2 + 0.8 * unit(rng)));
      words.insert(words.end(), prompt.begin(), prompt.begin() + quoted);
      const auto cut = own[i].size() / 2;
      words.insert(words.end(), own[i].begin(), own[i].begin() + cut);
      words.insert(words.end(), inserts[i].begin(), inserts[i].end());
      words.insert(words.end(), own[i].begin() + cut, own[i].end());
      corpus::Document d;
      d.id = corpus::document_id(asg.id, pid(i));
      d.author = pid(i);
      d.assignment = asg.id;
      d.content = join(words) + "\n";
      d.content_hash = corpus::content_digest(d.content);
      docs.push_back(std::move(d));
    }
  }

  // Social graph: dense follows inside social clusters, sparse ones elsewhere.
  std::ostringstream actions;
  auto emit = [&](const char* network, const char* activity, const std::string& from, const std::string& to) {
    actions << nlohmann::json{{"network", network}, {"activity", activity}, {"from", from}, {"to", to}}.dump()
            << '\n';
  };
  std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same = social_cluster[i] == social_cluster[j];
      linked[i][j] = same;
      const auto a = pid(i), b = pid(j);
      if (unit(rng) < (same ? 0.85 : 0.03)) emit("FB", "mutual_follow", "fb." + a, "fb." + b);
      if (unit(rng) < (same ? 0.7 : 0.03)) emit("TW", "follow", "tw_" + (unit(rng) < 0.5 ? a : b), "tw_" + (unit(rng) < 0.5 ? b : a));
      if (same && unit(rng) < 0.5) emit("FB", "like", "fb." + a, "fb." + b);
    }
  }
  out.actions_jsonl = actions.str();
  out.project = corpus::Project(std::move(manifest), std::move(docs));

  // Search hits: people who know each other turn up together more often.
  for (const auto& asg : out.project.assignments()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto kw = search::build_keywords(out.project.person(pid(i)), out.project.person(pid(j)), asg);
        std::poisson_distribution<std::uint64_t> hits(linked[i][j] ? 6.0 : 2.0);
        out.search_table[search::query_string(kw)] = hits(rng);
      }
    }
  }
  return out;
}

Outcome evaluate(const Cohort& cohort) {
  const auto& project = cohort.project;
  const auto identities = social::IdentityTable::build(project, {});
  std::istringstream in(cohort.actions_jsonl);
  const auto imported = social::read_actions(in, identities);
  const social::ConnectionIndex connections(imported.actions);
  search::FixtureProvider provider(cohort.search_table);

  Outcome out;
  std::vector<ranking::PairAssessment> rows;
  for (const auto& asg : project.assignments()) {
    const auto sim = sim::all_pairs_similarity(project, asg.id);
    const auto evidence = search::collect_evidence(project, asg.id, provider);
    ranking::RankingInputs inputs;
    inputs.project = &project;
    inputs.assignment = asg.id;
    inputs.similarity = sim;
    inputs.connections = &connections;
    inputs.search = evidence;
    auto table = ranking::build_ranked_table(inputs);

    ranking::StatusBook book;
    for (const auto& r : table) {
      const bool copied = cohort.copied.contains(r.id);
      book.apply(r.id, copied ? ranking::Status::Confirmed : ranking::Status::Rejected, "ground-truth", 0);
    }
    inputs.statuses = &book;
    table = ranking::build_ranked_table(inputs);
    for (auto& r : table) {
      out.copied += r.status == ranking::Status::Confirmed;
      rows.push_back(std::move(r));
    }
  }
  out.pairs = rows.size();
  const auto features = glm::build_features(rows, connections);
  out.report = glm::compare_models(features);
  return out;
}

}  // namespace spdf::cohort
