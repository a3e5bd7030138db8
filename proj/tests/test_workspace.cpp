#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <thread>

#include "spdf/error.hpp"
#include "spdf/workspace.hpp"
#include "support.hpp"

using namespace spdf;
using testing_support::TempDir;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Demo fixture with every kind of evidence gathered.
Workspace demo_workspace(const fs::path& dir) {
  const auto root = testing_support::demo_fixture();
  auto w = Workspace::create(dir, corpus::load_project(root));
  w.run_similarity();
  w.ingest_social(social::read_directory(root / "social" / "accounts.json"), slurp(root / "social" / "actions.jsonl"));
  auto provider = search::FixtureProvider::from_file(root / "search" / "hits.json");
  w.ingest_search(provider);
  return w;
}

// Everything a client can read back.
nlohmann::json snapshot(const Workspace& w) {
  nlohmann::json j;
  for (const auto& a : w.project().assignments()) {
    auto& s = j[a.id];
    for (const auto& row : w.ranked_table(a.id)) {
      s["table"].push_back(ranking::assessment_to_json(row));
      s["detail"].push_back(w.pair_detail(row.id));
    }
    for (auto f : {ranking::Factor::Cs, ranking::Factor::Sn, ranking::Factor::Se, ranking::Factor::Total}) {
      s["clusters"].push_back(ranking::cluster_stats_to_json(w.clusters(a.id, f)));
    }
    s["matrix"] = w.matrix(a.id, ranking::Factor::Total);
  }
  j["graph"] = w.graph();
  for (const auto& e : w.journal()) j["journal"].push_back(ranking::journal_to_json(e));
  for (const auto& m : w.identities()) j["identities"].push_back(social::match_to_json(m));
  return j;
}

class EpochGuard {
 public:
  explicit EpochGuard(const char* value) { setenv("SOURCE_DATE_EPOCH", value, 1); }
  ~EpochGuard() { unsetenv("SOURCE_DATE_EPOCH"); }
};

}  // namespace

TEST(Workspace, ReopenedStateAnswersIdentically) {
  TempDir tmp;
  EpochGuard epoch("1700000000");
  auto w = demo_workspace(tmp / "ws");
  w.decide_identity("FB", "ana.kovac", "ana", social::IdentityDecision::Confirmed);
  w.set_weights("hw1", {0.4, 0.4, 0.2});
  const auto table = w.ranked_table("hw1");
  ASSERT_GE(table.size(), 3u);
  w.set_status(table[0].id, ranking::Status::Confirmed, "t");
  w.set_status(table[1].id, ranking::Status::Rejected, "t");
  w.set_status(table[1].id, ranking::Status::NotChecked, "t");

  const auto before = snapshot(w);
  const auto reopened = Workspace::open(tmp / "ws");
  EXPECT_EQ(snapshot(reopened), before);
  EXPECT_EQ(reopened.project().assignment("hw1").weights, (corpus::Weights{0.4, 0.4, 0.2}));
  EXPECT_EQ(reopened.pair(table[0].id).decided_at, 1700000000);
}

TEST(Workspace, StatusRevisionsAndConflicts) {
  TempDir tmp;
  auto w = demo_workspace(tmp / "ws");
  const auto id = w.ranked_table("hw1").front().id;
  auto a = w.set_status(id, ranking::Status::Confirmed, "x", 0);
  EXPECT_EQ(a.revision, 1u);
  EXPECT_EQ(a.status, ranking::Status::Confirmed);
  try {
    w.set_status(id, ranking::Status::Rejected, "y", 0);
    FAIL() << "stale revision accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Conflict);
  }
  a = w.set_status(id, ranking::Status::Rejected, "y");
  EXPECT_EQ(a.revision, 2u);
  EXPECT_EQ(w.journal().size(), 2u);
  EXPECT_EQ(w.journal().back().prior, ranking::Status::Confirmed);

  for (const std::string bad : {"nope", "hw1:zz:yy", "hw9:ana:ben"}) {
    try {
      w.set_status(bad, ranking::Status::Confirmed, "x");
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotFound) << bad;
    }
  }
}

TEST(Workspace, TornJournalTailIsDropped) {
  TempDir tmp;
  {
    auto w = demo_workspace(tmp / "ws");
    const auto rows = w.ranked_table("hw1");
    w.set_status(rows[0].id, ranking::Status::Confirmed, "x");
    w.set_status(rows[1].id, ranking::Status::Rejected, "x");
  }
  const auto journal = tmp / "ws" / "journal.jsonl";
  const auto intact = fs::file_size(journal);
  {
    std::ofstream out(journal, std::ios::app | std::ios::binary);
    out << R"({"pair":"hw1:ana:ben","prior":"not_checked","sta)";
  }
  const auto w = Workspace::open(tmp / "ws");
  EXPECT_EQ(w.journal().size(), 2u);
  EXPECT_EQ(fs::file_size(journal), intact);
}

TEST(Workspace, CorruptJournalLineIsReported) {
  TempDir tmp;
  {
    auto w = demo_workspace(tmp / "ws");
    w.set_status(w.ranked_table("hw1")[0].id, ranking::Status::Confirmed, "x");
  }
  {
    std::ofstream out(tmp / "ws" / "journal.jsonl", std::ios::app);
    out << "garbage\n";
  }
  try {
    Workspace::open(tmp / "ws");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Workspace, MissingOrCorruptState) {
  TempDir tmp;
  EXPECT_FALSE(Workspace::exists(tmp / "none"));
  try {
    Workspace::open(tmp / "none");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
  }
  fs::create_directories(tmp / "bad");
  testing_support::write(tmp / "bad" / "state.json", "{\"version\":");
  try {
    Workspace::open(tmp / "bad");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
  }
}

TEST(Workspace, ConcurrentWritersAndReaders) {
  TempDir tmp;
  auto w = demo_workspace(tmp / "ws");
  const auto rows = w.ranked_table("hw1");
  ASSERT_GE(rows.size(), 4u);
  constexpr int kWriters = 4, kRounds = 25;
  std::vector<std::thread> threads;
  for (int t = 0; t < kWriters; ++t) {
    threads.emplace_back([&, t] {
      for (int r = 0; r < kRounds; ++r) {
        w.set_status(rows[static_cast<std::size_t>(t)].id, r % 2 ? ranking::Status::Rejected : ranking::Status::Confirmed,
                     "writer" + std::to_string(t));
      }
    });
  }
  std::atomic<bool> done{false};
  std::thread reader([&] {
    while (!done) {
      for (const auto& row : w.ranked_table("hw1")) ASSERT_LE(row.revision, static_cast<std::uint64_t>(kRounds));
    }
  });
  for (auto& t : threads) t.join();
  done = true;
  reader.join();

  EXPECT_EQ(w.journal().size(), static_cast<std::size_t>(kWriters * kRounds));
  for (int t = 0; t < kWriters; ++t) {
    const auto a = w.pair(rows[static_cast<std::size_t>(t)].id);
    EXPECT_EQ(a.revision, static_cast<std::uint64_t>(kRounds));
    EXPECT_EQ(a.status, ranking::Status::Confirmed);
  }
  EXPECT_EQ(snapshot(Workspace::open(tmp / "ws")), snapshot(w));
}

TEST(Workspace, ConcurrentConflictingUpdatesSerialize) {
  TempDir tmp;
  auto w = demo_workspace(tmp / "ws");
  const auto id = w.ranked_table("hw1").front().id;
  std::atomic<int> accepted{0}, conflicts{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      try {
        w.set_status(id, ranking::Status::Confirmed, "race", 0);
        ++accepted;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Conflict) ++conflicts;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(accepted, 1);
  EXPECT_EQ(conflicts, 7);
}

TEST(Workspace, SocialIngestIsAllOrNothing) {
  TempDir tmp;
  auto w = demo_workspace(tmp / "ws");
  const auto before = snapshot(w);
  const auto root = testing_support::demo_fixture();
  EXPECT_THROW(w.ingest_social(social::read_directory(root / "social" / "accounts.json"), "{not json}\n"), Error);
  EXPECT_EQ(snapshot(w), before);
  EXPECT_EQ(snapshot(Workspace::open(tmp / "ws")), before);
}

TEST(Workspace, IdentityDecisionsChangeConnections) {
  TempDir tmp;
  auto w = demo_workspace(tmp / "ws");
  const auto pending = w.pending_identities();
  ASSERT_FALSE(pending.empty());
  const auto r = w.decide_identity(pending[0].network, pending[0].candidate_handle, pending[0].person,
                                   social::IdentityDecision::Confirmed);
  EXPECT_LT(r.pending.size(), pending.size());
  EXPECT_THROW(w.decide_identity("FB", "x", "nobody", social::IdentityDecision::Confirmed), Error);
}

TEST(Workspace, ClockHonoursSourceDateEpoch) {
  {
    EpochGuard epoch("1234");
    EXPECT_EQ(current_time(), 1234);
  }
  EXPECT_GT(current_time(), 1600000000);
}
