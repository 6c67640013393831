#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "collabnet/dedup.hpp"
#include "collabnet/error.hpp"
#include "collabnet/graph.hpp"
#include "collabnet/metrics.hpp"
#include "collabnet/synth.hpp"

using namespace collabnet;

namespace {

SynthConfig small(std::uint64_t seed = 3) {
  SynthConfig c;
  c.n_scientists = 2000;
  c.seed = seed;
  return c;
}

CollaborationNetwork truth_network(const SyntheticCorpus& corpus) {
  std::vector<ScientistNode> nodes;
  for (const auto& r : corpus.records) nodes.push_back({r.scientist_id, r.gender, primary_field(r)});
  std::vector<WeightedEdge> edges;
  for (const auto& e : corpus.truth_edges) {
    edges.push_back({static_cast<std::uint32_t>(e.a), static_cast<std::uint32_t>(e.b), static_cast<std::uint32_t>(e.weight)});
  }
  return CollaborationNetwork(std::move(nodes), std::vector<std::uint32_t>(corpus.records.size(), 0), edges);
}

}  // namespace

TEST_CASE("inject_typos examples") {
  const std::string title = "A sixty character title about collaboration networks here ok";
  REQUIRE(title.size() == 60);
  CHECK(inject_typos(title, 0.0, 1) == title);
  CHECK(typo_edit_count(0.05, 60) == 3);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto t = inject_typos(title, 0.05, seed);
    const auto d = dl_distance(std::string_view(title), std::string_view(t));
    CHECK(d >= 1);
    CHECK(d <= 3);
    CHECK(t[0] == 'A');
    CHECK(t == inject_typos(title, 0.05, seed));
  }
}

TEST_CASE("inject_typos distance bound holds at every rate") {
  const std::string title = "Short title";
  for (double rate : {0.01, 0.1, 0.3, 0.6, 1.0}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto t = inject_typos(title, rate, seed, seed % 2 == 0);
      CHECK(dl_distance(std::string_view(title), std::string_view(t)) <= typo_edit_count(rate, title.size()));
    }
  }
  CHECK(typo_edit_count(0.1, 0) == 0);
  CHECK(inject_typos("", 0.5, 1).empty());
}

TEST_CASE("generator is deterministic per seed") {
  const auto a = generate_corpus(small());
  const auto b = generate_corpus(small());
  std::ostringstream ta, tb;
  write_truth_edges_csv(ta, a);
  write_truth_edges_csv(tb, b);
  CHECK(ta.str() == tb.str());
  CHECK(a.truth_labels == b.truth_labels);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    REQUIRE(a.records[i].publications.size() == b.records[i].publications.size());
    for (std::size_t p = 0; p < a.records[i].publications.size(); ++p) {
      CHECK(a.records[i].publications[p].title == b.records[i].publications[p].title);
    }
  }
  std::ostringstream tc;
  write_truth_edges_csv(tc, generate_corpus(small(4)));
  CHECK(tc.str() != ta.str());
}

TEST_CASE("ground truth is consistent with the records") {
  const auto corpus = generate_corpus(small());
  std::size_t pubs = 0;
  for (const auto& r : corpus.records) pubs += r.publications.size();
  REQUIRE(corpus.truth_labels.size() == pubs);
  // Copies of one paper share year and author count and differ from the
  // clean title by at most the typo budget.
  std::map<std::size_t, const PublicationRecord*> first;
  std::size_t k = 0;
  for (const auto& r : corpus.records) {
    for (const auto& p : r.publications) {
      auto [it, fresh] = first.emplace(corpus.truth_labels[k++], &p);
      if (!fresh) {
        CHECK(it->second->year == p.year);
        CHECK(it->second->author_count == p.author_count);
        CHECK(it->second->title[0] == p.title[0]);
      }
    }
  }
  CHECK(first.size() == corpus.paper_count);

  // Truth edge weights equal shared truth papers.
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> shared;
  std::map<std::size_t, std::vector<std::size_t>> authors;
  k = 0;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    for (std::size_t p = 0; p < corpus.records[i].publications.size(); ++p) authors[corpus.truth_labels[k++]].push_back(i);
  }
  for (auto& [paper, list] : authors) {
    for (std::size_t x = 0; x < list.size(); ++x) {
      for (std::size_t y = x + 1; y < list.size(); ++y) ++shared[{std::min(list[x], list[y]), std::max(list[x], list[y])}];
    }
  }
  REQUIRE(shared.size() == corpus.truth_edges.size());
  for (const auto& e : corpus.truth_edges) CHECK(shared[{e.a, e.b}] == e.weight);
}

TEST_CASE("typo rate 0 makes duplicates exact copies") {
  auto config = small();
  config.typo_rate = 0.0;
  const auto corpus = generate_corpus(config);
  std::map<std::tuple<std::string, int, int>, std::size_t> exact;
  std::vector<std::size_t> labels;
  for (const auto& r : corpus.records) {
    for (const auto& p : r.publications) {
      labels.push_back(exact.emplace(std::tuple{p.title, p.year, p.author_count}, exact.size()).first->second);
    }
  }
  const auto s = score_clustering(labels, corpus.truth_labels);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
}

TEST_CASE("h = 1 with one gender gives g_ratio in {0, 1}") {
  auto config = small();
  config.homophily = 1.0;
  config.female_proportions.fill(1.0);
  config.unknown_field_female_proportion = 1.0;
  config.unknown_gender_fraction = 0.0;
  const auto tcn = truth_network(generate_corpus(config));
  std::size_t defined = 0;
  for (std::size_t i = 0; i < tcn.node_count(); ++i) {
    if (auto g = g_ratio(tcn, i)) {
      ++defined;
      CHECK((*g == 0.0 || *g == 1.0));
    }
  }
  CHECK(defined > 0);
}

TEST_CASE("h = 1 with both genders plants only same-gender edges") {
  auto config = small();
  config.homophily = 1.0;
  config.unknown_gender_fraction = 0.0;
  const auto corpus = generate_corpus(config);
  std::size_t mixed = 0;
  for (const auto& e : corpus.truth_edges) mixed += corpus.records[e.a].gender != corpus.records[e.b].gender;
  CHECK(mixed == 0);
}

TEST_CASE("planted female proportion per field") {
  auto config = small();
  config.n_scientists = 20000;
  const auto corpus = generate_corpus(config);
  const auto stats = field_stats(truth_network(corpus));
  for (std::size_t f = 0; f < kNumFields; ++f) {
    const auto& row = stats.rows[f];
    REQUIRE(row.female_proportion.has_value());
    const double p = config.female_proportions[f];
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(row.women + row.men));
    CHECK(std::abs(*row.female_proportion - p) <= 4 * se);
  }
  CHECK(static_cast<double>(stats.unknown_field) / 20000.0 == doctest::Approx(0.115).epsilon(0.1));
}

TEST_CASE("expected g_ratio") {
  CHECK(expected_g_ratio(0.3, 0.5, Gender::Female) == doctest::Approx(0.65));
  CHECK(expected_g_ratio(0.3, 0.5, Gender::Male) == doctest::Approx(0.35));
  CHECK(expected_g_ratio(1.0, 0.4, Gender::Male) == 0.0);
}

TEST_CASE("invalid configurations") {
  auto c = small();
  c.homophily = 1.5;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = small();
  c.field_proportions[0] += 0.1;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = small();
  c.n_scientists = 1;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = small();
  c.typo_rate = -0.1;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = small();
  c.degree_alpha = 0.0;
  CHECK_THROWS_AS(validate(c), UsageError);
  CHECK_NOTHROW(validate(small()));
}
