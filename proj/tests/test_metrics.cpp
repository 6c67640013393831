#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "collabnet/binning.hpp"
#include "collabnet/metrics.hpp"

using namespace collabnet;

namespace {

ScientistNode node(const std::string& id, Gender g, MajorField f) { return {id, g, f}; }

CollaborationNetwork network(std::vector<ScientistNode> nodes, const std::vector<WeightedEdge>& edges,
                             std::vector<std::uint32_t> papers = {}) {
  if (papers.empty()) papers.assign(nodes.size(), 0);
  return CollaborationNetwork(std::move(nodes), std::move(papers), edges);
}

}  // namespace

TEST_CASE("g_ratio examples") {
  auto tcn = network({node("i", Gender::Male, MajorField::BIO), node("w", Gender::Female, MajorField::BIO),
                      node("m", Gender::Male, MajorField::EXA), node("u", Gender::Unknown, MajorField::EXA)},
                     {{0, 1, 2}, {0, 2, 3}, {0, 3, 7}, {1, 3, 1}});
  CHECK(g_ratio(tcn, 0) == doctest::Approx(0.4));
  CHECK(g_ratio_parts(tcn, 0).denominator == 5);
  CHECK(g_ratio(tcn, 2) == 0.0);
  CHECK(g_ratio(tcn, 1) == 0.0);
  CHECK(g_ratio(tcn, 3) == doctest::Approx(1.0 / 8.0));

  auto only_unknown = network({node("a", Gender::Female, MajorField::BIO), node("b", Gender::Unknown, MajorField::BIO)},
                              {{0, 1, 1}});
  CHECK_FALSE(g_ratio(only_unknown, 0).has_value());
  auto women = network({node("a", Gender::Male, MajorField::BIO), node("b", Gender::Female, MajorField::BIO),
                        node("c", Gender::Female, MajorField::BIO)},
                       {{0, 1, 1}, {0, 2, 4}});
  CHECK(g_ratio(women, 0) == 1.0);
  CHECK_FALSE(g_ratio(network({node("x", Gender::Male, MajorField::BIO)}, {}), 0).has_value());
}

TEST_CASE("m_ratio examples") {
  auto tcn = network({node("i", Gender::Male, MajorField::BIO), node("b", Gender::Female, MajorField::BIO),
                      node("e", Gender::Male, MajorField::EXA), node("u", Gender::Male, MajorField::Unknown)},
                     {{0, 1, 3}, {0, 2, 1}, {0, 3, 9}, {1, 2, 2}});
  CHECK(m_ratio(tcn, 0) == 0.25);
  CHECK(m_ratio(tcn, 2) == 1.0);
  CHECK_FALSE(m_ratio(tcn, 3).has_value());
  auto same = network({node("a", Gender::Male, MajorField::LIN), node("b", Gender::Male, MajorField::LIN)}, {{0, 1, 5}});
  CHECK(m_ratio(same, 0) == 0.0);
}

TEST_CASE("ratios match a brute-force reference and the weighted-sum identity") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    std::vector<ScientistNode> nodes;
    for (std::size_t i = 0; i < n; ++i) {
      const auto g = static_cast<Gender>(rng() % 3);
      const auto f = static_cast<MajorField>(rng() % 9);
      nodes.push_back(node("v" + std::to_string(i), g, f));
    }
    std::vector<WeightedEdge> edges;
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = i + 1; j < n; ++j) {
        if (rng() % 4 == 0) edges.push_back({i, j, static_cast<std::uint32_t>(1 + rng() % 9)});
      }
    }
    const auto tcn = network(nodes, edges);
    std::uint64_t w_mf = 0, w_ff = 0;
    for (const auto& e : edges) {
      const auto ga = nodes[e.a].gender, gb = nodes[e.b].gender;
      if (ga == Gender::Female && gb == Gender::Female) w_ff += e.weight;
      if ((ga == Gender::Female && gb == Gender::Male) || (ga == Gender::Male && gb == Gender::Female)) w_mf += e.weight;
    }
    std::uint64_t men_sum = 0, women_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t fem = 0, known = 0, other = 0, known_field = 0;
      for (const auto& e : edges) {
        if (e.a != i && e.b != i) continue;
        const auto& nb = nodes[e.a == i ? e.b : e.a];
        if (nb.gender != Gender::Unknown) known += e.weight;
        if (nb.gender == Gender::Female) fem += e.weight;
        if (nb.field != MajorField::Unknown) {
          known_field += e.weight;
          if (nb.field != nodes[i].field) other += e.weight;
        }
      }
      const auto g = g_ratio(tcn, i);
      REQUIRE(g.has_value() == (known > 0));
      if (g) {
        CHECK(std::abs(*g - static_cast<double>(fem) / static_cast<double>(known)) <= 1e-12);
        CHECK(*g >= 0.0);
        CHECK(*g <= 1.0);
      }
      const auto m = m_ratio(tcn, i);
      REQUIRE(m.has_value() == (known_field > 0 && nodes[i].field != MajorField::Unknown));
      if (m) CHECK(std::abs(*m - static_cast<double>(other) / static_cast<double>(known_field)) <= 1e-12);

      // strength' * g is the integer numerator.
      const auto parts = g_ratio_parts(tcn, i);
      CHECK(parts.denominator == known);
      if (nodes[i].gender == Gender::Male) men_sum += parts.numerator;
      if (nodes[i].gender == Gender::Female) women_sum += parts.numerator;
    }
    CHECK(men_sum == w_mf);
    CHECK(women_sum == 2 * w_ff);
  }
}

TEST_CASE("all-female network has g_ratio 1 wherever defined") {
  std::vector<ScientistNode> nodes;
  for (int i = 0; i < 6; ++i) nodes.push_back(node(std::to_string(i), i == 5 ? Gender::Unknown : Gender::Female, MajorField::HEA));
  auto tcn = network(nodes, {{0, 1, 1}, {1, 2, 2}, {2, 5, 1}, {3, 5, 4}});
  for (std::size_t i = 0; i < 6; ++i) {
    if (auto g = g_ratio(tcn, i)) CHECK(*g == 1.0);
  }
  CHECK_FALSE(g_ratio(tcn, 3).has_value());
}

TEST_CASE("summarize") {
  const std::vector<double> two = {0.2, 0.4};
  auto s = summarize(two);
  CHECK(s.n == 2);
  CHECK(*s.mean == doctest::Approx(0.3));
  CHECK(*s.se == doctest::Approx(std::sqrt(0.02) / std::sqrt(2.0)));
  const std::vector<double> one = {0.7};
  CHECK_FALSE(summarize(one).se.has_value());
  CHECK_FALSE(summarize(std::vector<double>{}).mean.has_value());
}

TEST_CASE("field_stats") {
  auto tcn = network({node("w", Gender::Female, MajorField::BIO), node("a", Gender::Male, MajorField::EXA),
                      node("b", Gender::Male, MajorField::EXA), node("c", Gender::Male, MajorField::BIO),
                      node("d", Gender::Female, MajorField::Unknown)},
                     {{0, 1, 1}, {0, 2, 1}, {0, 3, 2}, {0, 4, 1}}, {10, 1, 2, 3, 4});
  const auto stats = field_stats(tcn);
  CHECK(stats.total_scientists == 5);
  CHECK(stats.unknown_field == 1);
  const auto& bio = stats.rows[static_cast<std::size_t>(MajorField::BIO)];
  CHECK(bio.scientists == 2);
  CHECK(*bio.collaborators[0].mean == 4.0);
  CHECK(*bio.papers[0].mean == 10.0);
  CHECK(*bio.female_proportion == 0.5);
  CHECK(bio.tcn_fraction == doctest::Approx(0.4));
  CHECK(*bio.m_ratio[0].mean == doctest::Approx(0.5));
  CHECK(*bio.g_ratio[1].mean == 1.0);
  const auto& lin = stats.rows[static_cast<std::size_t>(MajorField::LIN)];
  CHECK(lin.empty());
  CHECK_FALSE(lin.female_proportion.has_value());
  CHECK_FALSE(lin.collaborators[0].mean.has_value());

  std::ostringstream out;
  write_field_stats_csv(out, stats);
  std::string line;
  std::istringstream in(out.str());
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + kNumFields);
}

TEST_CASE("geometric bins") {
  auto bins = geometric_bins(8);
  REQUIRE(bins.size() == 4);
  CHECK(bins[2].lo == 3);
  CHECK(bins[2].hi == 4);
  CHECK(bins[3].width() == 4);
  CHECK(find_bin(bins, 6) == 3);
  CHECK(find_bin(bins, 9) == 4);
  auto wide = geometric_bins(1000, {1.5, 1});
  for (std::size_t b = 1; b < wide.size(); ++b) CHECK(wide[b].lo == wide[b - 1].hi + 1);
  CHECK(wide.back().hi >= 1000);
  auto from = geometric_bins(20, {2.0, 5});
  CHECK(from.front().lo == 5);
  CHECK(from.front().hi == 5);
  CHECK(find_bin(from, 3) == from.size());
}

TEST_CASE("binned curve SE equals the direct computation") {
  std::mt19937_64 rng(7);
  std::vector<ScientistNode> nodes;
  const std::size_t n = 60;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back(node("v" + std::to_string(i), rng() % 2 ? Gender::Female : Gender::Male,
                         rng() % 3 ? MajorField::BIO : MajorField::ENG));
  }
  std::vector<WeightedEdge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (rng() % 6 == 0) edges.push_back({i, j, static_cast<std::uint32_t>(1 + rng() % 3)});
    }
  }
  const auto tcn = network(nodes, edges);
  const auto bins = geometric_bins(n);
  for (auto metric : {RatioMetric::GRatio, RatioMetric::MRatio}) {
    const auto curve = binned_curve(tcn, metric, MajorField::BIO, Gender::Female);
    std::vector<std::vector<double>> groups(bins.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (nodes[i].field != MajorField::BIO || nodes[i].gender != Gender::Female || tcn.degree(i) == 0) continue;
      const auto v = metric == RatioMetric::GRatio ? g_ratio(tcn, i) : m_ratio(tcn, i);
      if (v) groups[find_bin(bins, tcn.degree(i))].push_back(*v);
    }
    std::size_t k = 0;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (groups[b].empty()) continue;
      REQUIRE(k < curve.size());
      const auto& p = curve[k++];
      const auto m = groups[b].size();
      double mean = std::accumulate(groups[b].begin(), groups[b].end(), 0.0) / static_cast<double>(m);
      CHECK(p.bin_lo == bins[b].lo);
      CHECK(p.bin_hi == bins[b].hi);
      CHECK(p.n == m);
      CHECK(p.mean == doctest::Approx(mean).epsilon(1e-12));
      if (m < 2) {
        CHECK_FALSE(p.se.has_value());
      } else {
        double ss = 0;
        for (double v : groups[b]) ss += (v - mean) * (v - mean);
        const double se = std::sqrt(ss / static_cast<double>(m - 1)) / std::sqrt(static_cast<double>(m));
        REQUIRE(p.se.has_value());
        CHECK(*p.se == doctest::Approx(se).epsilon(1e-12));
      }
    }
    CHECK(k == curve.size());
  }
}

TEST_CASE("degree and weight distributions") {
  auto tri = network({node("a", Gender::Male, MajorField::BIO), node("b", Gender::Male, MajorField::BIO),
                      node("c", Gender::Male, MajorField::BIO), node("d", Gender::Female, MajorField::BIO)},
                     {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  auto h = degree_distribution(tri);
  REQUIRE(h.points.size() == 1);
  CHECK(h.points[0].value == 2);
  CHECK(h.points[0].probability == 1.0);
  CHECK(degree_distribution(tri, Gender::Female).points.empty());

  auto mixed = network({node("m", Gender::Male, MajorField::BIO), node("w", Gender::Female, MajorField::BIO)}, {{0, 1, 5}});
  for (auto g : {Gender::Male, Gender::Female}) {
    auto w = weight_distribution(mixed, g);
    REQUIRE(w.points.size() == 1);
    CHECK(w.points[0].value == 5);
    CHECK(w.points[0].probability == 1.0);
  }

  std::mt19937_64 rng(5);
  std::vector<std::uint64_t> samples;
  for (int i = 0; i < 10007; ++i) samples.push_back(rng() % 300);
  auto hist = make_histogram(samples);
  double sum = 0;
  for (const auto& p : hist.points) sum += p.probability;
  CHECK(std::abs(sum - 1.0) <= 1e-9);
  for (const auto& p : hist.points) CHECK(p.value > 0);
}

TEST_CASE("CSV emitters") {
  BinnedCurve curve = {{1, 1, 0.5, std::nullopt, 1}, {3, 4, 1.0 / 3.0, 0.125, 3}};
  std::ostringstream out;
  write_curve_csv(out, curve);
  CHECK(out.str() == "bin_lo,bin_hi,mean,se,n\n1,1,0.5,,1\n3,4,0.333333,0.125,3\n");
  std::ostringstream hist;
  const std::vector<std::uint64_t> s = {1, 1, 2};
  write_histogram_csv(hist, make_histogram(s));
  CHECK(hist.str().rfind("value,probability\n", 0) == 0);
}
