// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
// and exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "collabnet/binning.hpp"
#include "collabnet/csv.hpp"
#include "collabnet/dedup.hpp"
#include "collabnet/fit.hpp"
#include "collabnet/graph.hpp"
#include "collabnet/metrics.hpp"
#include "collabnet/pipeline.hpp"
#include "collabnet/synth.hpp"
#include "collabnet/text.hpp"

using namespace collabnet;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("collabnet_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(COLLABNET_CLI) + " " + args + " >/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) rows.push_back(split_csv_line(line).value());
  return rows;
}

CollaborationNetwork pipeline_network(const std::vector<ScientistRecord>& records) {
  return project_tcn(build_bipartite(records, cluster_duplicates(records)));
}

// --- metric oracle --------------------------------------------------------

void metric_oracle() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  bool defined_ok = true;
  bool identity_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<ScientistNode> nodes;
    for (std::size_t i = 0; i < n; ++i) {
      nodes.push_back({"v" + std::to_string(i), static_cast<Gender>(rng() % 3), static_cast<MajorField>(rng() % 9)});
    }
    const double density = 0.02 + 0.3 * static_cast<double>(rng() % 100) / 100.0;
    std::vector<WeightedEdge> edges;
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = i + 1; j < n; ++j) {
        if (uniform01(rng) < density) edges.push_back({i, j, static_cast<std::uint32_t>(1 + rng() % 20)});
      }
    }
    const CollaborationNetwork tcn(nodes, std::vector<std::uint32_t>(n, 0), edges);
    std::uint64_t w_mf = 0, w_ff = 0, men = 0, women = 0;
    for (const auto& e : edges) {
      const auto a = nodes[e.a].gender, b = nodes[e.b].gender;
      if (a == Gender::Female && b == Gender::Female) w_ff += e.weight;
      if ((a == Gender::Female && b == Gender::Male) || (a == Gender::Male && b == Gender::Female)) w_mf += e.weight;
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t fem = 0, known = 0, other = 0, known_field = 0;
      for (const auto& e : edges) {
        if (e.a != i && e.b != i) continue;
        const auto& nb = nodes[e.a == i ? e.b : e.a];
        known += nb.gender != Gender::Unknown ? e.weight : 0;
        fem += nb.gender == Gender::Female ? e.weight : 0;
        if (nb.field != MajorField::Unknown) {
          known_field += e.weight;
          other += nb.field != nodes[i].field ? e.weight : 0;
        }
      }
      const auto g = g_ratio(tcn, i);
      const auto m = m_ratio(tcn, i);
      const bool m_defined = known_field > 0 && nodes[i].field != MajorField::Unknown;
      if (g.has_value() != (known > 0) || m.has_value() != m_defined) defined_ok = false;
      if (g) worst = std::max(worst, std::abs(*g - static_cast<double>(fem) / static_cast<double>(known)));
      if (m) worst = std::max(worst, std::abs(*m - static_cast<double>(other) / static_cast<double>(known_field)));
      const auto parts = g_ratio_parts(tcn, i);
      if (parts.denominator != known) identity_ok = false;
      if (nodes[i].gender == Gender::Male) men += parts.numerator;
      if (nodes[i].gender == Gender::Female) women += parts.numerator;
    }
    if (men != w_mf || women != 2 * w_ff) identity_ok = false;
  }
  report("metric-oracle", worst <= 1e-12 && defined_ok && identity_ok,
         fmt::format("100 networks, max |diff| {:.3g} (<= 1e-12), definedness {}, weighted-sum identity {}", worst,
                     defined_ok ? "matches" : "differs", identity_ok ? "exact" : "violated"));
}

// --- dedup recovery -------------------------------------------------------

SyntheticCorpus corpus_with_papers(std::size_t papers, double typo_rate, std::uint64_t seed) {
  SynthConfig c;
  c.typo_rate = typo_rate;
  c.seed = seed;
  c.n_scientists = 1800;
  while (true) {
    auto corpus = generate_corpus(c);
    if (corpus.paper_count >= papers) return corpus;
    c.n_scientists += 100;
  }
}

ClusterScores dedup_scores(const SyntheticCorpus& corpus) {
  std::vector<PublicationRecord> pubs;
  for (const auto& r : corpus.records) pubs.insert(pubs.end(), r.publications.begin(), r.publications.end());
  return score_clustering(cluster_labels(pubs, {0.10, 4}), corpus.truth_labels);
}

void dedup_recovery() {
  const auto noisy = corpus_with_papers(10000, 0.04, 101);
  const auto s = dedup_scores(noisy);
  const auto clean = corpus_with_papers(10000, 0.0, 101);
  const auto e = dedup_scores(clean);
  const bool ok = s.precision >= 0.99 && s.recall >= 0.99 && e.precision == 1.0 && e.recall == 1.0;
  report("dedup-recovery", ok,
         fmt::format("typo 0.04: {} papers, precision {:.6f} recall {:.6f} (>= 0.99); typo 0: precision {} recall {} "
                     "(== 1)",
                     noisy.paper_count, s.precision, s.recall, e.precision, e.recall));
}

// --- dedup oracle ---------------------------------------------------------

std::vector<std::size_t> brute_force_labels(const std::vector<PublicationRecord>& pubs, double threshold) {
  std::vector<PublicationRecord> norm = pubs;
  for (auto& p : norm) p.title = normalize_title(std::string_view(p.title));
  const std::size_t n = pubs.size();
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  // Relabel until stable: each pair of matching records takes the smaller label.
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (is_duplicate(norm[i], norm[j], threshold)) matches.push_back({i, j});
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [i, j] : matches) {
      const auto m = std::min(label[i], label[j]);
      if (label[i] != m || label[j] != m) {
        label[i] = label[j] = m;
        changed = true;
      }
    }
  }
  // Renumber by first appearance.
  std::map<std::size_t, std::size_t> renumber;
  for (auto& l : label) l = renumber.emplace(l, renumber.size()).first->second;
  return label;
}

void dedup_oracle() {
  std::mt19937_64 rng(77);
  std::size_t corpora = 0, mismatches = 0, merges = 0;
  for (int trial = 0; trial < 100; ++trial) {
    // Records from a few synthetic papers, heavy typos so that matches
    // straddle the threshold.
    SynthConfig c;
    c.n_scientists = 40;
    c.seed = 1000 + static_cast<std::uint64_t>(trial);
    c.title_min_chars = 20;
    c.title_max_chars = 60;
    c.typo_rate = 0.02 + 0.06 * static_cast<double>(trial % 5);
    c.typos_on_first_char = trial % 7 == 0;
    c.doi_fraction = trial % 3 == 0 ? 0.3 : 0.0;
    c.year_min = 2000;
    c.year_max = 2001;
    c.max_external_authors = 0;
    const auto corpus = generate_corpus(c);
    std::vector<PublicationRecord> pubs;
    for (const auto& r : corpus.records) pubs.insert(pubs.end(), r.publications.begin(), r.publications.end());
    if (pubs.size() > 200) pubs.resize(200);
    for (auto& p : pubs) {
      if (rng() % 10 == 0) p.doi = "10.9/" + std::to_string(rng() % 4);
    }
    for (double threshold : {0.05, 0.10, 0.20}) {
      const auto got = cluster_labels(pubs, {threshold, 4});
      const auto want = brute_force_labels(pubs, threshold);
      ++corpora;
      mismatches += got != want;
      std::map<std::size_t, int> sizes;
      for (auto l : want) ++sizes[l];
      merges += pubs.size() - sizes.size();
    }
  }
  report("dedup-oracle", mismatches == 0,
         fmt::format("{} corpora of <= 200 records, {} mismatches, {} merges in the oracle", corpora, mismatches,
                     merges));
}

// --- fit recovery ---------------------------------------------------------

void fit_recovery() {
  bool ok = true;
  std::string detail;
  for (double beta : {85.4, 49.5}) {
    int within = 0, covered = 0, errors = 0;
    double worst_alpha = 0.0, worst_beta = 0.0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      const auto samples = sample_truncated_power_law(1.53, beta, 1, 100000, derive_seed(7919, rep));
      try {
        const auto f = fit_truncated_power_law(make_histogram(samples), 1);
        const double da = std::abs(f.exponent - 1.53);
        const double db = std::abs(f.cutoff - beta);
        worst_alpha = std::max(worst_alpha, da);
        worst_beta = std::max(worst_beta, db / beta);
        within += da <= 0.1 && db <= 0.15 * beta;
        covered += da <= 3 * f.exponent_se && db <= 3 * f.cutoff_se;
      } catch (const FitError&) {
        ++errors;
      }
    }
    ok = ok && within == 20 && covered >= 19;
    detail += fmt::format("beta={}: {}/20 within tolerance (max |da| {:.3f}, max |db|/b {:.3f}), {}/20 covered at 3 SE; ",
                          beta, within, worst_alpha, worst_beta, covered);
    if (errors) detail += fmt::format("{} fit errors; ", errors);
  }
  for (double lambda : {3.17, 2.68}) {
    int within = 0;
    double worst = 0.0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      const auto samples = sample_power_law(lambda, 1, 1000000, derive_seed(104729, rep));
      const auto f = fit_power_law(make_histogram(samples), 1);
      worst = std::max(worst, std::abs(f.exponent - lambda));
      within += std::abs(f.exponent - lambda) <= 0.1;
    }
    ok = ok && within == 20;
    detail += fmt::format("lambda={}: {}/20 within 0.1 (max |d| {:.3f}); ", lambda, within, worst);
  }
  detail.resize(detail.size() - 2);
  report("fit-recovery", ok, detail);
}

// --- planted homophily ----------------------------------------------------

void planted_homophily() {
  SynthConfig c;
  c.n_scientists = 10000;
  c.homophily = 0.5;
  c.female_proportions.fill(0.5);
  c.unknown_field_female_proportion = 0.5;
  c.unknown_gender_fraction = 0.0;
  c.seed = 31;
  const auto tcn = pipeline_network(generate_corpus(c).records);
  std::vector<double> g;
  for (std::size_t i = 0; i < tcn.node_count(); ++i) {
    if (auto v = g_ratio(tcn, i)) g.push_back(*v);
  }
  const auto s = summarize(g);
  const bool mean_ok = s.mean && s.se && std::abs(*s.mean - 0.5) <= 2 * *s.se;

  SynthConfig one = c;
  one.homophily = 1.0;
  one.female_proportions.fill(1.0);
  one.unknown_field_female_proportion = 1.0;
  const auto tcn1 = pipeline_network(generate_corpus(one).records);
  std::size_t defined = 0, outside = 0;
  for (std::size_t i = 0; i < tcn1.node_count(); ++i) {
    if (auto v = g_ratio(tcn1, i)) {
      ++defined;
      outside += *v != 0.0 && *v != 1.0;
    }
  }
  report("planted-homophily", mean_ok && outside == 0 && defined > 0,
         fmt::format("h=0.5: mean g {:.5f}, SE {:.5f}, |mean-0.5| = {:.2f} SE (<= 2) over {} scientists; "
                     "h=1 one gender: {} of {} defined g-ratios outside {{0,1}}",
                     s.mean.value_or(NAN), s.se.value_or(NAN), std::abs(s.mean.value_or(NAN) - 0.5) / s.se.value_or(NAN),
                     s.n, outside, defined));
}

// --- histogram normalization and SE ---------------------------------------

void histogram_and_se(const fs::path& run) {
  double worst_sum = 0.0;
  std::size_t histograms = 0;
  for (const auto& e : fs::directory_iterator(run)) {
    const auto name = e.path().filename().string();
    if (name.find("_hist_") == std::string::npos) continue;
    double sum = 0.0;
    for (const auto& row : read_csv_rows(e.path())) sum += std::stod(row[1]);
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    ++histograms;
  }

  // Recompute every emitted curve from the network files.
  std::ifstream nodes(run / artifacts::kNodes), edges(run / artifacts::kEdges);
  const auto tcn = read_network_csv(nodes, edges);
  const auto bins = geometric_bins(std::max<std::size_t>(tcn.node_count(), 1));
  std::size_t curves = 0, points = 0, bad = 0;
  double worst_se = 0.0;
  for (MajorField field : kAllFields) {
    for (auto [gender, tag] : {std::pair{Gender::Female, "F"}, std::pair{Gender::Male, "M"}}) {
      for (auto [metric, prefix] : {std::pair{RatioMetric::GRatio, "g_ratio_curve_"},
                                    std::pair{RatioMetric::MRatio, "m_ratio_curve_"}}) {
        std::vector<std::vector<double>> groups(bins.size());
        for (std::size_t i = 0; i < tcn.node_count(); ++i) {
          const auto& nd = tcn.node(i);
          if (nd.field != field || nd.gender != gender || tcn.degree(i) == 0) continue;
          const auto v = metric == RatioMetric::GRatio ? g_ratio(tcn, i) : m_ratio(tcn, i);
          if (v) groups[find_bin(bins, tcn.degree(i))].push_back(*v);
        }
        std::vector<std::vector<std::string>> expected;
        const auto curve = binned_curve(tcn, metric, field, gender);
        std::size_t k = 0;
        for (std::size_t b = 0; b < bins.size(); ++b) {
          if (groups[b].empty()) continue;
          const double n = static_cast<double>(groups[b].size());
          double mean = 0.0;
          for (double v : groups[b]) mean += v;
          mean /= n;
          std::string se_text;
          if (groups[b].size() >= 2) {
            double ss = 0.0;
            for (double v : groups[b]) ss += (v - mean) * (v - mean);
            const double se = std::sqrt(ss / (n - 1)) / std::sqrt(n);
            se_text = format_double(se);
            if (k < curve.size() && curve[k].se) worst_se = std::max(worst_se, std::abs(*curve[k].se - se));
          }
          expected.push_back({std::to_string(bins[b].lo), std::to_string(bins[b].hi), format_double(mean), se_text,
                              std::to_string(groups[b].size())});
          ++k;
        }
        const auto rows = read_csv_rows(run / (std::string(prefix) + std::string(to_string(field)) + "_" + tag + ".csv"));
        bad += rows != expected;
        ++curves;
        points += rows.size();
      }
    }
  }
  report("histogram-normalization", histograms == 6 && worst_sum <= 1e-9 && bad == 0 && worst_se <= 1e-12,
         fmt::format("{} histograms, max |sum-1| {:.3g} (<= 1e-9); {} curves / {} bins checked against a direct "
                     "SE = std/sqrt(n), {} mismatching files, max |se diff| {:.3g}",
                     histograms, worst_sum, curves, points, bad, worst_se));
}

// --- performance and determinism ------------------------------------------

void dedup_performance() {
  SynthConfig c;
  c.n_scientists = 11000;
  c.seed = 5;
  const auto corpus = generate_corpus(c);
  std::vector<PublicationRecord> pubs;
  for (const auto& r : corpus.records) {
    for (const auto& p : r.publications) {
      if (pubs.size() < 100000) pubs.push_back(p);
    }
  }
  const auto start = Clock::now();
  const auto labels = cluster_labels(pubs, {0.10, 4});
  const double t = seconds_since(start);
  report("performance-dedup", pubs.size() == 100000 && t < 60.0,
         fmt::format("{} records, {} clusters in {:.2f} s (< 60 s, 4 threads)", pubs.size(),
                     *std::max_element(labels.begin(), labels.end()) + 1, t));
}

bool same_directories(const fs::path& a, const fs::path& b, std::string& detail) {
  std::map<std::string, std::string> fa, fb;
  for (const auto& e : fs::directory_iterator(a)) fa[e.path().filename().string()] = slurp(e.path());
  for (const auto& e : fs::directory_iterator(b)) fb[e.path().filename().string()] = slurp(e.path());
  std::size_t differing = 0;
  for (const auto& [name, content] : fa) {
    auto it = fb.find(name);
    if (it == fb.end() || it->second != content) {
      if (differing++ == 0) detail = "first difference: " + name;
    }
  }
  differing += fb.size() > fa.size() ? fb.size() - fa.size() : 0;
  if (differing == 0) detail = fmt::format("{} files identical", fa.size());
  return differing == 0 && fa.size() == fb.size();
}

}  // namespace

int main() {
  metric_oracle();
  dedup_recovery();
  dedup_oracle();
  fit_recovery();
  planted_homophily();

  const auto run1 = scratch("threads1");
  const auto run4 = scratch("threads4");
  auto start = Clock::now();
  const int rc4 = cli("synth -o " + run4.string() + " --threads 4") | cli("report -o " + run4.string() + " --threads 4");
  const double pipeline_seconds = seconds_since(start);
  const int rc1 = cli("synth -o " + run1.string() + " --threads 1") | cli("report -o " + run1.string() + " --threads 1");

  if (rc4 == 0) {
    histogram_and_se(run4);
  } else {
    report("histogram-normalization", false, "pipeline run failed");
  }
  dedup_performance();
  report("performance-pipeline", rc4 == 0 && pipeline_seconds < 300.0,
         fmt::format("synth + report on the default corpus in {:.1f} s (< 300 s), exit {}", pipeline_seconds, rc4));
  std::string detail;
  const bool same = rc1 == 0 && rc4 == 0 && same_directories(run1, run4, detail);
  report("determinism", same, "--threads 1 vs --threads 4: " + detail);

  std::cout << (failures == 0 ? "ALL PASS" : fmt::format("{} FAILED", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
