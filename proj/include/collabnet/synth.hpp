#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "collabnet/records.hpp"

namespace collabnet {

/// Synthetic corpus parameters. Field shares and female proportions default
/// to observed per-field values, in field order (AGR, SOC, BIO, EXA, HUM, HEA, ENG, LIN).
struct SynthConfig {
  std::size_t n_scientists = 20000;
  std::array<double, kNumFields> field_proportions = {
      31812.0 / 243086, 20806.0 / 243086, 39767.0 / 243086, 33310.0 / 243086,
      26263.0 / 243086, 67561.0 / 243086, 18365.0 / 243086, 5202.0 / 243086};
  std::array<double, kNumFields> female_proportions = {0.444, 0.473, 0.601, 0.347,
                                                       0.651, 0.598, 0.272, 0.716};
  double unknown_field_fraction = 0.115;
  double unknown_field_female_proportion = 0.525;
  double unknown_gender_fraction = 0.00035;

  double homophily = 0.3;            // P(a partner is drawn from the initiator's gender only)
  double interdisciplinarity = 0.25; // P(a partner is drawn from a different known field)

  double degree_alpha = 1.53;  // target collaborators ~ k^-alpha e^(-k/beta)
  double degree_beta = 85.4;
  std::uint64_t degree_k_min = 1;
  double weight_lambda = 3.0;       // shared papers per collaboration ~ w^-lambda
  double solo_paper_mean = 1.0;     // Poisson mean of single-author papers per scientist
  int max_external_authors = 4;     // author_count = 2 + U{0..max}
  int year_min = 1960;
  int year_max = 2012;
  std::size_t title_min_chars = 140;
  std::size_t title_max_chars = 200;

  double typo_rate = 0.02;
  bool typos_on_first_char = false;
  double doi_fraction = 0.0;  // share of papers carrying a DOI on every copy
  std::uint64_t seed = 1;
};

// Throws UsageError describing the first invalid or infeasible setting.
void validate(const SynthConfig& config);

struct TruthEdge {
  std::size_t a = 0;  // scientist indices, a < b
  std::size_t b = 0;
  std::uint64_t weight = 0;
};

struct SyntheticCorpus {
  std::vector<ScientistRecord> records;
  // True paper for every publication, in (record, publication) order.
  std::vector<std::size_t> truth_labels;
  std::vector<TruthEdge> truth_edges;  // sorted by (a, b)
  std::size_t paper_count = 0;
};

/// Generates scientists, their collaborations and per-author copies of each
/// paper.
///
/// Every scientist draws a target number of collaborators from the degree
/// model; targets become stubs that are paired configuration-model style.
/// A randomly chosen stub picks its partner from the remaining stubs: with
/// probability `homophily` only stubs of its own gender are eligible, and with
/// probability `interdisciplinarity` only stubs of other known fields (else
/// only its own field). The field constraint is dropped when no eligible
/// stub is left; a stub whose gender constraint cannot be met is discarded. Each distinct pair then shares w papers drawn from
/// the weight model, two in-corpus authors per paper.
///
/// Planted expectations (degrees independent of gender, female share f of
/// the pool): a woman's expected g-ratio is h + (1 - h) f and a man's is
/// (1 - h) f, so the population mean is f; at f = 0.5 it is exactly 0.5 by
/// gender symmetry.
SyntheticCorpus generate_corpus(const SynthConfig& config);

double expected_g_ratio(double homophily, double female_share, Gender gender);

// Number of edits inject_typos applies: ceil(rate * length).
std::size_t typo_edit_count(double rate, std::size_t length);

/// Applies typo_edit_count(rate, |title|) single-character edits (insert,
/// delete, substitute, adjacent transposition) using lowercase ASCII
/// letters. Edits sit at least three characters apart, which keeps
/// dl_distance(title, result) <= number of edits; past that capacity only
/// insert, delete and substitute are used. The first character is never
/// touched unless allow_first_char is set. Deterministic per seed.
std::string inject_typos(std::string_view title, double rate, std::uint64_t seed,
                         bool allow_first_char = false);

// record_id = "<scientist_id>#<publication index>".
std::string record_id(const ScientistRecord& record, std::size_t publication);

void write_truth_clusters_csv(std::ostream& out, const SyntheticCorpus& corpus);  // record_id,cluster_id
void write_truth_edges_csv(std::ostream& out, const SyntheticCorpus& corpus);     // id_i,id_j,weight

}  // namespace collabnet
