#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collabnet/records.hpp"

namespace collabnet {

inline constexpr double kDefaultDedupThreshold = 0.10;

// Optimal-string-alignment distance (Damerau-Levenshtein where no substring
// is edited twice). Unit costs for insert, delete, substitute and adjacent
// transposition. Not a metric: the triangle inequality can fail.
std::size_t dl_distance(std::u32string_view a, std::u32string_view b);
std::size_t dl_distance(std::string_view a, std::string_view b);  // UTF-8

// Same distance when it is <= max_distance; otherwise any value greater
// than max_distance. Runs in O(max_distance * min(|a|, |b|)).
std::size_t bounded_dl_distance(std::u32string_view a, std::u32string_view b,
                                std::size_t max_distance);

// Largest integer d with d < threshold * length (strict bound).
// Returns -1 when no non-negative distance qualifies.
long long max_duplicate_distance(double threshold, std::size_t length);

inline constexpr char32_t kEmptyTitleLetter = 0;

struct BlockKey {
  int year = 0;
  int author_count = 0;
  char32_t first_letter = kEmptyTitleLetter;

  friend auto operator<=>(const BlockKey&, const BlockKey&) = default;
};

// `normalized_title` must already be normalized.
BlockKey block_key(std::u32string_view normalized_title, int year, int author_count);

/// Pairwise duplicate rule for two publications with normalized titles.
/// Different block keys never match. Inside a block, equal DOIs force a
/// match and different DOIs force a non-match; otherwise the pair matches
/// when dl_distance < threshold * max(|title_a|, |title_b|).
bool is_duplicate(const PublicationRecord& a, const PublicationRecord& b,
                  double threshold = kDefaultDedupThreshold);

struct ClusterMember {
  std::size_t scientist = 0;    // index into the record list
  std::size_t publication = 0;  // index into that scientist's publications
};

struct PaperCluster {
  std::size_t cluster_id = 0;
  std::vector<ClusterMember> members;  // in input order
  int year = 0;
  int author_count = 0;
};

struct DedupOptions {
  double threshold = kDefaultDedupThreshold;
  unsigned threads = 1;  // never affects the result
};

/// Partitions publications into clusters of duplicates: matching pairs
/// within a block are merged by transitive closure. Titles are normalized
/// internally. Returns, for each input publication, its cluster index;
/// clusters are numbered by their first member's input position.
std::vector<std::size_t> cluster_labels(std::span<const PublicationRecord> pubs,
                                        const DedupOptions& options = {});

// Runs cluster_labels over every publication of every record, in
// (record, publication) order.
std::vector<PaperCluster> cluster_duplicates(const std::vector<ScientistRecord>& records,
                                             const DedupOptions& options = {});

struct ClusterScores {
  double precision = 1.0;
  double recall = 1.0;
  std::uint64_t true_pairs = 0;
  std::uint64_t predicted_pairs = 0;
  std::uint64_t matched_pairs = 0;
};

// Pairwise precision and recall of a clustering against a reference
// labelling of the same items. An empty pair set scores 1.
ClusterScores score_clustering(std::span<const std::size_t> predicted,
                               std::span<const std::size_t> truth);

}  // namespace collabnet
