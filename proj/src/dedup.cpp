#include "collabnet/dedup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "collabnet/disjoint_set.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/text.hpp"

namespace collabnet {

std::size_t dl_distance(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::size_t> prev2(m + 1), prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      std::size_t d = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d = std::min(d, prev2[j - 2] + 1);
      }
      cur[j] = d;
    }
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return prev[m];
}

std::size_t dl_distance(std::string_view a, std::string_view b) {
  return dl_distance(utf8_decode(a), utf8_decode(b));
}

std::size_t bounded_dl_distance(std::u32string_view a, std::u32string_view b,
                                std::size_t max_distance) {
  if (a.size() > b.size()) std::swap(a, b);
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t k = max_distance;
  const std::size_t cap = k + 1;
  if (m - n > k) return cap;
  if (n == 0) return m;

  // Rows are indexed by position in b; only the diagonal band |i - j| <= k
  // is evaluated. Everything just outside the band reads as `cap`.
  std::vector<std::uint32_t> prev2(m + 2, cap), prev(m + 2, cap), cur(m + 2, cap);
  for (std::size_t j = 0; j <= std::min(m, k); ++j) prev[j] = static_cast<std::uint32_t>(j);

  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t j_lo = i > k ? i - k : 1;
    const std::size_t j_hi = std::min(m, i + k);
    cur[j_lo - 1] = j_lo == 1 ? static_cast<std::uint32_t>(std::min(i, cap)) : cap;
    std::uint32_t row_min = cur[j_lo - 1];
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      const std::uint32_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      std::uint32_t d = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d = std::min<std::uint32_t>(d, prev2[j - 2] + 1);
      }
      d = std::min<std::uint32_t>(d, cap);
      cur[j] = d;
      row_min = std::min(row_min, d);
    }
    if (j_hi + 1 <= m) cur[j_hi + 1] = cap;
    if (row_min > k) return cap;
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return prev[m];
}

long long max_duplicate_distance(double threshold, std::size_t length) {
  const double bound = threshold * static_cast<double>(length);
  if (!(bound > 0.0)) return -1;
  auto d = static_cast<long long>(std::floor(bound));
  while (d >= 0 && !(static_cast<double>(d) < bound)) --d;
  return d;
}

BlockKey block_key(std::u32string_view normalized_title, int year, int author_count) {
  return BlockKey{year, author_count,
                  normalized_title.empty() ? kEmptyTitleLetter : normalized_title.front()};
}

namespace {

enum class DoiRule { Match, NoMatch, Undecided };

DoiRule doi_rule(const std::optional<std::string>& a, const std::optional<std::string>& b) {
  if (!a || !b) return DoiRule::Undecided;
  return *a == *b ? DoiRule::Match : DoiRule::NoMatch;
}

bool titles_match(std::u32string_view a, std::u32string_view b, double threshold) {
  const long long limit = max_duplicate_distance(threshold, std::max(a.size(), b.size()));
  if (limit < 0) return false;
  return bounded_dl_distance(a, b, static_cast<std::size_t>(limit)) <=
         static_cast<std::size_t>(limit);
}

struct Entry {
  std::size_t first;  // first input position holding this (title, doi)
  const std::u32string* title;
  const std::optional<std::string>* doi;
};

// Union pairs for one block. `members` are input positions in order.
std::vector<std::pair<std::size_t, std::size_t>> match_block(
    const std::vector<std::size_t>& members, std::span<const PublicationRecord> pubs,
    const std::vector<std::u32string>& titles, double threshold) {
  std::vector<std::pair<std::size_t, std::size_t>> unions;

  // Records with identical (title, doi) behave identically under the rule.
  std::vector<Entry> entries;
  std::map<std::pair<std::u32string, std::string>, std::size_t> entry_of;
  for (std::size_t pos : members) {
    const auto& doi = pubs[pos].doi;
    if (titles[pos].empty() && !doi) {
      entries.push_back({pos, &titles[pos], &doi});  // never matches by title
      continue;
    }
    std::string doi_key = doi ? "+" + *doi : std::string("-");
    auto [it, inserted] = entry_of.try_emplace({titles[pos], std::move(doi_key)}, entries.size());
    if (inserted) {
      entries.push_back({pos, &titles[pos], &doi});
    } else {
      unions.emplace_back(entries[it->second].first, pos);
    }
  }

  // Equal DOIs match regardless of title distance.
  std::map<std::string_view, std::size_t> by_doi;
  for (const auto& e : entries) {
    if (!*e.doi) continue;
    auto [it, inserted] = by_doi.try_emplace(**e.doi, e.first);
    if (!inserted) unions.emplace_back(it->second, e.first);
  }

  // Remaining pairs need the distance rule; candidates are scanned in
  // length order so the length-difference bound prunes the inner loop.
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return entries[x].title->size() < entries[y].title->size();
  });
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const Entry& a = entries[order[oi]];
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const Entry& b = entries[order[oj]];
      const std::size_t longer = b.title->size();
      const long long limit = max_duplicate_distance(threshold, longer);
      if (limit < 0) continue;  // only reachable for empty titles
      if (static_cast<long long>(longer - a.title->size()) > limit) {
        if (threshold < 1.0) break;
        continue;
      }
      if (doi_rule(*a.doi, *b.doi) != DoiRule::Undecided) continue;
      if (bounded_dl_distance(*a.title, *b.title, static_cast<std::size_t>(limit)) <=
          static_cast<std::size_t>(limit)) {
        unions.emplace_back(a.first, b.first);
      }
    }
  }
  return unions;
}

}  // namespace

bool is_duplicate(const PublicationRecord& a, const PublicationRecord& b, double threshold) {
  const auto ta = utf8_decode(a.title);
  const auto tb = utf8_decode(b.title);
  if (block_key(ta, a.year, a.author_count) != block_key(tb, b.year, b.author_count)) return false;
  switch (doi_rule(a.doi, b.doi)) {
    case DoiRule::Match: return true;
    case DoiRule::NoMatch: return false;
    case DoiRule::Undecided: break;
  }
  return titles_match(ta, tb, threshold);
}

std::vector<std::size_t> cluster_labels(std::span<const PublicationRecord> pubs,
                                        const DedupOptions& options) {
  if (!(options.threshold > 0.0) || !(options.threshold < 1.0)) {
    throw std::invalid_argument("dedup threshold must lie in (0, 1)");
  }
  const std::size_t n = pubs.size();
  std::vector<std::u32string> titles(n);
  parallel_for(n, options.threads,
               [&](std::size_t i) { titles[i] = normalize_title(utf8_decode(pubs[i].title)); });

  std::map<BlockKey, std::vector<std::size_t>> block_map;
  for (std::size_t i = 0; i < n; ++i) {
    block_map[block_key(titles[i], pubs[i].year, pubs[i].author_count)].push_back(i);
  }
  std::vector<const std::vector<std::size_t>*> blocks;
  blocks.reserve(block_map.size());
  for (const auto& [key, members] : block_map) blocks.push_back(&members);

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> unions(blocks.size());
  parallel_for(blocks.size(), options.threads, [&](std::size_t b) {
    unions[b] = match_block(*blocks[b], pubs, titles, options.threshold);
  });

  DisjointSet sets(n);
  for (const auto& block_unions : unions) {
    for (auto [x, y] : block_unions) {
      sets.unite(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
    }
  }

  std::vector<std::size_t> labels(n);
  std::unordered_map<std::uint32_t, std::size_t> label_of_root;
  for (std::size_t i = 0; i < n; ++i) {
    auto root = sets.find(static_cast<std::uint32_t>(i));
    auto [it, inserted] = label_of_root.try_emplace(root, label_of_root.size());
    labels[i] = it->second;
  }
  return labels;
}

std::vector<PaperCluster> cluster_duplicates(const std::vector<ScientistRecord>& records,
                                             const DedupOptions& options) {
  std::vector<PublicationRecord> flat;
  std::vector<ClusterMember> owner;
  for (std::size_t s = 0; s < records.size(); ++s) {
    for (std::size_t p = 0; p < records[s].publications.size(); ++p) {
      flat.push_back(records[s].publications[p]);
      owner.push_back({s, p});
    }
  }
  const auto labels = cluster_labels(flat, options);
  std::size_t count = 0;
  for (auto l : labels) count = std::max(count, l + 1);
  std::vector<PaperCluster> clusters(count);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    auto& c = clusters[labels[i]];
    if (c.members.empty()) {
      c.cluster_id = labels[i];
      c.year = flat[i].year;
      c.author_count = flat[i].author_count;
    }
    c.members.push_back(owner[i]);
  }
  return clusters;
}

ClusterScores score_clustering(std::span<const std::size_t> predicted,
                               std::span<const std::size_t> truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("clusterings must label the same items");
  }
  auto pairs = [](std::uint64_t c) { return c * (c - 1) / 2; };
  std::map<std::size_t, std::uint64_t> pred_sizes, true_sizes;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> joint;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    ++pred_sizes[predicted[i]];
    ++true_sizes[truth[i]];
    ++joint[{predicted[i], truth[i]}];
  }
  ClusterScores s;
  for (const auto& [k, c] : pred_sizes) s.predicted_pairs += pairs(c);
  for (const auto& [k, c] : true_sizes) s.true_pairs += pairs(c);
  for (const auto& [k, c] : joint) s.matched_pairs += pairs(c);
  s.precision = s.predicted_pairs ? static_cast<double>(s.matched_pairs) / s.predicted_pairs : 1.0;
  s.recall = s.true_pairs ? static_cast<double>(s.matched_pairs) / s.true_pairs : 1.0;
  return s;
}

}  // namespace collabnet
