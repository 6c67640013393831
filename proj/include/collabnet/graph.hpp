#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "collabnet/dedup.hpp"
#include "collabnet/records.hpp"

namespace collabnet {

struct ScientistNode {
  std::string id;
  Gender gender = Gender::Unknown;
  MajorField field = MajorField::Unknown;  // primary field
};

// Scientists (class R) linked to deduplicated papers (class P).
class BipartiteNetwork {
 public:
  BipartiteNetwork(std::vector<ScientistNode> scientists, std::size_t paper_count);

  // Idempotent: a repeated link is stored once.
  void link(std::size_t scientist, std::size_t paper);

  std::size_t scientist_count() const { return scientists_.size(); }
  std::size_t paper_count() const { return paper_authors_.size(); }
  std::size_t edge_count() const;

  const std::vector<ScientistNode>& scientists() const { return scientists_; }
  // Sorted, duplicate free.
  std::span<const std::uint32_t> papers_of(std::size_t scientist) const { return scientist_papers_[scientist]; }
  std::span<const std::uint32_t> authors_of(std::size_t paper) const { return paper_authors_[paper]; }

 private:
  std::vector<ScientistNode> scientists_;
  std::vector<std::vector<std::uint32_t>> scientist_papers_;
  std::vector<std::vector<std::uint32_t>> paper_authors_;
};

/// Links scientist i to cluster c iff one of i's publications is a member of
/// c. Scientist order follows `records`. Throws DataError when a cluster
/// member points outside the record list.
BipartiteNetwork build_bipartite(const std::vector<ScientistRecord>& records,
                                 const std::vector<PaperCluster>& clusters);

struct Neighbor {
  std::uint32_t node = 0;
  std::uint32_t weight = 0;  // shared papers, >= 1
};

struct WeightedEdge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t weight = 0;
};

// The Total Collaboration Network: undirected, integer weighted, no
// self-loops. Scientists without collaborations stay as isolated nodes.
class CollaborationNetwork {
 public:
  CollaborationNetwork() = default;
  CollaborationNetwork(std::vector<ScientistNode> nodes, std::vector<std::uint32_t> paper_counts,
                       std::span<const WeightedEdge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const ScientistNode& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<ScientistNode>& nodes() const { return nodes_; }
  // Number of deduplicated papers the scientist is attached to.
  std::uint32_t paper_count(std::size_t i) const { return paper_counts_[i]; }

  // Sorted by neighbor index.
  std::span<const Neighbor> neighbors(std::size_t i) const { return adjacency_[i]; }

  std::size_t index_of(std::string_view id) const;  // throws DataError if unknown

  std::size_t degree(std::size_t i) const { return adjacency_[i].size(); }
  std::uint64_t strength(std::size_t i) const;
  std::size_t degree(std::string_view id) const { return degree(index_of(id)); }
  std::uint64_t strength(std::string_view id) const { return strength(index_of(id)); }

  // Each edge once, ordered so that id(a) < id(b) lexicographically, the
  // list sorted by (id(a), id(b)).
  std::vector<WeightedEdge> edges() const;

 private:
  std::vector<ScientistNode> nodes_;
  std::vector<std::uint32_t> paper_counts_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t edge_count_ = 0;
};

// w_ij = number of papers shared by i and j.
CollaborationNetwork project_tcn(const BipartiteNetwork& bn);

struct GiantComponent {
  std::vector<std::size_t> nodes;  // sorted node indices
  double fraction = 0.0;           // |component| / node_count
};

// Largest connected component; ties go to the component containing the
// smallest scientist id.
GiantComponent giant_component(const CollaborationNetwork& tcn);

}  // namespace collabnet
