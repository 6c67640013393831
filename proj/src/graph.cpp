#include "collabnet/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "collabnet/disjoint_set.hpp"
#include "collabnet/error.hpp"

namespace collabnet {

BipartiteNetwork::BipartiteNetwork(std::vector<ScientistNode> scientists, std::size_t paper_count)
    : scientists_(std::move(scientists)),
      scientist_papers_(scientists_.size()),
      paper_authors_(paper_count) {}

void BipartiteNetwork::link(std::size_t scientist, std::size_t paper) {
  auto insert_sorted = [](std::vector<std::uint32_t>& v, std::uint32_t x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) return false;
    v.insert(it, x);
    return true;
  };
  if (insert_sorted(scientist_papers_.at(scientist), static_cast<std::uint32_t>(paper))) {
    insert_sorted(paper_authors_.at(paper), static_cast<std::uint32_t>(scientist));
  }
}

std::size_t BipartiteNetwork::edge_count() const {
  std::size_t total = 0;
  for (const auto& p : scientist_papers_) total += p.size();
  return total;
}

BipartiteNetwork build_bipartite(const std::vector<ScientistRecord>& records,
                                 const std::vector<PaperCluster>& clusters) {
  std::vector<ScientistNode> nodes;
  nodes.reserve(records.size());
  for (const auto& r : records) nodes.push_back({r.scientist_id, r.gender, primary_field(r)});
  BipartiteNetwork bn(std::move(nodes), clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (const auto& m : clusters[c].members) {
      if (m.scientist >= records.size() ||
          m.publication >= records[m.scientist].publications.size()) {
        throw DataError("cluster " + std::to_string(clusters[c].cluster_id) +
                        " references an unknown scientist record");
      }
      bn.link(m.scientist, c);
    }
  }
  return bn;
}

CollaborationNetwork::CollaborationNetwork(std::vector<ScientistNode> nodes,
                                           std::vector<std::uint32_t> paper_counts,
                                           std::span<const WeightedEdge> edges)
    : nodes_(std::move(nodes)), paper_counts_(std::move(paper_counts)), adjacency_(nodes_.size()) {
  if (paper_counts_.size() != nodes_.size()) {
    throw std::invalid_argument("paper_counts must have one entry per node");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].id, i).second) {
      throw DataError("duplicate scientist id \"" + nodes_[i].id + "\"");
    }
  }
  for (const auto& e : edges) {
    if (e.a >= nodes_.size() || e.b >= nodes_.size()) throw DataError("edge endpoint out of range");
    if (e.a == e.b) throw DataError("self-loop on \"" + nodes_[e.a].id + "\"");
    if (e.weight == 0) throw DataError("edge with zero weight");
    adjacency_[e.a].push_back({e.b, e.weight});
    adjacency_[e.b].push_back({e.a, e.weight});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
    for (std::size_t k = 1; k < adj.size(); ++k) {
      if (adj[k].node == adj[k - 1].node) throw DataError("duplicate edge in collaboration network");
    }
  }
  edge_count_ = edges.size();
}

std::size_t CollaborationNetwork::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw DataError("unknown scientist id \"" + std::string(id) + "\"");
  return it->second;
}

std::uint64_t CollaborationNetwork::strength(std::size_t i) const {
  std::uint64_t s = 0;
  for (const auto& nb : adjacency_[i]) s += nb.weight;
  return s;
}

std::vector<WeightedEdge> CollaborationNetwork::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < adjacency_.size(); ++i) {
    for (const auto& nb : adjacency_[i]) {
      if (nodes_[i].id < nodes_[nb.node].id) {
        out.push_back({static_cast<std::uint32_t>(i), nb.node, nb.weight});
      }
    }
  }
  std::sort(out.begin(), out.end(), [&](const WeightedEdge& x, const WeightedEdge& y) {
    const auto& xa = nodes_[x.a].id;
    const auto& ya = nodes_[y.a].id;
    if (xa != ya) return xa < ya;
    return nodes_[x.b].id < nodes_[y.b].id;
  });
  return out;
}

CollaborationNetwork project_tcn(const BipartiteNetwork& bn) {
  const std::size_t n = bn.scientist_count();
  std::vector<WeightedEdge> edges;
  // Sparse accumulator over co-authors of scientist i, keeping j > i only.
  std::vector<std::uint32_t> shared(n, 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t i = 0; i < n; ++i) {
    touched.clear();
    for (auto paper : bn.papers_of(i)) {
      for (auto j : bn.authors_of(paper)) {
        if (j <= i) continue;
        if (shared[j]++ == 0) touched.push_back(j);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto j : touched) {
      edges.push_back({static_cast<std::uint32_t>(i), j, shared[j]});
      shared[j] = 0;
    }
  }
  std::vector<std::uint32_t> paper_counts(n);
  for (std::size_t i = 0; i < n; ++i) paper_counts[i] = static_cast<std::uint32_t>(bn.papers_of(i).size());
  return CollaborationNetwork(bn.scientists(), std::move(paper_counts), edges);
}

GiantComponent giant_component(const CollaborationNetwork& tcn) {
  const std::size_t n = tcn.node_count();
  GiantComponent result;
  if (n == 0) return result;
  DisjointSet sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : tcn.neighbors(i)) sets.unite(static_cast<std::uint32_t>(i), nb.node);
  }
  std::vector<std::size_t> size(n, 0);
  std::vector<std::size_t> min_id_node(n, n);  // per root: node with the smallest id
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = sets.find(static_cast<std::uint32_t>(i));
    ++size[r];
    if (min_id_node[r] == n || tcn.node(i).id < tcn.node(min_id_node[r]).id) min_id_node[r] = i;
  }
  std::size_t best = n;
  for (std::size_t r = 0; r < n; ++r) {
    if (size[r] == 0) continue;
    if (best == n || size[r] > size[best] ||
        (size[r] == size[best] && tcn.node(min_id_node[r]).id < tcn.node(min_id_node[best]).id)) {
      best = r;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (sets.find(static_cast<std::uint32_t>(i)) == best) result.nodes.push_back(i);
  }
  result.fraction = static_cast<double>(result.nodes.size()) / static_cast<double>(n);
  return result;
}

}  // namespace collabnet
