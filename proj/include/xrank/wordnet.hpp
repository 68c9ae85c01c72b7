#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xrank/types.hpp"

namespace xrank::wordnet {

/// Noun taxonomy (hypernym edges, traversed undirected) plus an adjective antonym table.
///
/// Built incrementally, then queried. Queries are safe to issue from several
/// threads once building is done; the distance cache is internally locked.
class SynsetGraph {
 public:
  explicit SynsetGraph(std::size_t cache_capacity = 1 << 16);
  SynsetGraph(SynsetGraph&&) noexcept;
  SynsetGraph& operator=(SynsetGraph&&) noexcept;
  ~SynsetGraph();

  /// Returns false if the node already existed.
  bool add_node(const SynsetId& synset);
  /// Both endpoints must already be nodes (Error(UnknownSynset) otherwise). Self-loops are rejected.
  void add_hypernym(const SynsetId& child, const SynsetId& parent);
  /// Stores the pair in both directions.
  void add_antonym(std::string_view lemma, std::string_view antonym);

  bool contains(const SynsetId& synset) const;
  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// BFS edge count between `a` and `b`; nullopt when they lie in different components.
  /// Throws Error(UnknownSynset) if either id is absent.
  std::optional<std::size_t> distance(const SynsetId& a, const SynsetId& b) const;
  /// 1 / (1 + distance); nullopt when unreachable.
  std::optional<double> path_similarity(const SynsetId& a, const SynsetId& b) const;

  /// Possibly-empty set of antonyms; lookup is case-insensitive.
  const std::set<std::string>& antonyms_of(std::string_view lemma) const;
  const std::map<std::string, std::set<std::string>>& antonym_table() const noexcept { return antonyms_; }

  /// Nodes in insertion order and hypernym edges as (child, parent) in insertion order.
  const std::vector<SynsetId>& nodes() const noexcept { return names_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& hypernym_edges() const noexcept { return edges_; }

 private:
  std::size_t index_of(const SynsetId& synset) const;
  std::optional<std::size_t> bfs(std::size_t from, std::size_t to) const;

  std::vector<SynsetId> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::map<std::string, std::set<std::string>> antonyms_;

  // Bounded LRU of BFS distances keyed by the unordered node pair.
  struct Cache;
  std::unique_ptr<Cache> cache_;
};

}  // namespace xrank::wordnet
