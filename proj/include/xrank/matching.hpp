#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace xrank::matching {

/// Complete bipartite graph given by a dense left x right weight matrix.
class WeightedBipartiteGraph {
 public:
  /// Throws Error(InvalidArgument) for empty sides, a payload of the wrong size or non-finite weights.
  WeightedBipartiteGraph(std::size_t left_size, std::size_t right_size, std::vector<double> weights);
  static WeightedBipartiteGraph from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t left_size() const noexcept { return left_; }
  std::size_t right_size() const noexcept { return right_; }
  double weight(std::size_t l, std::size_t r) const noexcept { return weights_[l * right_ + r]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::size_t left_;
  std::size_t right_;
  std::vector<double> weights_;
};

struct Matching {
  /// (left, right) pairs sorted by left index.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double total_weight = 0;
};

/// Full matching (cardinality min(L, R)) of maximum total weight. Among optima the
/// lexicographically smallest pair list is returned.
Matching max_weight_full_matching(const WeightedBipartiteGraph& g);

/// Full matching of minimum total weight, same tie-break.
Matching min_weight_full_matching(const WeightedBipartiteGraph& g);

}  // namespace xrank::matching
