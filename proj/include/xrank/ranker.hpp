#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xrank/types.hpp"

namespace xrank::ranker {

/// dot(u, v) / (|u| |v|) in float64. Throws Error(DimMismatch) or Error(ZeroNorm).
double cosine_similarity(std::span<const double> u, std::span<const double> v);

struct RankResult {
  std::string query_id;
  std::string gt_id;
  /// Corpus row indices in descending similarity (ties by ascending corpus id).
  /// Empty when ranking ran with keep_candidates = false.
  std::vector<std::uint32_t> candidates;
  /// 1-based position of the ground-truth corpus.
  std::size_t gt_rank = 0;
  std::string top1_id;
};

struct RankOptions {
  std::size_t jobs = 0;  // 0 = all cores
  std::size_t block_size = 64;
  bool keep_candidates = true;
};

/// Scores every query against every corpus row. `ground_truth` maps query id to
/// corpus id; every query row must have an entry present among the corpus ids.
/// Results follow query row order regardless of `jobs`.
std::vector<RankResult> rank_all(const EmbeddingMatrix& queries, const EmbeddingMatrix& corpora,
                                 const std::map<std::string, std::string>& ground_truth,
                                 const RankOptions& options = {});

struct RankSummary {
  std::size_t num_queries = 0;
  std::map<std::size_t, double> recall_at;
  std::map<std::size_t, double> mrr_at;
  double median_rank = 0;
  double fail_fraction = 0;
  std::vector<FailureRecord> failures;
};

/// Recall@k, MRR@k (out-of-k queries contribute 0), lower median of gt ranks and the failure set.
/// Empty `ks` means {1, 5, 10, N}; ks above N are kept as given. Throws Error(EmptyInput).
RankSummary summarize(std::span<const RankResult> results, std::vector<std::size_t> ks = {});

/// Ground truth map from query records.
std::map<std::string, std::string> ground_truth_of(std::span<const QueryRecord> queries);

}  // namespace xrank::ranker
