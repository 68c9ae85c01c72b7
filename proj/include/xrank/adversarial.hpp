#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xrank/ranker.hpp"
#include "xrank/types.hpp"
#include "xrank/wordnet.hpp"

namespace xrank::adversarial {

enum class PerturbationKind { Antonym, ColorAll, ColorIn, Size };

std::string_view to_string(PerturbationKind kind);
/// Accepts `antonym`, `color-all`, `color-in`, `size`. Throws Error(InvalidArgument).
PerturbationKind parse_kind(std::string_view name);

inline constexpr double kDefaultColorThreshold = 150.0;

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::Antonym;
  std::uint64_t rng_seed = 0;
  double color_distance_threshold = kDefaultColorThreshold;
  /// Candidate pool for ColorIn.
  std::set<std::string> dataset_colors;
};

struct Substitution {
  std::size_t position;  // index of the first replaced word token
  std::string old_token;
  std::string new_token;

  friend bool operator==(const Substitution&, const Substitution&) = default;
};

struct PerturbedQuery {
  std::string query_id;
  std::string original_text;
  std::string perturbed_text;
  std::vector<Substitution> substitutions;

  friend bool operator==(const PerturbedQuery&, const PerturbedQuery&) = default;
};

inline constexpr std::string_view kLargeWords[] = {"large", "big", "enormous", "huge"};
inline constexpr std::string_view kSmallWords[] = {"small", "little", "minor", "tiny"};

/// Swaps every qualifying token of `query` for the configured semantic, or returns nullopt
/// when no token qualifies. Randomness is seeded from (spec.rng_seed, query id), so results
/// do not depend on processing order. Throws Error(NoDistantColor) when a color has no
/// candidate at the required distance, Error(InvalidArgument) for a non-positive color threshold.
std::optional<PerturbedQuery> perturb(const QueryRecord& query, const PerturbationSpec& spec,
                                      const wordnet::SynsetGraph& graph, const ColorTable& colors);

std::vector<PerturbedQuery> perturb_all(std::span<const QueryRecord> queries, const PerturbationSpec& spec,
                                        const wordnet::SynsetGraph& graph, const ColorTable& colors);

/// Fraction of queries for which perturb() applies (0 for an empty list).
double applicability_stats(std::span<const QueryRecord> queries, const PerturbationSpec& spec,
                           const wordnet::SynsetGraph& graph, const ColorTable& colors);

/// Color names of `colors` mentioned anywhere in `texts` (longest match first).
std::set<std::string> colors_mentioned(std::span<const std::string> texts, const ColorTable& colors);

struct RerankDelta {
  std::size_t n_perturbed = 0;
  double lower_pct = 0;   // ground truth moved down (rank number increased)
  double higher_pct = 0;  // moved up
  double same_pct = 0;
};

/// Classifies rank movement of the ground truth for every id in `changed_ids`.
/// Throws Error(MissingQuery) when an id is absent from either ranking.
RerankDelta rerank_delta(std::span<const ranker::RankResult> original,
                         std::span<const ranker::RankResult> adversarial,
                         const std::set<std::string>& changed_ids);

/// Ids of `adversarial` rows whose direction differs from the original row (cosine < 1).
/// Throws Error(MissingQuery) for ids not present in `original`.
std::set<std::string> changed_query_ids(const EmbeddingMatrix& original, const EmbeddingMatrix& adversarial);

/// `original` with every row that also appears in `adversarial` replaced.
EmbeddingMatrix overlay_embeddings(const EmbeddingMatrix& original, const EmbeddingMatrix& adversarial);

}  // namespace xrank::adversarial
