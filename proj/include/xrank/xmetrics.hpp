#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "xrank/types.hpp"
#include "xrank/wordnet.hpp"

namespace xrank::xmetrics {

/// Fraction of ground-truth synsets also present in the retrieved image.
/// Throws Error(EmptyGroundTruthConcepts) when the ground truth has no concepts.
double concept_agreement(const ImageAnnotation& gt, const ImageAnnotation& rt);

struct SynsetPair {
  SynsetId gt;
  SynsetId rt;
  double path_similarity;

  friend bool operator==(const SynsetPair&, const SynsetPair&) = default;
};

struct NonCommonSimilarity {
  /// Undefined when either side has no exclusive concepts.
  std::optional<double> ncs;
  std::vector<SynsetPair> pairs;
};

/// Mean path similarity of the maximum-weight full matching between synsets exclusive to each
/// image. Unreachable pairs weigh 0. Throws Error(UnknownSynset) for synsets missing from `graph`.
NonCommonSimilarity non_common_similarity(const ImageAnnotation& gt, const ImageAnnotation& rt,
                                          const wordnet::SynsetGraph& graph);

/// Sum of multiplicity differences over categories present in both images.
std::size_t concept_enumeration(const ImageAnnotation& gt, const ImageAnnotation& rt);

/// Relative area difference |a_g - a_r| / min(a_g, a_r), areas taken as fractions of their image.
double relative_area_difference(const BoundingBox& gt_box, double gt_image_area, const BoundingBox& rt_box,
                                double rt_image_area);

struct SizeDisagreement {
  std::size_t binary_count = 0;  // matched pairs with difference >= threshold
  std::size_t match_count = 0;   // matched pairs over all common categories
  std::optional<double> average;  // binary_count / match_count
  double optimistic = 0;          // sum over categories of mean matched difference
};

/// Minimum-weight matching of same-category instances by relative area difference.
/// Throws Error(InvalidArgument) unless threshold > 0.
SizeDisagreement size_disagreement(const ImageAnnotation& gt, const ImageAnnotation& rt, double threshold);

struct FailureExplanation {
  FailureRecord failure;
  double ca = 0;
  std::optional<double> ncs;
  std::vector<SynsetPair> ncs_pairs;
  std::size_t ce = 0;
  std::size_t sd_binary_count = 0;
  std::size_t sd_match_count = 0;
  std::optional<double> sd_avg;
  double sd_optimistic = 0;
};

FailureExplanation explain_failure(const FailureRecord& failure, const AnnotationIndex& annotations,
                                   const wordnet::SynsetGraph& graph, double threshold);

/// explain_failure over every record, in input order, on `jobs` workers (0 = all cores).
std::vector<FailureExplanation> explain_all(std::span<const FailureRecord> failures,
                                            const AnnotationIndex& annotations,
                                            const wordnet::SynsetGraph& graph, double threshold,
                                            std::size_t jobs = 0);

struct GlobalReport {
  std::size_t num_failures = 0;
  double avg_ca = 0;
  std::optional<double> avg_ncs;
  std::size_t ce_mode = 0;
  double ce_avg = 0;
  std::optional<double> avg_sd;
  double avg_sd_optimistic = 0;
  std::size_t obj_hit = 0;
  std::size_t obj_miss = 0;
  double matched_synset_pct = 0;
  double avg_enum_disagreement_pct = 0;
};

/// Averages over the failure set; undefined NCS / SD entries are skipped. Throws Error(EmptyInput).
GlobalReport aggregate(std::span<const FailureExplanation> explanations, const AnnotationIndex& annotations);

}  // namespace xrank::xmetrics
