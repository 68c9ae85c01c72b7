#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "xrank/adversarial.hpp"
#include "xrank/ranker.hpp"
#include "xrank/rules.hpp"
#include "xrank/xmetrics.hpp"

/// Machine-readable report formats (JSON, JSONL, CSV).
namespace xrank::reports {

void write_rank_summary(std::ostream& out, const ranker::RankSummary& summary);
/// `query_id,gt_rank,top1_id` with a header row.
void write_rank_csv(std::ostream& out, std::span<const ranker::RankResult> results);

void write_explanations(std::ostream& out, std::span<const xmetrics::FailureExplanation> explanations);
std::vector<xmetrics::FailureExplanation> read_explanations(std::istream& in);

/// Column names: ca, ncs, ce, ce_mode, sd, sd_optimistic, obj_hit, obj_miss, matched_synset_pct,
/// avg_enum_disagreement_pct. `sd` is the binary-average variant, recorded under "sd_variant".
void write_global_report(std::ostream& out, const xmetrics::GlobalReport& report);

void write_perturbed(std::ostream& out, std::span<const adversarial::PerturbedQuery> queries);
std::vector<adversarial::PerturbedQuery> read_perturbed(std::istream& in);

void write_rerank_delta(std::ostream& out, const adversarial::RerankDelta& delta, std::string_view kind);

void write_rules(std::ostream& out, const rules::LabelDistribution& distribution,
                 std::span<const rules::Rule> mined, double min_support_pct);

}  // namespace xrank::reports
