#include "xrank/xmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>

#include "xrank/error.hpp"
#include "xrank/matching.hpp"
#include "xrank/parallel.hpp"

namespace xrank::xmetrics {

namespace {

std::vector<SynsetId> set_difference(const std::set<SynsetId>& a, const std::set<SynsetId>& b) {
  std::vector<SynsetId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t common_count(const std::set<SynsetId>& a, const std::set<SynsetId>& b) {
  std::size_t n = 0;
  for (const auto& s : a) n += b.contains(s) ? 1 : 0;
  return n;
}

}  // namespace

double concept_agreement(const ImageAnnotation& gt, const ImageAnnotation& rt) {
  const auto& g = gt.concept_set();
  if (g.empty()) throw Error(ErrorKind::EmptyGroundTruthConcepts, "image '" + gt.image_id() + "'");
  return static_cast<double>(common_count(g, rt.concept_set())) / static_cast<double>(g.size());
}

NonCommonSimilarity non_common_similarity(const ImageAnnotation& gt, const ImageAnnotation& rt,
                                          const wordnet::SynsetGraph& graph) {
  const auto only_gt = set_difference(gt.concept_set(), rt.concept_set());
  const auto only_rt = set_difference(rt.concept_set(), gt.concept_set());
  NonCommonSimilarity out;
  if (only_gt.empty() || only_rt.empty()) return out;

  std::vector<double> weights;
  weights.reserve(only_gt.size() * only_rt.size());
  for (const auto& g : only_gt) {
    for (const auto& r : only_rt) weights.push_back(graph.path_similarity(g, r).value_or(0.0));
  }
  const matching::WeightedBipartiteGraph bipartite(only_gt.size(), only_rt.size(), std::move(weights));
  const auto m = matching::max_weight_full_matching(bipartite);
  for (const auto& [l, r] : m.pairs) out.pairs.push_back(SynsetPair{only_gt[l], only_rt[r], bipartite.weight(l, r)});
  out.ncs = m.total_weight / static_cast<double>(m.pairs.size());
  return out;
}

std::size_t concept_enumeration(const ImageAnnotation& gt, const ImageAnnotation& rt) {
  std::size_t ce = 0;
  const auto& rm = rt.multiset();
  for (const auto& [synset, g_count] : gt.multiset()) {
    const auto it = rm.find(synset);
    if (it == rm.end()) continue;
    ce += static_cast<std::size_t>(std::abs(g_count - it->second));
  }
  return ce;
}

double relative_area_difference(const BoundingBox& gt_box, double gt_image_area, const BoundingBox& rt_box,
                                double rt_image_area) {
  const double ag = gt_box.area() / gt_image_area;
  const double ar = rt_box.area() / rt_image_area;
  return std::abs(ag - ar) / std::min(ag, ar);
}

SizeDisagreement size_disagreement(const ImageAnnotation& gt, const ImageAnnotation& rt, double threshold) {
  if (!(threshold > 0) || !std::isfinite(threshold)) {
    throw Error(ErrorKind::InvalidArgument, "size threshold must be positive");
  }
  SizeDisagreement sd;
  const auto& rm = rt.multiset();
  for (const auto& [synset, count] : gt.multiset()) {
    if (!rm.contains(synset)) continue;
    const auto g_inst = gt.instances_of(synset);
    const auto r_inst = rt.instances_of(synset);
    std::vector<double> weights;
    weights.reserve(g_inst.size() * r_inst.size());
    for (const auto* g : g_inst) {
      for (const auto* r : r_inst) {
        weights.push_back(relative_area_difference(g->box, gt.image_area(), r->box, rt.image_area()));
      }
    }
    const matching::WeightedBipartiteGraph bipartite(g_inst.size(), r_inst.size(), std::move(weights));
    const auto m = matching::min_weight_full_matching(bipartite);
    for (const auto& [l, r] : m.pairs) {
      if (bipartite.weight(l, r) >= threshold) ++sd.binary_count;
    }
    sd.match_count += m.pairs.size();
    sd.optimistic += m.total_weight / static_cast<double>(m.pairs.size());
  }
  if (sd.match_count > 0) {
    sd.average = static_cast<double>(sd.binary_count) / static_cast<double>(sd.match_count);
  }
  return sd;
}

FailureExplanation explain_failure(const FailureRecord& failure, const AnnotationIndex& annotations,
                                   const wordnet::SynsetGraph& graph, double threshold) {
  const ImageAnnotation& gt = annotations.at(failure.gt_image_id);
  const ImageAnnotation& rt = annotations.at(failure.retrieved_image_id);
  FailureExplanation e;
  e.failure = failure;
  e.ca = concept_agreement(gt, rt);
  auto ncs = non_common_similarity(gt, rt, graph);
  e.ncs = ncs.ncs;
  e.ncs_pairs = std::move(ncs.pairs);
  e.ce = concept_enumeration(gt, rt);
  const auto sd = size_disagreement(gt, rt, threshold);
  e.sd_binary_count = sd.binary_count;
  e.sd_match_count = sd.match_count;
  e.sd_avg = sd.average;
  e.sd_optimistic = sd.optimistic;
  return e;
}

std::vector<FailureExplanation> explain_all(std::span<const FailureRecord> failures,
                                            const AnnotationIndex& annotations,
                                            const wordnet::SynsetGraph& graph, double threshold,
                                            std::size_t jobs) {
  std::vector<FailureExplanation> out(failures.size());
  parallel_blocks(failures.size(), 16, jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = explain_failure(failures[i], annotations, graph, threshold);
  });
  return out;
}

GlobalReport aggregate(std::span<const FailureExplanation> explanations, const AnnotationIndex& annotations) {
  if (explanations.empty()) throw Error(ErrorKind::EmptyInput, "no failure explanations");
  GlobalReport g;
  g.num_failures = explanations.size();
  const double n = static_cast<double>(explanations.size());

  double ca_sum = 0, ncs_sum = 0, sd_sum = 0, sd_opt_sum = 0, ce_sum = 0, enum_pct_sum = 0;
  std::size_t ncs_n = 0, sd_n = 0;
  std::map<std::size_t, std::size_t> ce_hist;
  std::size_t common_synsets = 0, gt_synsets = 0;

  for (const auto& e : explanations) {
    ca_sum += e.ca;
    if (e.ncs) {
      ncs_sum += *e.ncs;
      ++ncs_n;
    }
    if (e.sd_avg) {
      sd_sum += *e.sd_avg;
      ++sd_n;
    }
    sd_opt_sum += e.sd_optimistic;
    ce_sum += static_cast<double>(e.ce);
    ++ce_hist[e.ce];

    const ImageAnnotation& gt = annotations.at(e.failure.gt_image_id);
    const ImageAnnotation& rt = annotations.at(e.failure.retrieved_image_id);
    std::size_t unequal = 0;
    std::size_t gt_instances = 0;
    std::size_t hit = 0;
    for (const auto& [synset, g_count] : gt.multiset()) {
      gt_instances += static_cast<std::size_t>(g_count);
      const auto it = rt.multiset().find(synset);
      if (it == rt.multiset().end()) continue;
      ++common_synsets;
      hit += static_cast<std::size_t>(std::min(g_count, it->second));
      if (g_count != it->second) ++unequal;
    }
    g.obj_hit += hit;
    g.obj_miss += gt_instances - hit;
    gt_synsets += gt.concept_set().size();
    if (!gt.concept_set().empty()) {
      enum_pct_sum += 100.0 * static_cast<double>(unequal) / static_cast<double>(gt.concept_set().size());
    }
  }

  g.avg_ca = ca_sum / n;
  if (ncs_n > 0) g.avg_ncs = ncs_sum / static_cast<double>(ncs_n);
  if (sd_n > 0) g.avg_sd = sd_sum / static_cast<double>(sd_n);
  g.avg_sd_optimistic = sd_opt_sum / n;
  g.ce_avg = ce_sum / n;
  // Most frequent CE; the smaller value wins ties.
  std::size_t best_count = 0;
  for (const auto& [value, count] : ce_hist) {
    if (count > best_count) {
      best_count = count;
      g.ce_mode = value;
    }
  }
  g.matched_synset_pct =
      gt_synsets == 0 ? 0.0 : 100.0 * static_cast<double>(common_synsets) / static_cast<double>(gt_synsets);
  g.avg_enum_disagreement_pct = enum_pct_sum / n;
  return g;
}

}  // namespace xrank::xmetrics
