#include "xrank/reports.hpp"

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "xrank/error.hpp"

namespace xrank::reports {

using json = nlohmann::ordered_json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

template <typename Fn>
void each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
}

}  // namespace

void write_rank_summary(std::ostream& out, const ranker::RankSummary& s) {
  json recall = json::object();
  json mrr = json::object();
  for (const auto& [k, v] : s.recall_at) recall[std::to_string(k)] = v;
  for (const auto& [k, v] : s.mrr_at) mrr[std::to_string(k)] = v;
  json j{{"num_queries", s.num_queries},
         {"recall_at", std::move(recall)},
         {"mrr_at", std::move(mrr)},
         {"median_rank", s.median_rank},
         {"fail_fraction", s.fail_fraction},
         {"num_failures", s.failures.size()}};
  out << j.dump(2) << '\n';
}

void write_rank_csv(std::ostream& out, std::span<const ranker::RankResult> results) {
  out << "query_id,gt_rank,top1_id\n";
  for (const auto& r : results) out << r.query_id << ',' << r.gt_rank << ',' << r.top1_id << '\n';
}

void write_explanations(std::ostream& out, std::span<const xmetrics::FailureExplanation> explanations) {
  for (const auto& e : explanations) {
    json pairs = json::array();
    for (const auto& p : e.ncs_pairs) pairs.push_back(json::array({p.gt.str(), p.rt.str(), p.path_similarity}));
    json j{{"query_id", e.failure.query_id},
           {"gt_image_id", e.failure.gt_image_id},
           {"retrieved_image_id", e.failure.retrieved_image_id},
           {"gt_rank", e.failure.gt_rank},
           {"ca", e.ca},
           {"ncs", optional_number(e.ncs)},
           {"ncs_pairs", std::move(pairs)},
           {"ce", e.ce},
           {"sd_binary_count", e.sd_binary_count},
           {"sd_match_count", e.sd_match_count},
           {"sd_avg", optional_number(e.sd_avg)},
           {"sd_optimistic", e.sd_optimistic}};
    out << j.dump() << '\n';
  }
}

std::vector<xmetrics::FailureExplanation> read_explanations(std::istream& in) {
  std::vector<xmetrics::FailureExplanation> out;
  each_line(in, [&](const json& j) {
    xmetrics::FailureExplanation e;
    e.failure = FailureRecord::make(j.at("query_id").get<std::string>(), j.at("gt_image_id").get<std::string>(),
                                    j.at("retrieved_image_id").get<std::string>(),
                                    j.at("gt_rank").get<std::size_t>());
    e.ca = j.at("ca").get<double>();
    e.ncs = read_optional(j.at("ncs"));
    for (const auto& p : j.at("ncs_pairs")) {
      e.ncs_pairs.push_back(xmetrics::SynsetPair{SynsetId(p.at(0).get<std::string>()),
                                                 SynsetId(p.at(1).get<std::string>()), p.at(2).get<double>()});
    }
    e.ce = j.at("ce").get<std::size_t>();
    e.sd_binary_count = j.at("sd_binary_count").get<std::size_t>();
    e.sd_match_count = j.at("sd_match_count").get<std::size_t>();
    e.sd_avg = read_optional(j.at("sd_avg"));
    e.sd_optimistic = j.at("sd_optimistic").get<double>();
    out.push_back(std::move(e));
  });
  return out;
}

void write_global_report(std::ostream& out, const xmetrics::GlobalReport& r) {
  json j{{"num_failures", r.num_failures},
         {"ca", r.avg_ca},
         {"ncs", optional_number(r.avg_ncs)},
         {"ce", r.ce_avg},
         {"ce_mode", r.ce_mode},
         {"sd", optional_number(r.avg_sd)},
         {"sd_optimistic", r.avg_sd_optimistic},
         {"obj_hit", r.obj_hit},
         {"obj_miss", r.obj_miss},
         {"matched_synset_pct", r.matched_synset_pct},
         {"avg_enum_disagreement_pct", r.avg_enum_disagreement_pct},
         {"metadata", json{{"sd_variant", "binary_average"}, {"ca_unit", "fraction"}, {"sd_unit", "fraction"}}}};
  out << j.dump(2) << '\n';
}

void write_perturbed(std::ostream& out, std::span<const adversarial::PerturbedQuery> queries) {
  for (const auto& q : queries) {
    json subs = json::array();
    for (const auto& s : q.substitutions) {
      subs.push_back(json{{"position", s.position}, {"old", s.old_token}, {"new", s.new_token}});
    }
    json j{{"query_id", q.query_id},
           {"original_text", q.original_text},
           {"perturbed_text", q.perturbed_text},
           {"substitutions", std::move(subs)}};
    out << j.dump() << '\n';
  }
}

std::vector<adversarial::PerturbedQuery> read_perturbed(std::istream& in) {
  std::vector<adversarial::PerturbedQuery> out;
  each_line(in, [&](const json& j) {
    adversarial::PerturbedQuery q;
    q.query_id = j.at("query_id").get<std::string>();
    q.original_text = j.at("original_text").get<std::string>();
    q.perturbed_text = j.at("perturbed_text").get<std::string>();
    for (const auto& s : j.at("substitutions")) {
      q.substitutions.push_back(adversarial::Substitution{s.at("position").get<std::size_t>(),
                                                          s.at("old").get<std::string>(),
                                                          s.at("new").get<std::string>()});
    }
    if (q.substitutions.empty()) throw Error(ErrorKind::InvalidArgument, "perturbed query without substitutions");
    out.push_back(std::move(q));
  });
  return out;
}

void write_rerank_delta(std::ostream& out, const adversarial::RerankDelta& d, std::string_view kind) {
  json j{{"kind", std::string(kind)},
         {"adv_queries", d.n_perturbed},
         {"lower_pct", d.lower_pct},
         {"higher_pct", d.higher_pct},
         {"same_pct", d.same_pct}};
  out << j.dump(2) << '\n';
}

void write_rules(std::ostream& out, const rules::LabelDistribution& distribution,
                 std::span<const rules::Rule> mined, double min_support_pct) {
  json dist = json::object();
  for (const auto& [label, pct] : distribution.pct) dist[std::string(rules::to_string(label))] = pct;
  json list = json::array();
  for (const auto& r : mined) {
    list.push_back(json{{"antecedent", std::string(rules::to_string(r.antecedent))},
                        {"consequent", std::string(rules::to_string(r.consequent))},
                        {"pct", r.pct},
                        {"support", r.support}});
  }
  json j{{"num_records", distribution.num_records},
         {"mean_rating", distribution.mean_rating},
         {"label_pct", std::move(dist)},
         {"min_support_pct", min_support_pct},
         {"rules", std::move(list)}};
  out << j.dump(2) << '\n';
}

}  // namespace xrank::reports
