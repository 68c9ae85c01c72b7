// xrank: ranking, failure explanation and adversarial re-ranking from the command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xrank/adversarial.hpp"
#include "xrank/error.hpp"
#include "xrank/ingest.hpp"
#include "xrank/ranker.hpp"
#include "xrank/reports.hpp"
#include "xrank/rules.hpp"
#include "xrank/toy_embedder.hpp"
#include "xrank/types.hpp"
#include "xrank/xmetrics.hpp"

namespace fs = std::filesystem;
using namespace xrank;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDefects = 1;
constexpr int kExitIo = 2;

constexpr const char* kVersion = "1.0.0";

void print_version() {
  std::cout << "xrank " << kVersion << "\n"
            << "formats:\n"
            << "  embeddings      XRANKEMB v" << ingest::kEmbeddingVersion << " (binary, little-endian float32)\n"
            << "  annotations     jsonl v1\n"
            << "  queries         jsonl v1\n"
            << "  corpora         jsonl v1\n"
            << "  failures        jsonl v1\n"
            << "  synset-graph    tsv v1 (S/H/A records)\n"
            << "  colors          csv v1 (name,r,g,b)\n"
            << "  labels          csv v1 (query_id,labels,rating)\n"
            << "  perturbed       jsonl v1\n"
            << "  explanations    jsonl v1\n"
            << "  reports         json v1\n";
}

template <typename Fn>
void write_text(const fs::path& path, Fn&& fn) {
  auto out = ingest::open_output(path);
  fn(out);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

std::string default_wordnet() {
  const char* env = std::getenv("XRANK_WORDNET");
  return env ? env : "";
}

fs::path require_wordnet(const std::string& path) {
  if (path.empty()) {
    throw Error(ErrorKind::InvalidArgument, "no synset graph given (use --wordnet or set XRANK_WORDNET)");
  }
  return path;
}

// ---------------------------------------------------------------------------

struct IngestCheckArgs {
  std::string annotations, queries, corpora, query_emb, corpus_emb;
};

int run_ingest_check(const IngestCheckArgs& a) {
  const auto annotations = ingest::read_annotations(fs::path(a.annotations));
  const auto queries = ingest::read_queries(fs::path(a.queries));
  const auto corpora = ingest::read_corpora(fs::path(a.corpora));
  const auto q = ingest::read_embeddings(fs::path(a.query_emb));
  const auto c = ingest::read_embeddings(fs::path(a.corpus_emb));
  const auto report = validate_dataset(annotations, queries, corpora, q, c);
  std::cout << "images " << annotations.size() << ", queries " << queries.size() << ", corpora "
            << corpora.size() << ", query rows " << q.rows() << ", corpus rows " << c.rows() << "\n";
  for (const auto& d : report.defects) std::cout << to_string(d.kind) << ": " << d.detail << "\n";
  std::cout << (report.ok() ? "ok" : "defects: " + std::to_string(report.defects.size())) << "\n";
  return report.ok() ? kExitOk : kExitDefects;
}

struct EmbedToyArgs {
  std::string queries, corpora, perturbed, out;
  std::size_t dim = 256;
  std::uint64_t seed = 0;
};

int run_embed_toy(const EmbedToyArgs& a) {
  const ToyEmbedder embedder(a.dim, a.seed);
  EmbeddingMatrix m;
  if (!a.queries.empty()) {
    m = embedder.embed_queries(ingest::read_queries(fs::path(a.queries)));
  } else if (!a.corpora.empty()) {
    m = embedder.embed_corpora(ingest::read_corpora(fs::path(a.corpora)));
  } else {
    auto in = ingest::open_input(a.perturbed);
    std::vector<QueryRecord> queries;
    for (auto& p : reports::read_perturbed(in)) queries.push_back(QueryRecord{p.query_id, "", p.perturbed_text});
    m = embedder.embed_queries(queries);
  }
  ingest::write_embeddings(m, a.out);
  std::cerr << "wrote " << m.rows() << " x " << m.dim() << " embeddings to " << a.out << "\n";
  return kExitOk;
}

struct RankArgs {
  std::string queries, query_emb, corpus_emb, out, failures, ranks;
  std::vector<std::size_t> ks;
  std::size_t jobs = 0;
};

int run_rank(const RankArgs& a) {
  const auto queries = ingest::read_queries(fs::path(a.queries));
  const auto q = ingest::read_embeddings(fs::path(a.query_emb));
  const auto c = ingest::read_embeddings(fs::path(a.corpus_emb));
  ranker::RankOptions opts;
  opts.jobs = a.jobs;
  opts.keep_candidates = false;
  const auto results = ranker::rank_all(q, c, ranker::ground_truth_of(queries), opts);
  const auto summary = ranker::summarize(results, a.ks);
  write_text(a.out, [&](std::ostream& out) { reports::write_rank_summary(out, summary); });
  if (!a.failures.empty()) ingest::write_failures(fs::path(a.failures), summary.failures);
  if (!a.ranks.empty()) write_text(a.ranks, [&](std::ostream& out) { reports::write_rank_csv(out, results); });
  std::cerr << "ranked " << results.size() << " queries, " << summary.failures.size() << " failures\n";
  return kExitOk;
}

struct ExplainArgs {
  std::string failures, annotations, wordnet = default_wordnet(), out;
  double td = 1.0;
  std::size_t jobs = 0;
};

int run_explain(const ExplainArgs& a) {
  const auto failures = ingest::read_failures(fs::path(a.failures));
  const AnnotationIndex annotations(ingest::read_annotations(fs::path(a.annotations)));
  const auto graph = ingest::read_synset_graph(require_wordnet(a.wordnet));
  const auto explanations = xmetrics::explain_all(failures, annotations, graph, a.td, a.jobs);
  write_text(a.out, [&](std::ostream& out) { reports::write_explanations(out, explanations); });
  std::cerr << "explained " << explanations.size() << " failures\n";
  return kExitOk;
}

struct PerturbArgs {
  std::string queries, corpora, kind = "antonym", wordnet = default_wordnet(), colors, out, stats;
  std::uint64_t seed = 0;
  double color_threshold = adversarial::kDefaultColorThreshold;
};

int run_perturb(const PerturbArgs& a) {
  const auto queries = ingest::read_queries(fs::path(a.queries));
  adversarial::PerturbationSpec spec;
  spec.kind = adversarial::parse_kind(a.kind);
  spec.rng_seed = a.seed;
  spec.color_distance_threshold = a.color_threshold;

  wordnet::SynsetGraph graph;
  ColorTable colors;
  if (spec.kind == adversarial::PerturbationKind::Antonym) graph = ingest::read_synset_graph(require_wordnet(a.wordnet));
  if (spec.kind == adversarial::PerturbationKind::ColorAll || spec.kind == adversarial::PerturbationKind::ColorIn) {
    if (a.colors.empty()) throw Error(ErrorKind::InvalidArgument, "--colors is required for color perturbations");
    colors = ingest::read_colors(fs::path(a.colors));
  }
  if (spec.kind == adversarial::PerturbationKind::ColorIn) {
    std::vector<std::string> texts;
    for (const auto& q : queries) texts.push_back(q.text);
    if (!a.corpora.empty()) {
      for (auto& c : ingest::read_corpora(fs::path(a.corpora))) {
        texts.insert(texts.end(), c.sentences.begin(), c.sentences.end());
      }
    }
    spec.dataset_colors = adversarial::colors_mentioned(texts, colors);
  }

  const auto perturbed = adversarial::perturb_all(queries, spec, graph, colors);
  write_text(a.out, [&](std::ostream& out) { reports::write_perturbed(out, perturbed); });
  const double fraction = queries.empty() ? 0.0 : static_cast<double>(perturbed.size()) / queries.size();
  if (!a.stats.empty()) {
    write_text(a.stats, [&](std::ostream& out) {
      out << "{\n  \"kind\": \"" << a.kind << "\",\n  \"num_queries\": " << queries.size()
          << ",\n  \"num_perturbed\": " << perturbed.size() << ",\n  \"applicability\": " << fraction << "\n}\n";
    });
  }
  std::cerr << "perturbed " << perturbed.size() << " of " << queries.size() << " queries (" << a.kind << ")\n";
  return kExitOk;
}

struct RerankArgs {
  std::string queries, query_emb, adv_query_emb, corpus_emb, kind = "adversarial", out;
  std::size_t jobs = 0;
};

int run_rerank(const RerankArgs& a) {
  const auto queries = ingest::read_queries(fs::path(a.queries));
  const auto q = ingest::read_embeddings(fs::path(a.query_emb));
  const auto adv = ingest::read_embeddings(fs::path(a.adv_query_emb));
  const auto c = ingest::read_embeddings(fs::path(a.corpus_emb));
  const auto gt = ranker::ground_truth_of(queries);
  ranker::RankOptions opts;
  opts.jobs = a.jobs;
  opts.keep_candidates = false;
  const auto original = ranker::rank_all(q, c, gt, opts);
  const auto adversarial_rank = ranker::rank_all(adversarial::overlay_embeddings(q, adv), c, gt, opts);
  const auto changed = adversarial::changed_query_ids(q, adv);
  const auto delta = adversarial::rerank_delta(original, adversarial_rank, changed);
  write_text(a.out, [&](std::ostream& out) { reports::write_rerank_delta(out, delta, a.kind); });
  std::cerr << "re-ranked " << delta.n_perturbed << " changed queries\n";
  return kExitOk;
}

struct RulesArgs {
  std::string labels, out;
  double min_support = 10.0;
};

int run_rules(const RulesArgs& a) {
  const auto records = rules::read_labels(fs::path(a.labels));
  const auto dist = rules::label_distribution(records);
  const auto mined = rules::mine_rules(records, a.min_support);
  write_text(a.out, [&](std::ostream& out) { reports::write_rules(out, dist, mined, a.min_support); });
  return kExitOk;
}

struct ReportArgs {
  std::string explanations, annotations, out;
};

int run_report(const ReportArgs& a) {
  auto in = ingest::open_input(a.explanations);
  const auto explanations = reports::read_explanations(in);
  const AnnotationIndex annotations(ingest::read_annotations(fs::path(a.annotations)));
  const auto report = xmetrics::aggregate(explanations, annotations);
  write_text(a.out, [&](std::ostream& out) { reports::write_global_report(out, report); });
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Io:
    case ErrorKind::Parse:
    case ErrorKind::BadMagic:
    case ErrorKind::TruncatedFile:
    case ErrorKind::CountMismatch:
    case ErrorKind::DuplicateId:
      return kExitIo;
    default:
      return kExitDefects;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explainable evaluation of text-to-image retrieval rankings"};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "Print tool and file-format versions");

  IngestCheckArgs check;
  auto* check_cmd = app.add_subcommand("ingest-check", "Validate a dataset and its embeddings");
  check_cmd->add_option("--annotations", check.annotations)->required();
  check_cmd->add_option("--queries", check.queries)->required();
  check_cmd->add_option("--corpora", check.corpora)->required();
  check_cmd->add_option("--query-emb", check.query_emb)->required();
  check_cmd->add_option("--corpus-emb", check.corpus_emb)->required();

  EmbedToyArgs embed;
  auto* embed_cmd = app.add_subcommand("embed-toy", "Embed queries or corpora with the hashed bag-of-words model");
  auto* eq = embed_cmd->add_option("--queries", embed.queries, "Query JSONL");
  auto* ec = embed_cmd->add_option("--corpora", embed.corpora, "Corpus JSONL (rows average their sentences)");
  auto* ep = embed_cmd->add_option("--perturbed", embed.perturbed, "Perturbed query JSONL");
  eq->excludes(ec)->excludes(ep);
  ec->excludes(ep);
  embed_cmd->add_option("--dim", embed.dim)->check(CLI::PositiveNumber);
  embed_cmd->add_option("--seed", embed.seed, "Token hashing seed");
  embed_cmd->add_option("--out", embed.out)->required();

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank corpora per query and summarise Recall/MRR/median rank");
  rank_cmd->add_option("--queries", rank.queries)->required();
  rank_cmd->add_option("--query-emb", rank.query_emb)->required();
  rank_cmd->add_option("--corpus-emb", rank.corpus_emb)->required();
  rank_cmd->add_option("--out", rank.out, "RankSummary JSON")->required();
  rank_cmd->add_option("--failures", rank.failures, "Failure JSONL output");
  rank_cmd->add_option("--ranks", rank.ranks, "Per-query CSV output");
  rank_cmd->add_option("--k", rank.ks, "Cut-offs (default 1 5 10 N)")->delimiter(',');
  rank_cmd->add_option("--jobs", rank.jobs, "Worker threads (0 = all cores)");

  ExplainArgs explain;
  auto* explain_cmd = app.add_subcommand("explain", "Compute CA/NCS/CE/SD for every failure");
  explain_cmd->add_option("--failures", explain.failures)->required();
  explain_cmd->add_option("--annotations", explain.annotations)->required();
  explain_cmd->add_option("--wordnet", explain.wordnet, "Synset graph TSV (default $XRANK_WORDNET)");
  explain_cmd->add_option("--td", explain.td, "Size disagreement threshold")->check(CLI::PositiveNumber);
  explain_cmd->add_option("--out", explain.out)->required();
  explain_cmd->add_option("--jobs", explain.jobs, "Worker threads (0 = all cores)");

  PerturbArgs perturb;
  auto* perturb_cmd = app.add_subcommand("perturb", "Write adversarial queries");
  perturb_cmd->add_option("--queries", perturb.queries)->required();
  perturb_cmd->add_option("--kind", perturb.kind)
      ->check(CLI::IsMember({"antonym", "color-all", "color-in", "size"}));
  perturb_cmd->add_option("--seed", perturb.seed);
  perturb_cmd->add_option("--wordnet", perturb.wordnet, "Synset graph TSV (default $XRANK_WORDNET)");
  perturb_cmd->add_option("--colors", perturb.colors, "Color table CSV");
  perturb_cmd->add_option("--color-threshold", perturb.color_threshold)->check(CLI::PositiveNumber);
  perturb_cmd->add_option("--corpora", perturb.corpora, "Corpus JSONL, extends the color-in vocabulary");
  perturb_cmd->add_option("--out", perturb.out)->required();
  perturb_cmd->add_option("--stats", perturb.stats, "Applicability JSON output");

  RerankArgs rerank;
  auto* rerank_cmd = app.add_subcommand("rerank", "Compare ground-truth ranks before and after perturbation");
  rerank_cmd->add_option("--queries", rerank.queries)->required();
  rerank_cmd->add_option("--query-emb", rerank.query_emb)->required();
  rerank_cmd->add_option("--adv-query-emb", rerank.adv_query_emb)->required();
  rerank_cmd->add_option("--corpus-emb", rerank.corpus_emb)->required();
  rerank_cmd->add_option("--kind", rerank.kind, "Label stored in the report");
  rerank_cmd->add_option("--out", rerank.out)->required();
  rerank_cmd->add_option("--jobs", rerank.jobs, "Worker threads (0 = all cores)");

  RulesArgs rules_args;
  auto* rules_cmd = app.add_subcommand("rules", "Label distribution and co-occurrence rules of human labels");
  rules_cmd->add_option("--labels", rules_args.labels)->required();
  rules_cmd->add_option("--min-support", rules_args.min_support, "Minimum rule percentage")
      ->check(CLI::PositiveNumber & CLI::Range(0.0, 100.0));
  rules_cmd->add_option("--out", rules_args.out)->required();

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Aggregate failure explanations into global metrics");
  report_cmd->add_option("--explanations", report.explanations)->required();
  report_cmd->add_option("--annotations", report.annotations)->required();
  report_cmd->add_option("--out", report.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  if (version) {
    print_version();
    return kExitOk;
  }
  try {
    if (*check_cmd) return run_ingest_check(check);
    if (*embed_cmd) {
      if (embed.queries.empty() && embed.corpora.empty() && embed.perturbed.empty()) {
        throw Error(ErrorKind::InvalidArgument, "embed-toy needs --queries, --corpora or --perturbed");
      }
      return run_embed_toy(embed);
    }
    if (*rank_cmd) return run_rank(rank);
    if (*explain_cmd) return run_explain(explain);
    if (*perturb_cmd) return run_perturb(perturb);
    if (*rerank_cmd) return run_rerank(rerank);
    if (*rules_cmd) return run_rules(rules_args);
    if (*report_cmd) return run_report(report);
    std::cout << app.help();
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "xrank: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "xrank: " << e.what() << "\n";
    return kExitIo;
  }
}
