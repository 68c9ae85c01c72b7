#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "xrank/adversarial.hpp"
#include "xrank/error.hpp"
#include "xrank/ingest.hpp"
#include "xrank/matching.hpp"
#include "xrank/ranker.hpp"
#include "xrank/reports.hpp"
#include "xrank/rules.hpp"
#include "xrank/toy_embedder.hpp"
#include "xrank/wordnet.hpp"
#include "xrank/xmetrics.hpp"

namespace py = pybind11;
using namespace xrank;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

EmbeddingMatrix to_matrix(std::vector<std::string> ids, const Array& values) {
  if (values.ndim() != 2) throw Error(ErrorKind::InvalidArgument, "embeddings must be a 2-D array");
  if (static_cast<std::size_t>(values.shape(0)) != ids.size()) {
    throw Error(ErrorKind::CountMismatch, "row count differs from id count");
  }
  const auto dim = static_cast<std::size_t>(values.shape(1));
  std::vector<double> flat(values.data(), values.data() + values.size());
  return EmbeddingMatrix(std::move(ids), dim, std::move(flat));
}

Array to_array(const EmbeddingMatrix& m) {
  Array out({m.rows(), m.dim()});
  auto* dst = out.mutable_data();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    std::copy(row.begin(), row.end(), dst + i * m.dim());
  }
  return out;
}

py::dict explanation_dict(const xmetrics::FailureExplanation& e) {
  py::list pairs;
  for (const auto& p : e.ncs_pairs) pairs.append(py::make_tuple(p.gt.str(), p.rt.str(), p.path_similarity));
  py::dict d;
  d["query_id"] = e.failure.query_id;
  d["gt_image_id"] = e.failure.gt_image_id;
  d["rt_image_id"] = e.failure.retrieved_image_id;
  d["ca"] = e.ca;
  d["ncs"] = e.ncs;
  d["ncs_pairs"] = pairs;
  d["ce"] = e.ce;
  d["sd_binary_count"] = e.sd_binary_count;
  d["sd_match_count"] = e.sd_match_count;
  d["sd_avg"] = e.sd_avg;
  d["sd_optimistic"] = e.sd_optimistic;
  return d;
}

std::vector<QueryRecord> to_queries(const std::vector<std::tuple<std::string, std::string, std::string>>& rows) {
  std::vector<QueryRecord> out;
  out.reserve(rows.size());
  for (const auto& [id, image, text] : rows) out.push_back({id, image, text});
  return out;
}

adversarial::PerturbationSpec make_spec(const std::string& kind, std::uint64_t seed, double threshold,
                                        std::set<std::string> dataset_colors) {
  adversarial::PerturbationSpec spec;
  spec.kind = adversarial::parse_kind(kind);
  spec.rng_seed = seed;
  spec.color_distance_threshold = threshold;
  spec.dataset_colors = std::move(dataset_colors);
  return spec;
}

py::tuple matching_result(const matching::Matching& m) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs(m.pairs.begin(), m.pairs.end());
  return py::make_tuple(pairs, m.total_weight);
}

}  // namespace

PYBIND11_MODULE(_xrank, m) {
  m.doc() = "Bindings for the xrank retrieval-failure toolkit";

  // Messages carry the error kind as a prefix, e.g. "UnknownSynset: ...".
  py::register_exception<Error>(m, "XrankError", PyExc_ValueError);

  py::class_<wordnet::SynsetGraph>(m, "SynsetGraph")
      .def_static("load", [](const std::filesystem::path& p) { return ingest::read_synset_graph(p); }, py::arg("path"))
      .def("__contains__", [](const wordnet::SynsetGraph& g, const std::string& s) { return g.contains(SynsetId(s)); })
      .def("__len__", &wordnet::SynsetGraph::node_count)
      .def_property_readonly("edge_count", &wordnet::SynsetGraph::edge_count)
      .def("distance", [](const wordnet::SynsetGraph& g, const std::string& a, const std::string& b) {
        return g.distance(SynsetId(a), SynsetId(b));
      })
      .def("path_similarity", [](const wordnet::SynsetGraph& g, const std::string& a, const std::string& b) {
        return g.path_similarity(SynsetId(a), SynsetId(b));
      });

  py::class_<AnnotationIndex>(m, "Annotations")
      .def_static("load", [](const std::filesystem::path& p) { return AnnotationIndex(ingest::read_annotations(p)); },
                  py::arg("path"))
      .def("__contains__", &AnnotationIndex::contains)
      .def("__len__", [](const AnnotationIndex& a) { return a.all().size(); })
      .def("image_ids", [](const AnnotationIndex& a) {
        std::vector<std::string> ids;
        for (const auto& img : a.all()) ids.push_back(img.image_id());
        return ids;
      })
      .def("concepts", [](const AnnotationIndex& a, const std::string& id) {
        std::map<std::string, int> out;
        for (const auto& [s, n] : a.at(id).multiset()) out[s.str()] = n;
        return out;
      });

  py::class_<ColorTable>(m, "ColorTable")
      .def_static("load", [](const std::filesystem::path& p) { return ingest::read_colors(p); }, py::arg("path"))
      .def("__len__", &ColorTable::size)
      .def("rgb", [](const ColorTable& t, const std::string& name) -> std::optional<std::tuple<int, int, int>> {
        const auto* c = t.find(name);
        if (!c) return std::nullopt;
        return std::make_tuple(c->r, c->g, c->b);
      });

  py::class_<ToyEmbedder>(m, "ToyEmbedder")
      .def(py::init<std::size_t, std::uint64_t>(), py::arg("dim") = 256, py::arg("seed") = 0)
      .def_property_readonly("dim", &ToyEmbedder::dim)
      .def("embed", [](const ToyEmbedder& e, const std::vector<std::string>& sentences) {
        const auto v = e.embed(sentences);
        return Array(static_cast<py::ssize_t>(v.size()), v.data());
      });

  m.def("read_embeddings", [](const std::filesystem::path& p) {
    const auto mat = ingest::read_embeddings(p);
    return py::make_tuple(mat.ids(), to_array(mat));
  }, py::arg("path"), "Returns (ids, float64 array of shape (n, dim)).");
  m.def("write_embeddings", [](const std::filesystem::path& p, std::vector<std::string> ids, const Array& values) {
    ingest::write_embeddings(to_matrix(std::move(ids), values), p);
  }, py::arg("path"), py::arg("ids"), py::arg("values"));

  m.def("max_weight_matching", [](const std::vector<std::vector<double>>& w) {
    return matching_result(matching::max_weight_full_matching(matching::WeightedBipartiteGraph::from_rows(w)));
  }, py::arg("weights"), "Maximum-weight full matching: ([(row, col), ...], total).");
  m.def("min_weight_matching", [](const std::vector<std::vector<double>>& w) {
    return matching_result(matching::min_weight_full_matching(matching::WeightedBipartiteGraph::from_rows(w)));
  }, py::arg("weights"));

  m.def("rank", [](std::vector<std::string> query_ids, const Array& queries, std::vector<std::string> corpus_ids,
                   const Array& corpora, const std::map<std::string, std::string>& ground_truth,
                   std::vector<std::size_t> ks, std::size_t jobs) {
    const auto q = to_matrix(std::move(query_ids), queries);
    const auto c = to_matrix(std::move(corpus_ids), corpora);
    ranker::RankOptions opts;
    opts.jobs = jobs;
    opts.keep_candidates = false;
    std::vector<ranker::RankResult> results;
    {
      py::gil_scoped_release release;
      results = ranker::rank_all(q, c, ground_truth, opts);
    }
    const auto s = ranker::summarize(results, std::move(ks));
    std::map<std::string, std::size_t> ranks;
    for (const auto& r : results) ranks[r.query_id] = r.gt_rank;
    py::dict d;
    d["num_queries"] = s.num_queries;
    d["recall_at"] = s.recall_at;
    d["mrr_at"] = s.mrr_at;
    d["median_rank"] = s.median_rank;
    d["fail_fraction"] = s.fail_fraction;
    d["ranks"] = ranks;
    std::vector<std::tuple<std::string, std::string, std::string>> failures;
    for (const auto& f : s.failures) failures.emplace_back(f.query_id, f.gt_image_id, f.retrieved_image_id);
    d["failures"] = failures;
    return d;
  }, py::arg("query_ids"), py::arg("queries"), py::arg("corpus_ids"), py::arg("corpora"), py::arg("ground_truth"),
     py::arg("ks") = std::vector<std::size_t>{}, py::arg("jobs") = 0);

  m.def("explain", [](const std::string& query_id, const std::string& gt_image_id, const std::string& rt_image_id,
                      const AnnotationIndex& annotations, const wordnet::SynsetGraph& graph, double threshold) {
    return explanation_dict(xmetrics::explain_failure(
        FailureRecord::make(query_id, gt_image_id, rt_image_id, 2), annotations, graph, threshold));
  }, py::arg("query_id"), py::arg("gt_image_id"), py::arg("rt_image_id"), py::arg("annotations"), py::arg("graph"),
     py::arg("threshold") = 1.0);

  m.def("perturb", [](const std::vector<std::tuple<std::string, std::string, std::string>>& rows,
                      const std::string& kind, std::uint64_t seed, const wordnet::SynsetGraph& graph,
                      const ColorTable& colors, double threshold, std::set<std::string> dataset_colors) {
    const auto queries = to_queries(rows);
    const auto spec = make_spec(kind, seed, threshold, std::move(dataset_colors));
    py::list out;
    for (const auto& p : adversarial::perturb_all(queries, spec, graph, colors)) {
      py::list subs;
      for (const auto& s : p.substitutions) subs.append(py::make_tuple(s.position, s.old_token, s.new_token));
      py::dict d;
      d["query_id"] = p.query_id;
      d["original"] = p.original_text;
      d["perturbed"] = p.perturbed_text;
      d["substitutions"] = subs;
      out.append(d);
    }
    return out;
  }, py::arg("queries"), py::arg("kind"), py::arg("seed"), py::arg("graph"), py::arg("colors"),
     py::arg("color_threshold") = adversarial::kDefaultColorThreshold,
     py::arg("dataset_colors") = std::set<std::string>{},
     "Perturb (query_id, image_id, text) triples; inapplicable queries are left out.");

  m.def("applicability", [](const std::vector<std::tuple<std::string, std::string, std::string>>& rows,
                            const std::string& kind, const wordnet::SynsetGraph& graph, const ColorTable& colors,
                            double threshold, std::set<std::string> dataset_colors) {
    return adversarial::applicability_stats(to_queries(rows), make_spec(kind, 0, threshold, std::move(dataset_colors)),
                                            graph, colors);
  }, py::arg("queries"), py::arg("kind"), py::arg("graph"), py::arg("colors"),
     py::arg("color_threshold") = adversarial::kDefaultColorThreshold,
     py::arg("dataset_colors") = std::set<std::string>{});

  m.def("mine_rules", [](const std::filesystem::path& labels, double min_support_pct) {
    const auto records = rules::read_labels(labels);
    std::vector<std::tuple<std::string, std::string, double, std::size_t>> out;
    for (const auto& r : rules::mine_rules(records, min_support_pct)) {
      out.emplace_back(std::string(rules::to_string(r.antecedent)), std::string(rules::to_string(r.consequent)), r.pct,
                       r.support);
    }
    return out;
  }, py::arg("labels"), py::arg("min_support_pct") = 10.0);
}
