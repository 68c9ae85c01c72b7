#include "xrank/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xrank/error.hpp"
#include "xrank/parallel.hpp"

namespace xrank::ranker {

namespace {

double norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

}  // namespace

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::DimMismatch, std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0 || nv == 0) throw Error(ErrorKind::ZeroNorm, "cosine of a zero vector");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

std::vector<RankResult> rank_all(const EmbeddingMatrix& queries, const EmbeddingMatrix& corpora,
                                 const std::map<std::string, std::string>& ground_truth,
                                 const RankOptions& options) {
  if (queries.rows() > 0 && queries.dim() != corpora.dim()) {
    throw Error(ErrorKind::DimMismatch,
                "query dim " + std::to_string(queries.dim()) + " vs corpus dim " + std::to_string(corpora.dim()));
  }
  const std::size_t n_corpus = corpora.rows();
  if (n_corpus == 0) throw Error(ErrorKind::EmptyInput, "no corpus rows to rank");
  if (n_corpus > UINT32_MAX) throw Error(ErrorKind::InvalidArgument, "corpus too large");

  std::vector<std::size_t> gt_rows(queries.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto it = ground_truth.find(queries.ids()[q]);
    if (it == ground_truth.end()) {
      throw Error(ErrorKind::InvalidArgument, "query '" + queries.ids()[q] + "' has no ground truth");
    }
    gt_rows[q] = corpora.find(it->second);
    if (gt_rows[q] == n_corpus) {
      throw Error(ErrorKind::InvalidArgument, "ground truth '" + it->second + "' is not a corpus id");
    }
  }

  std::vector<double> corpus_norms(n_corpus);
  for (std::size_t c = 0; c < n_corpus; ++c) corpus_norms[c] = norm(corpora.row(c));
  const auto& ids = corpora.ids();

  std::vector<RankResult> results(queries.rows());
  parallel_blocks(queries.rows(), options.block_size, options.jobs, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scores(n_corpus);
    for (std::size_t q = begin; q < end; ++q) {
      const auto qrow = queries.row(q);
      const double qn = norm(qrow);
      for (std::size_t c = 0; c < n_corpus; ++c) {
        scores[c] = std::clamp(dot(qrow, corpora.row(c)) / (qn * corpus_norms[c]), -1.0, 1.0);
      }
      // a precedes b: higher score, then smaller corpus id.
      auto before = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return ids[a] < ids[b];
      };
      RankResult& r = results[q];
      r.query_id = queries.ids()[q];
      r.gt_id = ids[gt_rows[q]];
      if (options.keep_candidates) {
        r.candidates.resize(n_corpus);
        std::iota(r.candidates.begin(), r.candidates.end(), std::uint32_t{0});
        std::sort(r.candidates.begin(), r.candidates.end(), before);
        const auto pos = std::find(r.candidates.begin(), r.candidates.end(), gt_rows[q]);
        r.gt_rank = static_cast<std::size_t>(pos - r.candidates.begin()) + 1;
        r.top1_id = ids[r.candidates.front()];
      } else {
        std::size_t ahead = 0;
        std::size_t best = 0;
        for (std::size_t c = 0; c < n_corpus; ++c) {
          if (before(c, gt_rows[q])) ++ahead;
          if (before(c, best)) best = c;
        }
        r.gt_rank = ahead + 1;
        r.top1_id = ids[best];
      }
    }
  });
  return results;
}

RankSummary summarize(std::span<const RankResult> results, std::vector<std::size_t> ks) {
  if (results.empty()) throw Error(ErrorKind::EmptyInput, "no rank results to summarize");
  const std::size_t n = results.size();
  if (ks.empty()) ks = {1, 5, 10, n};

  RankSummary s;
  s.num_queries = n;
  std::vector<std::size_t> ranks;
  ranks.reserve(n);
  for (const auto& r : results) {
    if (r.gt_rank == 0) throw Error(ErrorKind::InvalidArgument, "gt_rank must be >= 1");
    ranks.push_back(r.gt_rank);
  }
  for (std::size_t k : ks) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    std::size_t hits = 0;
    double reciprocal = 0;
    for (std::size_t rank : ranks) {
      if (rank <= k) {
        ++hits;
        reciprocal += 1.0 / static_cast<double>(rank);
      }
    }
    s.recall_at[k] = static_cast<double>(hits) / static_cast<double>(n);
    s.mrr_at[k] = reciprocal / static_cast<double>(n);
  }
  std::vector<std::size_t> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  s.median_rank = static_cast<double>(sorted[(n - 1) / 2]);

  std::size_t top1 = 0;
  for (const auto& r : results) {
    if (r.gt_rank == 1) {
      ++top1;
    } else {
      s.failures.push_back(FailureRecord::make(r.query_id, r.gt_id, r.top1_id, r.gt_rank));
    }
  }
  s.fail_fraction = 1.0 - static_cast<double>(top1) / static_cast<double>(n);
  return s;
}

std::map<std::string, std::string> ground_truth_of(std::span<const QueryRecord> queries) {
  std::map<std::string, std::string> gt;
  for (const auto& q : queries) {
    if (!gt.emplace(q.query_id, q.image_id).second) throw Error(ErrorKind::DuplicateId, "query " + q.query_id);
  }
  return gt;
}

}  // namespace xrank::ranker
