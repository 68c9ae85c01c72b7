#include "xrank/toy_embedder.hpp"

#include <cmath>

#include "xrank/error.hpp"
#include "xrank/text.hpp"

namespace xrank {

ToyEmbedder::ToyEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw Error(ErrorKind::InvalidArgument, "embedding dim must be positive");
}

std::size_t ToyEmbedder::bucket_of(std::string_view token) const {
  return static_cast<std::size_t>(text::splitmix64(text::fnv1a64(text::to_lower(token)) ^ seed_) % dim_);
}

std::vector<double> ToyEmbedder::embed_sentence(std::string_view sentence) const {
  std::vector<double> v(dim_, 0.0);
  const auto tokens = text::tokenize(sentence);
  if (tokens.empty()) throw Error(ErrorKind::EmptyText, "sentence has no tokens");
  for (const auto& t : tokens) v[bucket_of(t.view(sentence))] += 1.0;
  double norm2 = 0;
  for (double x : v) norm2 += x * x;
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

std::vector<double> ToyEmbedder::embed(std::span<const std::string> sentences) const {
  std::vector<double> sum(dim_, 0.0);
  std::size_t used = 0;
  for (const auto& s : sentences) {
    if (text::tokenize(s).empty()) continue;
    const auto v = embed_sentence(s);
    for (std::size_t i = 0; i < dim_; ++i) sum[i] += v[i];
    ++used;
  }
  if (used == 0) throw Error(ErrorKind::EmptyText, "no sentence with tokens");
  for (double& x : sum) x /= static_cast<double>(used);
  return sum;
}

EmbeddingMatrix ToyEmbedder::embed_queries(std::span<const QueryRecord> queries) const {
  std::vector<std::string> ids;
  std::vector<double> values;
  for (const auto& q : queries) {
    ids.push_back(q.query_id);
    const auto v = embed_sentence(q.text);
    values.insert(values.end(), v.begin(), v.end());
  }
  return EmbeddingMatrix(std::move(ids), dim_, std::move(values));
}

EmbeddingMatrix ToyEmbedder::embed_corpora(std::span<const CorpusRecord> corpora) const {
  std::vector<std::string> ids;
  std::vector<double> values;
  for (const auto& c : corpora) {
    ids.push_back(c.image_id);
    const auto v = embed(c.sentences);
    values.insert(values.end(), v.begin(), v.end());
  }
  return EmbeddingMatrix(std::move(ids), dim_, std::move(values));
}

}  // namespace xrank
