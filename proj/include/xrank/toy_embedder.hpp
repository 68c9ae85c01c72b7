#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xrank/types.hpp"

namespace xrank {

/// Hashed bag-of-words sentence embedder for self-contained runs without a
/// neural model. Each sentence maps to an L2-normalised token-count vector;
/// multi-sentence inputs average their sentence vectors.
class ToyEmbedder {
 public:
  explicit ToyEmbedder(std::size_t dim = 256, std::uint64_t seed = 0);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t bucket_of(std::string_view token) const;

  /// Throws Error(EmptyText) when no sentence has a token.
  std::vector<double> embed(std::span<const std::string> sentences) const;
  std::vector<double> embed_sentence(std::string_view sentence) const;

  EmbeddingMatrix embed_queries(std::span<const QueryRecord> queries) const;
  EmbeddingMatrix embed_corpora(std::span<const CorpusRecord> corpora) const;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

}  // namespace xrank
