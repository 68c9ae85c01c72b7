#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "xrank/types.hpp"
#include "xrank/wordnet.hpp"

/// Readers and writers for every on-disk format. Readers enforce the type
/// invariants at parse time and stop at the first malformed record.
namespace xrank::ingest {

inline constexpr std::string_view kEmbeddingMagic = "XRANKEMB";
inline constexpr std::uint32_t kEmbeddingVersion = 1;

// Annotation JSONL: {"image_id":str,"width":int,"height":int,"instances":[{"synset":str,"box":[x,y,w,h]}]}
std::vector<ImageAnnotation> read_annotations(std::istream& in);
std::vector<ImageAnnotation> read_annotations(const std::filesystem::path& path);
void write_annotations(std::ostream& out, std::span<const ImageAnnotation> annotations);
void write_annotations(const std::filesystem::path& path, std::span<const ImageAnnotation> annotations);

// Query JSONL: {"query_id":str,"image_id":str,"text":str}
std::vector<QueryRecord> read_queries(std::istream& in);
std::vector<QueryRecord> read_queries(const std::filesystem::path& path);
void write_queries(std::ostream& out, std::span<const QueryRecord> queries);
void write_queries(const std::filesystem::path& path, std::span<const QueryRecord> queries);

// Corpus JSONL: {"image_id":str,"sentences":[str,...]}
std::vector<CorpusRecord> read_corpora(std::istream& in);
std::vector<CorpusRecord> read_corpora(const std::filesystem::path& path);
void write_corpora(std::ostream& out, std::span<const CorpusRecord> corpora);
void write_corpora(const std::filesystem::path& path, std::span<const CorpusRecord> corpora);

// Failure JSONL: {"query_id":str,"gt_image_id":str,"retrieved_image_id":str,"gt_rank":int}
std::vector<FailureRecord> read_failures(std::istream& in);
std::vector<FailureRecord> read_failures(const std::filesystem::path& path);
void write_failures(std::ostream& out, std::span<const FailureRecord> failures);
void write_failures(const std::filesystem::path& path, std::span<const FailureRecord> failures);

// Binary embeddings: magic, u32 version, u32 dim, u64 count, then per row
// u16 id length, id bytes, dim little-endian float32.
EmbeddingMatrix read_embeddings(std::span<const std::uint8_t> bytes);
EmbeddingMatrix read_embeddings(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_embeddings(const EmbeddingMatrix& matrix);
void write_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);

// Synset graph TSV: `S <synset>`, `H <child> <parent>`, `A <lemma> <antonym>`; '#' starts a comment line.
wordnet::SynsetGraph read_synset_graph(std::istream& in);
wordnet::SynsetGraph read_synset_graph(const std::filesystem::path& path);
void write_synset_graph(std::ostream& out, const wordnet::SynsetGraph& graph);
void write_synset_graph(const std::filesystem::path& path, const wordnet::SynsetGraph& graph);

// Color CSV: `name,r,g,b` rows, optional header line.
ColorTable read_colors(std::istream& in);
ColorTable read_colors(const std::filesystem::path& path);
void write_colors(std::ostream& out, const ColorTable& colors);
void write_colors(const std::filesystem::path& path, const ColorTable& colors);

/// Opens `path` for reading; throws Error(Io) on failure.
std::ifstream open_input(const std::filesystem::path& path, bool binary = false);
/// Opens `path` for writing; throws Error(Io) on failure.
std::ofstream open_output(const std::filesystem::path& path, bool binary = false);

}  // namespace xrank::ingest
