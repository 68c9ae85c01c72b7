#pragma once

#include <filesystem>
#include <string>

#include "xrank/ingest.hpp"
#include "xrank/types.hpp"
#include "xrank/wordnet.hpp"

namespace testdata {

inline std::filesystem::path data_dir() { return XRANK_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return data_dir() / "fixture"; }

inline const xrank::wordnet::SynsetGraph& wordnet_graph() {
  static const auto graph = xrank::ingest::read_synset_graph(data_dir() / "wordnet_fixture.tsv");
  return graph;
}

inline const xrank::AnnotationIndex& fixture_annotations() {
  static const xrank::AnnotationIndex index(xrank::ingest::read_annotations(fixture_dir() / "annotations.jsonl"));
  return index;
}

inline const xrank::ColorTable& color_table() {
  static const auto colors = xrank::ingest::read_colors(data_dir() / "colors.csv");
  return colors;
}

inline xrank::SynsetId sid(const std::string& name) { return xrank::SynsetId(name); }

}  // namespace testdata
