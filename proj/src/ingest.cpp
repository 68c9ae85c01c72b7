#include "xrank/ingest.hpp"

#include <bit>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <unordered_set>

#include <json.hpp>

#include "xrank/error.hpp"

namespace xrank::ingest {

using json = nlohmann::ordered_json;

std::ifstream open_input(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::in | std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::out | std::ios::binary | std::ios::trunc
                                 : std::ios::out | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

namespace {

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

// Calls `fn(object, line_number)` for every non-blank JSONL line, translating
// JSON and invariant errors into ParseError for that line.
template <typename Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");
    try {
      fn(obj, line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DuplicateId) throw;
      throw ParseError(line_no, e.what());
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
}

const json& field(const json& obj, const char* key, std::size_t line_no) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(line_no, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& obj, const char* key, std::size_t line_no) {
  const json& v = field(obj, key, line_no);
  if (!v.is_string()) throw ParseError(line_no, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::int64_t int_field(const json& obj, const char* key, std::size_t line_no) {
  const json& v = field(obj, key, line_no);
  if (!v.is_number_integer()) throw ParseError(line_no, std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

void write_line(std::ostream& out, const json& obj) { out << obj.dump() << '\n'; }

void check_unique(std::unordered_set<std::string>& seen, const std::string& id, std::size_t line_no) {
  if (!seen.insert(id).second) {
    throw Error(ErrorKind::DuplicateId, "line " + std::to_string(line_no) + ": '" + id + "'");
  }
}

template <typename T, typename Reader>
T read_path(const std::filesystem::path& path, Reader&& reader) {
  auto in = open_input(path);
  return reader(in);
}

template <typename Writer>
void write_path(const std::filesystem::path& path, Writer&& writer) {
  auto out = open_output(path);
  writer(out);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

}  // namespace

// ---------------------------------------------------------------------------
// Annotations

std::vector<ImageAnnotation> read_annotations(std::istream& in) {
  std::vector<ImageAnnotation> out;
  std::unordered_set<std::string> seen;
  for_each_json_line(in, [&](const json& obj, std::size_t line_no) {
    std::string image_id = string_field(obj, "image_id", line_no);
    const auto width = int_field(obj, "width", line_no);
    const auto height = int_field(obj, "height", line_no);
    if (width <= 0 || height <= 0 || width > INT32_MAX || height > INT32_MAX) {
      throw ParseError(line_no, "image width and height must be positive integers");
    }
    const json& list = field(obj, "instances", line_no);
    if (!list.is_array()) throw ParseError(line_no, "'instances' must be an array");
    std::vector<ConceptInstance> instances;
    instances.reserve(list.size());
    for (const json& inst : list) {
      if (!inst.is_object()) throw ParseError(line_no, "instance must be an object");
      const std::string synset = string_field(inst, "synset", line_no);
      const json& box = field(inst, "box", line_no);
      if (!box.is_array() || box.size() != 4 ||
          !std::all_of(box.begin(), box.end(), [](const json& v) { return v.is_number(); })) {
        throw ParseError(line_no, "'box' must be [x, y, w, h]");
      }
      instances.push_back(ConceptInstance{
          SynsetId(synset),
          BoundingBox::make(box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
                            box[3].get<double>())});
    }
    check_unique(seen, image_id, line_no);
    out.emplace_back(std::move(image_id), static_cast<int>(width), static_cast<int>(height), std::move(instances));
  });
  return out;
}

std::vector<ImageAnnotation> read_annotations(const std::filesystem::path& path) {
  return read_path<std::vector<ImageAnnotation>>(path, [](std::istream& in) { return read_annotations(in); });
}

void write_annotations(std::ostream& out, std::span<const ImageAnnotation> annotations) {
  for (const auto& a : annotations) {
    json instances = json::array();
    for (const auto& inst : a.instances()) {
      instances.push_back(json{{"synset", inst.synset.str()},
                               {"box", json::array({inst.box.x, inst.box.y, inst.box.w, inst.box.h})}});
    }
    write_line(out, json{{"image_id", a.image_id()},
                         {"width", a.width()},
                         {"height", a.height()},
                         {"instances", std::move(instances)}});
  }
}

void write_annotations(const std::filesystem::path& path, std::span<const ImageAnnotation> annotations) {
  write_path(path, [&](std::ostream& out) { write_annotations(out, annotations); });
}

// ---------------------------------------------------------------------------
// Queries and corpora

std::vector<QueryRecord> read_queries(std::istream& in) {
  std::vector<QueryRecord> out;
  std::unordered_set<std::string> seen;
  for_each_json_line(in, [&](const json& obj, std::size_t line_no) {
    QueryRecord q{string_field(obj, "query_id", line_no), string_field(obj, "image_id", line_no),
                  string_field(obj, "text", line_no)};
    if (q.query_id.empty()) throw ParseError(line_no, "query_id must be non-empty");
    if (q.image_id.empty()) throw ParseError(line_no, "image_id must be non-empty");
    check_unique(seen, q.query_id, line_no);
    out.push_back(std::move(q));
  });
  return out;
}

std::vector<QueryRecord> read_queries(const std::filesystem::path& path) {
  return read_path<std::vector<QueryRecord>>(path, [](std::istream& in) { return read_queries(in); });
}

void write_queries(std::ostream& out, std::span<const QueryRecord> queries) {
  for (const auto& q : queries) {
    write_line(out, json{{"query_id", q.query_id}, {"image_id", q.image_id}, {"text", q.text}});
  }
}

void write_queries(const std::filesystem::path& path, std::span<const QueryRecord> queries) {
  write_path(path, [&](std::ostream& out) { write_queries(out, queries); });
}

std::vector<CorpusRecord> read_corpora(std::istream& in) {
  std::vector<CorpusRecord> out;
  std::unordered_set<std::string> seen;
  for_each_json_line(in, [&](const json& obj, std::size_t line_no) {
    CorpusRecord c;
    c.image_id = string_field(obj, "image_id", line_no);
    if (c.image_id.empty()) throw ParseError(line_no, "image_id must be non-empty");
    const json& list = field(obj, "sentences", line_no);
    if (!list.is_array() || list.empty()) throw ParseError(line_no, "'sentences' must be a non-empty array");
    for (const json& s : list) {
      if (!s.is_string()) throw ParseError(line_no, "sentences must be strings");
      c.sentences.push_back(s.get<std::string>());
    }
    check_unique(seen, c.image_id, line_no);
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<CorpusRecord> read_corpora(const std::filesystem::path& path) {
  return read_path<std::vector<CorpusRecord>>(path, [](std::istream& in) { return read_corpora(in); });
}

void write_corpora(std::ostream& out, std::span<const CorpusRecord> corpora) {
  for (const auto& c : corpora) write_line(out, json{{"image_id", c.image_id}, {"sentences", c.sentences}});
}

void write_corpora(const std::filesystem::path& path, std::span<const CorpusRecord> corpora) {
  write_path(path, [&](std::ostream& out) { write_corpora(out, corpora); });
}

// ---------------------------------------------------------------------------
// Failures

std::vector<FailureRecord> read_failures(std::istream& in) {
  std::vector<FailureRecord> out;
  std::unordered_set<std::string> seen;
  for_each_json_line(in, [&](const json& obj, std::size_t line_no) {
    const auto rank = int_field(obj, "gt_rank", line_no);
    if (rank < 2) throw ParseError(line_no, "gt_rank must be >= 2");
    FailureRecord f = FailureRecord::make(string_field(obj, "query_id", line_no),
                                          string_field(obj, "gt_image_id", line_no),
                                          string_field(obj, "retrieved_image_id", line_no),
                                          static_cast<std::size_t>(rank));
    check_unique(seen, f.query_id, line_no);
    out.push_back(std::move(f));
  });
  return out;
}

std::vector<FailureRecord> read_failures(const std::filesystem::path& path) {
  return read_path<std::vector<FailureRecord>>(path, [](std::istream& in) { return read_failures(in); });
}

void write_failures(std::ostream& out, std::span<const FailureRecord> failures) {
  for (const auto& f : failures) {
    write_line(out, json{{"query_id", f.query_id},
                         {"gt_image_id", f.gt_image_id},
                         {"retrieved_image_id", f.retrieved_image_id},
                         {"gt_rank", f.gt_rank}});
  }
}

void write_failures(const std::filesystem::path& path, std::span<const FailureRecord> failures) {
  write_path(path, [&](std::ostream& out) { write_failures(out, failures); });
}

// ---------------------------------------------------------------------------
// Embeddings

namespace {

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T read_le(const char* what) {
    require(sizeof(T), what);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return value;
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    require(n, what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void require(std::size_t n, const char* what) const {
    if (remaining() < n) throw Error(ErrorKind::TruncatedFile, std::string("file ends inside ") + what);
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

}  // namespace

EmbeddingMatrix read_embeddings(std::span<const std::uint8_t> bytes) {
  const std::size_t magic_len = kEmbeddingMagic.size();
  if (bytes.size() < magic_len ||
      !std::equal(kEmbeddingMagic.begin(), kEmbeddingMagic.end(), bytes.begin(),
                  [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; })) {
    throw Error(ErrorKind::BadMagic, "not an embedding file");
  }
  ByteReader reader(bytes.subspan(magic_len));
  const auto version = reader.read_le<std::uint32_t>("header");
  if (version != kEmbeddingVersion) {
    throw Error(ErrorKind::Parse, "unsupported embedding file version " + std::to_string(version));
  }
  const auto dim = reader.read_le<std::uint32_t>("header");
  const auto count = reader.read_le<std::uint64_t>("header");
  if (dim == 0) throw Error(ErrorKind::Parse, "embedding dim must be positive");

  std::vector<std::string> ids;
  std::vector<double> values;
  // Guard the reservation against a corrupt count.
  const std::size_t min_row_bytes = 2 + std::size_t{4} * dim;
  if (count <= reader.remaining() / min_row_bytes) {
    ids.reserve(count);
    values.reserve(count * dim);
  }
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto id_len = reader.read_le<std::uint16_t>("row id length");
    const auto id_bytes = reader.take(id_len, "row id");
    if (id_len == 0) throw Error(ErrorKind::Parse, "row " + std::to_string(r) + " has an empty id");
    ids.emplace_back(id_bytes.begin(), id_bytes.end());
    for (std::uint32_t d = 0; d < dim; ++d) {
      values.push_back(static_cast<double>(std::bit_cast<float>(reader.read_le<std::uint32_t>("row values"))));
    }
  }
  if (reader.remaining() != 0) {
    throw Error(ErrorKind::CountMismatch,
                "header count " + std::to_string(count) + " leaves " + std::to_string(reader.remaining()) +
                    " trailing bytes");
  }
  return EmbeddingMatrix(std::move(ids), dim, std::move(values));
}

EmbeddingMatrix read_embeddings(const std::filesystem::path& path) {
  auto in = open_input(path, true);
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return read_embeddings(bytes);
}

std::vector<std::uint8_t> encode_embeddings(const EmbeddingMatrix& matrix) {
  if (matrix.dim() > UINT32_MAX) throw Error(ErrorKind::InvalidArgument, "embedding dim exceeds u32");
  std::vector<std::uint8_t> out(kEmbeddingMagic.begin(), kEmbeddingMagic.end());
  put_le<std::uint32_t>(out, kEmbeddingVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.dim()));
  put_le<std::uint64_t>(out, matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const std::string& id = matrix.ids()[r];
    if (id.empty() || id.size() > UINT16_MAX) {
      throw Error(ErrorKind::InvalidArgument, "embedding id length must be in [1, 65535]");
    }
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
    out.insert(out.end(), id.begin(), id.end());
    for (double v : matrix.row(r)) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

void write_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path) {
  const auto bytes = encode_embeddings(matrix);
  auto out = open_output(path, true);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

// ---------------------------------------------------------------------------
// Synset graph

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> fields;
  for (std::string f; ss >> f;) fields.push_back(std::move(f));
  return fields;
}

SynsetId parse_synset(const std::string& s, std::size_t line_no) {
  if (!SynsetId::is_valid(s)) throw ParseError(line_no, "malformed synset id '" + s + "'");
  return SynsetId(s);
}

}  // namespace

wordnet::SynsetGraph read_synset_graph(std::istream& in) {
  wordnet::SynsetGraph graph;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line) || line.front() == '#') continue;
    const auto f = split_fields(line);
    if (f[0] == "S") {
      if (f.size() != 2) throw ParseError(line_no, "S record needs exactly one synset");
      graph.add_node(parse_synset(f[1], line_no));
    } else if (f[0] == "H") {
      if (f.size() != 3) throw ParseError(line_no, "H record needs child and parent");
      const SynsetId child = parse_synset(f[1], line_no);
      const SynsetId parent = parse_synset(f[2], line_no);
      for (const auto* s : {&child, &parent}) {
        if (!graph.contains(*s)) throw ParseError(line_no, "edge endpoint " + s->str() + " not declared");
      }
      if (child == parent) throw ParseError(line_no, "self-loop on " + child.str());
      graph.add_hypernym(child, parent);
    } else if (f[0] == "A") {
      if (f.size() != 3) throw ParseError(line_no, "A record needs lemma and antonym");
      if (f[1] == f[2]) throw ParseError(line_no, "lemma cannot be its own antonym");
      graph.add_antonym(f[1], f[2]);
    } else {
      throw ParseError(line_no, "unknown record kind '" + f[0] + "'");
    }
  }
  return graph;
}

wordnet::SynsetGraph read_synset_graph(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_synset_graph(in);
}

void write_synset_graph(std::ostream& out, const wordnet::SynsetGraph& graph) {
  for (const auto& s : graph.nodes()) out << "S\t" << s.str() << '\n';
  for (const auto& [child, parent] : graph.hypernym_edges()) {
    out << "H\t" << graph.nodes()[child].str() << '\t' << graph.nodes()[parent].str() << '\n';
  }
  for (const auto& [lemma, antonyms] : graph.antonym_table()) {
    for (const auto& a : antonyms) {
      if (lemma < a) out << "A\t" << lemma << '\t' << a << '\n';
    }
  }
}

void write_synset_graph(const std::filesystem::path& path, const wordnet::SynsetGraph& graph) {
  write_path(path, [&](std::ostream& out) { write_synset_graph(out, graph); });
}

// ---------------------------------------------------------------------------
// Colors

namespace {

int parse_channel(const std::string& s, std::size_t line_no) {
  int v = -1;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0 || v > 255) {
    throw ParseError(line_no, "color channel '" + s + "' must be an integer in [0, 255]");
  }
  return v;
}

}  // namespace

ColorTable read_colors(std::istream& in) {
  std::vector<NamedColor> colors;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    if (line_no == 1 && line == "name,r,g,b") continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 4) throw ParseError(line_no, "expected name,r,g,b");
    NamedColor c{cells[0], parse_channel(cells[1], line_no), parse_channel(cells[2], line_no),
                 parse_channel(cells[3], line_no)};
    if (c.name.empty() || std::any_of(c.name.begin(), c.name.end(),
                                      [](unsigned char ch) { return std::isupper(ch); })) {
      throw ParseError(line_no, "color name must be non-empty lowercase");
    }
    check_unique(seen, c.name, line_no);
    colors.push_back(std::move(c));
  }
  return ColorTable(std::move(colors));
}

ColorTable read_colors(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_colors(in);
}

void write_colors(std::ostream& out, const ColorTable& colors) {
  out << "name,r,g,b\n";
  for (const auto& c : colors.colors()) out << c.name << ',' << c.r << ',' << c.g << ',' << c.b << '\n';
}

void write_colors(const std::filesystem::path& path, const ColorTable& colors) {
  write_path(path, [&](std::ostream& out) { write_colors(out, colors); });
}

}  // namespace xrank::ingest
