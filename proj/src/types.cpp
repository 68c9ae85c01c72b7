#include "xrank/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "xrank/error.hpp"

namespace xrank {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::UnknownSynset: return "UnknownSynset";
    case ErrorKind::EmptyGroundTruthConcepts: return "EmptyGroundTruthConcepts";
    case ErrorKind::NoDistantColor: return "NoDistantColor";
    case ErrorKind::MissingQuery: return "MissingQuery";
    case ErrorKind::EmptyText: return "EmptyText";
  }
  return "Error";
}

std::string_view to_string(DefectKind kind) {
  switch (kind) {
    case DefectKind::DuplicateId: return "DuplicateId";
    case DefectKind::DanglingGroundTruth: return "DanglingGroundTruth";
    case DefectKind::DanglingCorpus: return "DanglingCorpus";
    case DefectKind::DanglingEmbeddingId: return "DanglingEmbeddingId";
    case DefectKind::MissingEmbedding: return "MissingEmbedding";
    case DefectKind::DimMismatch: return "DimMismatch";
  }
  return "Defect";
}

// ---------------------------------------------------------------------------
// SynsetId

namespace {

constexpr bool is_pos_tag(char c) {
  return c == 'n' || c == 'v' || c == 'a' || c == 'r' || c == 's';
}

}  // namespace

bool SynsetId::is_valid(std::string_view name) {
  // <lemma>.<pos>.<dd>; the lemma itself may contain dots (e.g. `a.m.`).
  if (name.size() < 6) return false;
  const std::size_t n = name.size();
  if (!std::isdigit(static_cast<unsigned char>(name[n - 1])) ||
      !std::isdigit(static_cast<unsigned char>(name[n - 2])) || name[n - 3] != '.' ||
      !is_pos_tag(name[n - 4]) || name[n - 5] != '.') {
    return false;
  }
  const std::string_view lemma = name.substr(0, n - 5);
  if (lemma.empty()) return false;
  return std::none_of(lemma.begin(), lemma.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isupper(u) || std::isspace(u) || std::iscntrl(u);
  });
}

SynsetId::SynsetId(std::string name) : name_(std::move(name)) {
  if (!is_valid(name_)) {
    throw Error(ErrorKind::InvalidArgument, "malformed synset id '" + name_ + "'");
  }
}

std::string_view SynsetId::lemma() const {
  return std::string_view(name_).substr(0, name_.size() - 5);
}

// ---------------------------------------------------------------------------
// BoundingBox

BoundingBox BoundingBox::make(double x, double y, double w, double h) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) || !std::isfinite(h)) {
    throw Error(ErrorKind::InvalidArgument, "bounding box has non-finite coordinates");
  }
  if (x < 0 || y < 0) {
    throw Error(ErrorKind::InvalidArgument, "bounding box origin must be non-negative");
  }
  if (!(w > 0) || !(h > 0)) {
    throw Error(ErrorKind::InvalidArgument, "bounding box requires w > 0 and h > 0");
  }
  return BoundingBox{x, y, w, h};
}

// ---------------------------------------------------------------------------
// ImageAnnotation

ImageAnnotation::ImageAnnotation(std::string image_id, int width, int height,
                                 std::vector<ConceptInstance> instances)
    : image_id_(std::move(image_id)), width_(width), height_(height), instances_(std::move(instances)) {
  if (image_id_.empty()) throw Error(ErrorKind::InvalidArgument, "image_id must be non-empty");
  if (width_ <= 0 || height_ <= 0) {
    throw Error(ErrorKind::InvalidArgument, "image '" + image_id_ + "' needs positive width and height");
  }
  for (const auto& inst : instances_) {
    // Re-validate: instances may be built field by field.
    (void)BoundingBox::make(inst.box.x, inst.box.y, inst.box.w, inst.box.h);
    concepts_.insert(inst.synset);
    ++multiset_[inst.synset];
  }
}

std::vector<const ConceptInstance*> ImageAnnotation::instances_of(const SynsetId& synset) const {
  std::vector<const ConceptInstance*> out;
  for (const auto& inst : instances_) {
    if (inst.synset == synset) out.push_back(&inst);
  }
  return out;
}

// ---------------------------------------------------------------------------
// EmbeddingMatrix

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim, std::vector<double> values)
    : ids_(std::move(ids)), dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) throw Error(ErrorKind::InvalidArgument, "embedding dim must be positive");
  if (values_.size() != ids_.size() * dim_) {
    throw Error(ErrorKind::DimMismatch, "embedding payload does not match |ids| x dim");
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw Error(ErrorKind::DuplicateId, "embedding id '" + ids_[i] + "'");
    }
    double norm2 = 0;
    for (double v : row(i)) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::InvalidArgument, "embedding row '" + ids_[i] + "' has non-finite values");
      }
      norm2 += v * v;
    }
    if (norm2 == 0) throw Error(ErrorKind::ZeroNorm, "embedding row '" + ids_[i] + "'");
  }
}

std::size_t EmbeddingMatrix::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? rows() : it->second;
}

// ---------------------------------------------------------------------------

FailureRecord FailureRecord::make(std::string query_id, std::string gt_image_id,
                                  std::string retrieved_image_id, std::size_t gt_rank) {
  if (gt_rank < 2) {
    throw Error(ErrorKind::InvalidArgument, "failure '" + query_id + "' must have gt_rank >= 2");
  }
  return FailureRecord{std::move(query_id), std::move(gt_image_id), std::move(retrieved_image_id), gt_rank};
}

AnnotationIndex::AnnotationIndex(std::vector<ImageAnnotation> annotations)
    : annotations_(std::move(annotations)) {
  for (std::size_t i = 0; i < annotations_.size(); ++i) {
    if (!index_.emplace(annotations_[i].image_id(), i).second) {
      throw Error(ErrorKind::DuplicateId, "image id '" + annotations_[i].image_id() + "'");
    }
  }
}

const ImageAnnotation& AnnotationIndex::at(std::string_view image_id) const {
  const auto it = index_.find(std::string(image_id));
  if (it == index_.end()) {
    throw Error(ErrorKind::InvalidArgument, "no annotation for image '" + std::string(image_id) + "'");
  }
  return annotations_[it->second];
}

bool AnnotationIndex::contains(std::string_view image_id) const {
  return index_.contains(std::string(image_id));
}

// ---------------------------------------------------------------------------
// ColorTable

double rgb_distance(const NamedColor& a, const NamedColor& b) {
  const double dr = a.r - b.r;
  const double dg = a.g - b.g;
  const double db = a.b - b.b;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

ColorTable::ColorTable(std::vector<NamedColor> colors) : colors_(std::move(colors)) {
  for (std::size_t i = 0; i < colors_.size(); ++i) {
    const auto& c = colors_[i];
    if (c.name.empty() || std::any_of(c.name.begin(), c.name.end(),
                                      [](unsigned char ch) { return std::isupper(ch); })) {
      throw Error(ErrorKind::InvalidArgument, "color name '" + c.name + "' must be non-empty lowercase");
    }
    for (int v : {c.r, c.g, c.b}) {
      if (v < 0 || v > 255) throw Error(ErrorKind::InvalidArgument, "color '" + c.name + "' channel out of range");
    }
    if (!index_.emplace(c.name, i).second) throw Error(ErrorKind::DuplicateId, "color '" + c.name + "'");
  }
}

const NamedColor* ColorTable::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &colors_[it->second];
}

// ---------------------------------------------------------------------------
// validate_dataset

std::size_t ValidationReport::count(DefectKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(defects.begin(), defects.end(), [kind](const Defect& d) { return d.kind == kind; }));
}

ValidationReport validate_dataset(std::span<const ImageAnnotation> annotations,
                                  std::span<const QueryRecord> queries,
                                  std::span<const CorpusRecord> corpora,
                                  const EmbeddingMatrix& query_embeddings,
                                  const EmbeddingMatrix& corpus_embeddings) {
  ValidationReport report;
  auto add = [&report](DefectKind kind, std::string detail) {
    report.defects.push_back(Defect{kind, std::move(detail)});
  };

  std::unordered_set<std::string> image_ids;
  for (const auto& a : annotations) {
    if (!image_ids.insert(a.image_id()).second) add(DefectKind::DuplicateId, "annotation " + a.image_id());
  }
  std::unordered_set<std::string> query_ids;
  for (const auto& q : queries) {
    if (!query_ids.insert(q.query_id).second) add(DefectKind::DuplicateId, "query " + q.query_id);
    if (!image_ids.contains(q.image_id)) {
      add(DefectKind::DanglingGroundTruth, "query " + q.query_id + " -> image " + q.image_id);
    }
  }
  std::unordered_set<std::string> corpus_ids;
  for (const auto& c : corpora) {
    if (!corpus_ids.insert(c.image_id).second) add(DefectKind::DuplicateId, "corpus " + c.image_id);
    if (!image_ids.contains(c.image_id)) add(DefectKind::DanglingCorpus, "corpus " + c.image_id);
  }

  for (const auto& id : query_embeddings.ids()) {
    if (!query_ids.contains(id)) add(DefectKind::DanglingEmbeddingId, "query embedding " + id);
  }
  for (const auto& q : queries) {
    if (query_embeddings.find(q.query_id) == query_embeddings.rows()) {
      add(DefectKind::MissingEmbedding, "query " + q.query_id);
    }
  }
  for (const auto& id : corpus_embeddings.ids()) {
    if (!corpus_ids.contains(id)) add(DefectKind::DanglingEmbeddingId, "corpus embedding " + id);
  }
  for (const auto& c : corpora) {
    if (corpus_embeddings.find(c.image_id) == corpus_embeddings.rows()) {
      add(DefectKind::MissingEmbedding, "corpus " + c.image_id);
    }
  }
  if (query_embeddings.dim() != corpus_embeddings.dim()) {
    add(DefectKind::DimMismatch, "query dim " + std::to_string(query_embeddings.dim()) + " vs corpus dim " +
                                     std::to_string(corpus_embeddings.dim()));
  }
  return report;
}

}  // namespace xrank
