#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xrank {

/// WordNet synset name such as `zebra.n.01`.
class SynsetId {
 public:
  SynsetId() = default;
  /// Throws Error(InvalidArgument) unless `is_valid(name)`.
  explicit SynsetId(std::string name);

  static bool is_valid(std::string_view name);

  const std::string& str() const noexcept { return name_; }
  /// The lemma part, e.g. `zebra` for `zebra.n.01`.
  std::string_view lemma() const;

  friend auto operator<=>(const SynsetId&, const SynsetId&) = default;
  friend bool operator==(const SynsetId&, const SynsetId&) = default;

 private:
  std::string name_;
};

/// Axis-aligned box in absolute pixels of the owning image.
struct BoundingBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  /// Throws Error(InvalidArgument) on negative origin, non-positive extent or non-finite values.
  static BoundingBox make(double x, double y, double w, double h);
  double area() const noexcept { return w * h; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ConceptInstance {
  SynsetId synset;
  BoundingBox box;

  friend bool operator==(const ConceptInstance&, const ConceptInstance&) = default;
};

/// All concept instances annotated on one image.
class ImageAnnotation {
 public:
  ImageAnnotation(std::string image_id, int width, int height, std::vector<ConceptInstance> instances);

  const std::string& image_id() const noexcept { return image_id_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double image_area() const noexcept { return static_cast<double>(width_) * height_; }
  const std::vector<ConceptInstance>& instances() const noexcept { return instances_; }

  /// Deduplicated synsets present on the image.
  const std::set<SynsetId>& concept_set() const noexcept { return concepts_; }
  /// Multiplicity of every synset category (each >= 1).
  const std::map<SynsetId, int>& multiset() const noexcept { return multiset_; }
  /// Instances of one category, in annotation order.
  std::vector<const ConceptInstance*> instances_of(const SynsetId& synset) const;

  friend bool operator==(const ImageAnnotation& a, const ImageAnnotation& b) {
    return a.image_id_ == b.image_id_ && a.width_ == b.width_ && a.height_ == b.height_ &&
           a.instances_ == b.instances_;
  }

 private:
  std::string image_id_;
  int width_;
  int height_;
  std::vector<ConceptInstance> instances_;
  std::set<SynsetId> concepts_;
  std::map<SynsetId, int> multiset_;
};

struct QueryRecord {
  std::string query_id;
  std::string image_id;
  std::string text;

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

struct CorpusRecord {
  std::string image_id;
  std::vector<std::string> sentences;

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

/// Row-per-item embedding matrix held in float64.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  /// `values` is row-major, |ids| x dim. Rejects duplicate ids, non-finite entries and zero rows.
  EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim, std::vector<double> values);

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  /// Row index of `id`, or rows() when absent.
  std::size_t find(std::string_view id) const;

  friend bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
    return a.ids_ == b.ids_ && a.dim_ == b.dim_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::string> ids_;
  std::size_t dim_ = 0;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A query whose ground-truth image was not ranked first.
struct FailureRecord {
  std::string query_id;
  std::string gt_image_id;
  std::string retrieved_image_id;
  std::size_t gt_rank = 2;

  /// Throws Error(InvalidArgument) when gt_rank < 2.
  static FailureRecord make(std::string query_id, std::string gt_image_id,
                            std::string retrieved_image_id, std::size_t gt_rank);

  friend bool operator==(const FailureRecord&, const FailureRecord&) = default;
};

/// Lookup of annotations by image id.
class AnnotationIndex {
 public:
  AnnotationIndex() = default;
  /// Throws Error(DuplicateId) on repeated image ids.
  explicit AnnotationIndex(std::vector<ImageAnnotation> annotations);

  const ImageAnnotation& at(std::string_view image_id) const;
  bool contains(std::string_view image_id) const;
  const std::vector<ImageAnnotation>& all() const noexcept { return annotations_; }

 private:
  std::vector<ImageAnnotation> annotations_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct NamedColor {
  std::string name;
  int r = 0;
  int g = 0;
  int b = 0;

  friend bool operator==(const NamedColor&, const NamedColor&) = default;
};

/// Euclidean distance in 0-255 RGB space.
double rgb_distance(const NamedColor& a, const NamedColor& b);

/// Named colors with unique lowercase names, kept in load order.
class ColorTable {
 public:
  ColorTable() = default;
  /// Throws Error(InvalidArgument) on out-of-range channels or non-lowercase names, Error(DuplicateId) on repeats.
  explicit ColorTable(std::vector<NamedColor> colors);

  const std::vector<NamedColor>& colors() const noexcept { return colors_; }
  const NamedColor* find(std::string_view name) const;
  std::size_t size() const noexcept { return colors_.size(); }

  friend bool operator==(const ColorTable& a, const ColorTable& b) { return a.colors_ == b.colors_; }

 private:
  std::vector<NamedColor> colors_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class DefectKind {
  DuplicateId,
  DanglingGroundTruth,
  DanglingCorpus,
  DanglingEmbeddingId,
  MissingEmbedding,
  DimMismatch,
};

std::string_view to_string(DefectKind kind);

struct Defect {
  DefectKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Defect> defects;

  bool ok() const noexcept { return defects.empty(); }
  std::size_t count(DefectKind kind) const;
};

/// Cross-checks a loaded dataset. Never throws on inconsistent input; every problem is a Defect.
ValidationReport validate_dataset(std::span<const ImageAnnotation> annotations,
                                  std::span<const QueryRecord> queries,
                                  std::span<const CorpusRecord> corpora,
                                  const EmbeddingMatrix& query_embeddings,
                                  const EmbeddingMatrix& corpus_embeddings);

}  // namespace xrank
