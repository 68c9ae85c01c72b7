#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "xrank/error.hpp"
#include "xrank/types.hpp"

using namespace xrank;

namespace {

ImageAnnotation image(const std::string& id, std::vector<std::string> synsets) {
  std::vector<ConceptInstance> instances;
  for (auto& s : synsets) instances.push_back({SynsetId(s), BoundingBox::make(0, 0, 10, 10)});
  return ImageAnnotation(id, 100, 100, std::move(instances));
}

EmbeddingMatrix matrix(std::vector<std::string> ids, std::size_t dim) {
  std::vector<double> values(ids.size() * dim, 1.0);
  return EmbeddingMatrix(std::move(ids), dim, std::move(values));
}

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

}  // namespace

TEST(SynsetId, AcceptsWordNetNames) {
  EXPECT_TRUE(SynsetId::is_valid("zebra.n.01"));
  EXPECT_TRUE(SynsetId::is_valid("hot_dog.n.02"));
  EXPECT_TRUE(SynsetId::is_valid("large.a.01"));
  EXPECT_EQ(SynsetId("hot_dog.n.02").lemma(), "hot_dog");
}

TEST(SynsetId, RejectsMalformedNames) {
  for (const char* bad : {"", "zebra", "zebra.n", "zebra.x.01", "zebra.n.1", "zebra.n.001", ".n.01", "zebra.n.ab"}) {
    EXPECT_FALSE(SynsetId::is_valid(bad)) << bad;
  }
  EXPECT_EQ(kind_of([] { SynsetId("nope"); }), ErrorKind::InvalidArgument);
}

TEST(SynsetId, OrdersByName) {
  EXPECT_LT(SynsetId("cat.n.01"), SynsetId("dog.n.01"));
  EXPECT_EQ(SynsetId("cat.n.01"), SynsetId("cat.n.01"));
}

TEST(BoundingBox, ValidatesExtentAndOrigin) {
  EXPECT_DOUBLE_EQ(BoundingBox::make(1, 2, 3, 4).area(), 12.0);
  EXPECT_EQ(kind_of([] { BoundingBox::make(0, 0, 0, 4); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { BoundingBox::make(0, 0, 4, -1); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { BoundingBox::make(-1, 0, 4, 4); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { BoundingBox::make(0, 0, std::nan(""), 4); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { BoundingBox::make(0, 0, std::numeric_limits<double>::infinity(), 4); }),
            ErrorKind::InvalidArgument);
}

TEST(ImageAnnotation, MultisetMatchesInstances) {
  const auto img = image("a", {"zebra.n.01", "zebra.n.01", "field.n.01", "mane.n.01", "zebra.n.01"});
  EXPECT_EQ(img.concept_set().size(), 3u);
  EXPECT_EQ(img.multiset().size(), img.concept_set().size());
  EXPECT_EQ(img.multiset().at(SynsetId("zebra.n.01")), 3);
  int total = 0;
  for (auto& [s, n] : img.multiset()) {
    EXPECT_GE(n, 1);
    EXPECT_TRUE(img.concept_set().contains(s));
    total += n;
  }
  EXPECT_EQ(total, 5);
  EXPECT_EQ(img.instances_of(SynsetId("zebra.n.01")).size(), 3u);
  EXPECT_TRUE(img.instances_of(SynsetId("dog.n.01")).empty());
  EXPECT_DOUBLE_EQ(img.image_area(), 10000.0);
}

TEST(ImageAnnotation, RejectsBadDimensionsAndEmptyId) {
  EXPECT_EQ(kind_of([] { ImageAnnotation("a", 0, 10, {}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { ImageAnnotation("", 10, 10, {}); }), ErrorKind::InvalidArgument);
}

TEST(EmbeddingMatrix, RejectsDuplicatesZeroRowsAndNonFinite) {
  EXPECT_EQ(kind_of([] { EmbeddingMatrix({"a", "a"}, 1, {1.0, 2.0}); }), ErrorKind::DuplicateId);
  EXPECT_EQ(kind_of([] { EmbeddingMatrix({"a", "b"}, 2, {1.0, 0.0, 0.0, 0.0}); }), ErrorKind::ZeroNorm);
  EXPECT_EQ(kind_of([] { EmbeddingMatrix({"a"}, 2, {1.0, std::nan("")}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { EmbeddingMatrix({"a"}, 2, {1.0}); }), ErrorKind::DimMismatch);
}

TEST(EmbeddingMatrix, FindsRowsById) {
  const EmbeddingMatrix m({"x", "y"}, 2, {1, 2, 3, 4});
  EXPECT_EQ(m.find("y"), 1u);
  EXPECT_EQ(m.find("z"), m.rows());
  EXPECT_DOUBLE_EQ(m.row(1)[0], 3.0);
}

TEST(FailureRecord, RankOneIsNotAFailure) {
  EXPECT_EQ(kind_of([] { FailureRecord::make("q", "g", "r", 1); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(FailureRecord::make("q", "g", "r", 2).gt_rank, 2u);
}

TEST(AnnotationIndex, LooksUpAndRejectsDuplicates) {
  const AnnotationIndex index({image("a", {"dog.n.01"}), image("b", {"cat.n.01"})});
  EXPECT_TRUE(index.contains("b"));
  EXPECT_FALSE(index.contains("c"));
  EXPECT_EQ(index.at("a").image_id(), "a");
  EXPECT_EQ(kind_of([&] { index.at("c"); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { AnnotationIndex({image("a", {"dog.n.01"}), image("a", {"dog.n.01"})}); }),
            ErrorKind::DuplicateId);
}

TEST(ColorTable, EnforcesLowercaseUniqueNamesAndChannels) {
  const ColorTable t({{"red", 255, 0, 0}, {"blue", 0, 0, 255}});
  ASSERT_NE(t.find("red"), nullptr);
  EXPECT_EQ(t.find("green"), nullptr);
  EXPECT_NEAR(rgb_distance(*t.find("red"), *t.find("blue")), std::sqrt(2.0 * 255 * 255), 1e-12);
  EXPECT_EQ(kind_of([] { ColorTable({{"Red", 255, 0, 0}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { ColorTable({{"red", 256, 0, 0}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { ColorTable({{"red", 1, 0, 0}, {"red", 2, 0, 0}}); }), ErrorKind::DuplicateId);
}

TEST(ValidateDataset, ConsistentFixtureHasNoDefects) {
  const std::vector<ImageAnnotation> annotations = {image("i1", {"dog.n.01"}), image("i2", {"cat.n.01"}),
                                                    image("i3", {"car.n.01"})};
  const std::vector<QueryRecord> queries = {{"q1", "i1", "a dog"}, {"q2", "i2", "a cat"}, {"q3", "i3", "a car"}};
  const std::vector<CorpusRecord> corpora = {{"i1", {"dog"}}, {"i2", {"cat"}}, {"i3", {"car"}}};
  const auto report = validate_dataset(annotations, queries, corpora, matrix({"q1", "q2", "q3"}, 4),
                                       matrix({"i1", "i2", "i3"}, 4));
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.defects.size(), 0u);
}

TEST(ValidateDataset, DanglingGroundTruth) {
  const std::vector<ImageAnnotation> annotations = {image("i1", {"dog.n.01"})};
  const std::vector<QueryRecord> queries = {{"q1", "i9", "a dog"}};
  const std::vector<CorpusRecord> corpora = {{"i1", {"dog"}}};
  const auto report = validate_dataset(annotations, queries, corpora, matrix({"q1"}, 2), matrix({"i1"}, 2));
  EXPECT_FALSE(report.ok());
  EXPECT_EQ(report.defects.size(), 1u);
  EXPECT_EQ(report.count(DefectKind::DanglingGroundTruth), 1u);
}

TEST(ValidateDataset, DimMismatch) {
  const std::vector<ImageAnnotation> annotations = {image("i1", {"dog.n.01"})};
  const std::vector<QueryRecord> queries = {{"q1", "i1", "a dog"}};
  const std::vector<CorpusRecord> corpora = {{"i1", {"dog"}}};
  const auto report = validate_dataset(annotations, queries, corpora, matrix({"q1"}, 384), matrix({"i1"}, 512));
  EXPECT_EQ(report.defects.size(), 1u);
  EXPECT_EQ(report.count(DefectKind::DimMismatch), 1u);
}

TEST(ValidateDataset, ReportsEveryCrossReferenceProblem) {
  const std::vector<ImageAnnotation> annotations = {image("i1", {"dog.n.01"}), image("i1", {"dog.n.01"})};
  const std::vector<QueryRecord> queries = {{"q1", "i1", "a dog"}, {"q2", "i1", "a dog"}};
  const std::vector<CorpusRecord> corpora = {{"i1", {"dog"}}, {"i7", {"x"}}};
  const auto report =
      validate_dataset(annotations, queries, corpora, matrix({"q1", "qx"}, 2), matrix({"i1", "i7"}, 2));
  EXPECT_EQ(report.count(DefectKind::DuplicateId), 1u);
  EXPECT_EQ(report.count(DefectKind::DanglingCorpus), 1u);
  EXPECT_EQ(report.count(DefectKind::DanglingEmbeddingId), 1u);
  EXPECT_EQ(report.count(DefectKind::MissingEmbedding), 1u);
}
