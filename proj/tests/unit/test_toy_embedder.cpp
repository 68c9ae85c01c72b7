#include <gtest/gtest.h>

#include <cmath>

#include "xrank/error.hpp"
#include "xrank/ranker.hpp"
#include "xrank/text.hpp"
#include "xrank/toy_embedder.hpp"

using namespace xrank;

TEST(ToyEmbedder, SentenceVectorsAreUnitLength) {
  const ToyEmbedder e;
  const auto v = e.embed_sentence("A zebra grazing in a field.");
  double n = 0;
  for (double x : v) n += x * x;
  EXPECT_NEAR(n, 1.0, 1e-12);
  EXPECT_EQ(v.size(), 256u);
}

TEST(ToyEmbedder, CaseInsensitiveAndDeterministic) {
  const ToyEmbedder e(64, 3);
  EXPECT_EQ(e.embed_sentence("Red Bus"), e.embed_sentence("red bus"));
  EXPECT_EQ(ToyEmbedder(64, 3).embed_sentence("red bus"), e.embed_sentence("red bus"));
  EXPECT_NE(ToyEmbedder(64, 4).embed_sentence("red bus"), e.embed_sentence("red bus"));
}

TEST(ToyEmbedder, DuplicateSentenceEqualsSingle) {
  const ToyEmbedder e;
  const std::vector<std::string> once = {"a dog on grass"};
  const std::vector<std::string> twice = {"a dog on grass", "a dog on grass"};
  const auto a = e.embed(once), b = e.embed(twice);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(ToyEmbedder, TwoSentencesAverage) {
  const ToyEmbedder e;
  const std::vector<std::string> both = {"a dog", "a red bus"};
  const auto v = e.embed(both);
  const auto v1 = e.embed_sentence("a dog"), v2 = e.embed_sentence("a red bus");
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], (v1[i] + v2[i]) / 2, 1e-15);
}

TEST(ToyEmbedder, DisjointTokensAreOrthogonal) {
  const ToyEmbedder e;
  // Bucket check for the chosen tokens: no collisions at dim 256, seed 0.
  std::set<std::size_t> buckets;
  for (auto t : {"zebra", "grazing", "field", "red", "bus", "street"}) buckets.insert(e.bucket_of(t));
  ASSERT_EQ(buckets.size(), 6u);
  const auto v1 = e.embed_sentence("zebra grazing field");
  const auto v2 = e.embed_sentence("red bus street");
  EXPECT_DOUBLE_EQ(ranker::cosine_similarity(v1, v2), 0.0);
}

TEST(ToyEmbedder, EmptyTextAndBadDim) {
  const ToyEmbedder e;
  const std::vector<std::string> blank = {"", " ... "};
  try {
    e.embed(blank);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::EmptyText);
  }
  const std::vector<std::string> mixed = {"", "a dog"};
  EXPECT_EQ(e.embed(mixed), e.embed_sentence("a dog"));
  EXPECT_THROW(ToyEmbedder(0), Error);
}

TEST(ToyEmbedder, MatricesFollowRecordOrder) {
  const ToyEmbedder e(32);
  const std::vector<QueryRecord> qs = {{"q2", "i", "a cat"}, {"q1", "i", "a dog"}};
  const auto m = e.embed_queries(qs);
  EXPECT_EQ(m.ids(), (std::vector<std::string>{"q2", "q1"}));
  EXPECT_EQ(m.dim(), 32u);
  const std::vector<CorpusRecord> cs = {{"i1", {"a cat", "on a mat"}}};
  const auto c = e.embed_corpora(cs);
  const auto direct = e.embed(cs[0].sentences);
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_EQ(c.row(0)[i], direct[i]);
}
