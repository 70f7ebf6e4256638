#include <gtest/gtest.h>

#include <random>

#include "asb/combiner.hpp"

using namespace asb;

TEST(Combine, UnionTruthTable) {
  EXPECT_EQ(combine(Label::kNormal, Label::kNormal), Label::kNormal);
  EXPECT_EQ(combine(Label::kNormal, Label::kAntisocial), Label::kAntisocial);
  EXPECT_EQ(combine(Label::kAntisocial, Label::kNormal), Label::kAntisocial);
  EXPECT_EQ(combine(Label::kAntisocial, Label::kAntisocial), Label::kAntisocial);
  EXPECT_EQ(combine(Label::kNormal, Label::kUnscored), Label::kNormal);
  EXPECT_EQ(combine(Label::kAntisocial, Label::kUnscored), Label::kAntisocial);
  EXPECT_THROW(combine(Label::kUnscored, Label::kNormal), ValidationError);
}

TEST(Combine, MakeAnnotation) {
  const auto a = make_annotation("1", {"kungflu"}, 0.5, 0.5);
  EXPECT_EQ(a.lexicon_label, Label::kAntisocial);
  EXPECT_EQ(a.toxicity_label, Label::kNormal);
  EXPECT_EQ(a.combined_label, Label::kAntisocial);

  const auto b = make_annotation("2", {}, 0.5 + 1e-9, 0.5);
  EXPECT_EQ(b.lexicon_label, Label::kNormal);
  EXPECT_EQ(b.toxicity_label, Label::kAntisocial);
  EXPECT_EQ(b.combined_label, Label::kAntisocial);

  const auto c = make_annotation("3", {}, std::nullopt, 0.5);
  EXPECT_EQ(c.toxicity_label, Label::kUnscored);
  EXPECT_EQ(c.combined_label, Label::kNormal);
}

TEST(Combine, JsonRoundTripAndValidation) {
  const std::vector<AnnotationRecord> recs = {make_annotation("a", {"x", "y z"}, 0.9, 0.5),
                                              make_annotation("b", {}, std::nullopt, 0.5)};
  for (const auto& r : recs) EXPECT_EQ(annotation_from_json(to_json(r)), r);
  EXPECT_TRUE(to_json(recs[1])["toxicity_score"].is_null());

  auto bad = to_json(recs[1]);
  bad["combined_label"] = "antisocial";
  EXPECT_THROW(annotation_from_json(bad), ValidationError);
  EXPECT_THROW(annotation_from_json(nlohmann::json{{"id", "q"}}), ValidationError);
}

TEST(Summary, CountsFromRecords) {
  const std::vector<AnnotationRecord> recs = {
      make_annotation("1", {"t"}, 0.9, 0.5), make_annotation("2", {"t"}, 0.1, 0.5),
      make_annotation("3", {}, 0.9, 0.5),    make_annotation("4", {}, 0.1, 0.5),
      make_annotation("5", {}, std::nullopt, 0.5)};
  const auto t = summarize(recs);
  EXPECT_EQ(t.total, 5u);
  EXPECT_EQ(t.unscored, 1u);
  EXPECT_EQ(t.lexicon, (MethodCounts{2, 3}));
  EXPECT_EQ(t.toxicity, (MethodCounts{2, 3}));
  EXPECT_EQ(t.combined, (MethodCounts{3, 2}));
  EXPECT_EQ(t.overlap(), 1u);
  EXPECT_TRUE(t.consistent());
  EXPECT_EQ(summary_csv(t), "method,antisocial,normal\nlexicon,2,3\ntoxicity,2,3\ncombined,3,2\n");

  auto dup = recs;
  dup.push_back(recs[0]);
  EXPECT_THROW(summarize(dup), ValidationError);
}

TEST(Summary, InclusionExclusionHoldsForRandomLabelings) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    std::vector<AnnotationRecord> recs;
    const int n = static_cast<int>(rng() % 300);
    const double p_lex = static_cast<double>(rng() % 100) / 100.0;
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> terms;
      if (static_cast<double>(rng() % 100) / 100.0 < p_lex) terms.push_back("t");
      std::optional<double> score;
      if (rng() % 10) score = static_cast<double>(rng() % 1001) / 1000.0;
      recs.push_back(make_annotation(std::to_string(i), terms, score, 0.5));
    }
    const auto t = summarize(recs);
    ASSERT_TRUE(t.consistent());
    std::uint64_t both = 0;
    for (const auto& r : recs) {
      both += r.lexicon_label == Label::kAntisocial && r.toxicity_label == Label::kAntisocial;
    }
    ASSERT_EQ(t.overlap(), both);

    // Merging partial summaries equals summarizing the whole.
    const auto mid = recs.size() / 2;
    auto merged = summarize(std::span(recs).first(mid));
    merged += summarize(std::span(recs).subspan(mid));
    ASSERT_EQ(merged, t);
  }
}

TEST(Summary, PublishedCountsAreConsistent) {
  const std::uint64_t total = 40'385'257;
  SummaryTable t;
  t.total = total;
  t.lexicon = {1'169'755, 39'215'502};
  t.toxicity = {2'383'316, 38'001'941};
  t.combined = {2'659'585, 37'725'672};
  EXPECT_TRUE(t.consistent());
  EXPECT_EQ(t.overlap(), 893'486u);
  EXPECT_LE(std::max(t.lexicon.antisocial, t.toxicity.antisocial), t.combined.antisocial);
  EXPECT_LE(t.combined.antisocial, 3'553'071u);
  const double share = static_cast<double>(t.combined.antisocial) / static_cast<double>(total);
  EXPECT_NEAR(share, 0.066, 0.001);

  t.combined = {2'000'000, total - 2'000'000};
  EXPECT_FALSE(t.consistent());
}
