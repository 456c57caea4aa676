#include <gtest/gtest.h>

#include "flakyfix/error.hpp"
#include "flakyfix/labeler.hpp"

using namespace flakyfix;

namespace {

const std::string kFixtures = FLAKYFIX_FIXTURES;

LabelSet labels_of(std::string_view a, std::string_view b) { return label_diff(a, b).labels; }

}  // namespace

TEST(Labeler, CatalogMatchesExpectedLabels) {
  const Corpus catalog = load_corpus(kFixtures + "/labeler_catalog.jsonl");
  ASSERT_GE(catalog.size(), 26u);
  for (const auto& r : catalog) {
    ASSERT_TRUE(r.known_labels) << r.id;
    EXPECT_EQ(label_record(r).labels, *r.known_labels)
        << r.id << ": got " << label_record(r).labels.display_names();
  }
}

TEST(Labeler, CatalogCoversEveryCategoryTwice) {
  const auto labeling = label_corpus(load_corpus(kFixtures + "/labeler_catalog.jsonl"));
  for (FixCategory c : kAllCategories) EXPECT_GE(labeling.counts.at(c), 2u) << category_id(c);
}

TEST(Labeler, HashMapToLinkedHashMap) {
  const auto r = label_diff("Map<String, Integer> m = new HashMap<>();", "Map<String, Integer> m = new LinkedHashMap<>();");
  EXPECT_EQ(r.labels, LabelSet({FixCategory::ChangeDataStructure}));
  ASSERT_FALSE(r.matches.empty());
  const auto& m = r.matches.front();
  EXPECT_TRUE(m.matched_deleted.contains(MatchedToken{1, "HashMap"}));
  EXPECT_TRUE(m.matched_added.contains(MatchedToken{1, "LinkedHashMap"}));
}

TEST(Labeler, MatchingIsCaseInsensitive) {
  EXPECT_EQ(labels_of("x = new HASHMAP<>();", "x = new LINKEDHASHMAP<>();"), LabelSet({FixCategory::ChangeDataStructure}));
}

TEST(Labeler, AssertionSwapWithTryCatchIsMultiLabel) {
  const std::string before = "void t() {\n  assertEquals(expected, json);\n}";
  const std::string after =
      "void t() {\n  try {\n    assertJSONEqual(expected, json);\n  } catch (JSONException e) {\n    fail();\n  }\n}";
  EXPECT_EQ(labels_of(before, after), LabelSet({FixCategory::ChangeAssertion, FixCategory::HandleException}));
}

TEST(Labeler, ContainsExactlyInAnyOrder) {
  EXPECT_EQ(labels_of("assertThat(xs).containsExactly(1, 2);", "assertThat(xs).containsExactlyInAnyOrder(1, 2);"),
            LabelSet({FixCategory::ChangeCondition}));
}

TEST(Labeler, SameAssertionOnBothSidesIsNotAChange) {
  EXPECT_EQ(labels_of("assertEquals(a, b);", "assertEquals(b, a);"), LabelSet({FixCategory::ReorderParameters}));
}

TEST(Labeler, UnmatchedChangeIsMiscellaneous) {
  EXPECT_EQ(labels_of("int x = f();\nuse(x);", "int y = f();\nuse(y);"), LabelSet::miscellaneous());
}

TEST(Labeler, ShortLiteralChangeIsNotAFormatChange) {
  EXPECT_EQ(labels_of("p.parse(\"abc\");", "p.parse(\"abd\");"), LabelSet::miscellaneous());
  EXPECT_EQ(labels_of("p.parse(\"2020-01-01\");", "p.parse(\"2020/01/01\");"), LabelSet({FixCategory::ChangeDataFormat}));
}

TEST(Labeler, MinimumLiteralLengthIsConfigurable) {
  RuleSet rules = RuleSet::defaults();
  rules.set_min_literal_length(3);
  EXPECT_EQ(label_diff("p.parse(\"abc\");", "p.parse(\"abd\");", rules).labels, LabelSet({FixCategory::ChangeDataFormat}));
}

TEST(Labeler, TimeoutAlreadyPresentDoesNotCount) {
  EXPECT_EQ(labels_of("@Test(timeout = 100)", "@Test(timeout = 5000)"), LabelSet::miscellaneous());
}

TEST(Labeler, StaticCallOnExcludedTypeIsIgnored) {
  EXPECT_EQ(labels_of("int a = 1;", "int a = Math.abs(1);"), LabelSet::miscellaneous());
  EXPECT_EQ(labels_of("int a = 1;", "int a = Clock.freeze(1);"), LabelSet({FixCategory::CallStaticMethod}));
  // Lowercase receivers are instances, not types.
  EXPECT_EQ(labels_of("int a = 1;", "int a = clock.freeze(1);"), LabelSet::miscellaneous());
}

TEST(Labeler, Errors) {
  EXPECT_THROW(label_diff("same", "same"), Error);
  TestRecord r;
  r.id = "no-fix";
  r.flaky_code = "x";
  try {
    label_record(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("no-fix"), std::string::npos);
  }
}

TEST(Labeler, LabelCorpusCountsAndUnlabeled) {
  Corpus c(2);
  c[0].id = "a";
  c[0].flaky_code = "s = new HashSet<>();";
  c[0].fixed_code = "s = new LinkedHashSet<>();";
  c[1].id = "b";
  c[1].flaky_code = "x";
  const auto out = label_corpus(c);
  EXPECT_EQ(out.counts.size(), kCategoryCount);
  EXPECT_EQ(out.counts.at(FixCategory::ChangeDataStructure), 1u);
  EXPECT_EQ(out.unlabeled_ids, std::vector<std::string>{"b"});
  EXPECT_FALSE(out.corpus[1].known_labels);
}

TEST(Labeler, GoldHarnessFindsPlantedOverLabel) {
  const auto ev = evaluate_labeler(load_corpus(kFixtures + "/labeler_gold.jsonl"));
  EXPECT_EQ(ev.total, 20u);
  EXPECT_EQ(ev.correct, 19u);
  EXPECT_DOUBLE_EQ(ev.accuracy, 0.95);
  ASSERT_EQ(ev.mismatches.size(), 1u);
  EXPECT_EQ(ev.mismatches[0].id, "gold-20");
  EXPECT_TRUE(ev.mismatches[0].predicted.contains(FixCategory::ChangeDataStructure));
  EXPECT_GT(ev.mismatches[0].predicted.size(), ev.mismatches[0].gold.size());
}

TEST(Labeler, MissingGoldIsAnError) {
  Corpus c(1);
  c[0].id = "a";
  c[0].flaky_code = "x";
  c[0].fixed_code = "y";
  EXPECT_THROW(evaluate_labeler(c), Error);
}

TEST(RuleSet, RejectsMalformedRules) {
  EXPECT_THROW(RuleSet::parse("{}"), Error);
  EXPECT_THROW(RuleSet::parse(R"({"rules":[{"name":"r","category":"Nope","kind":"token","added":["x"]}]})"), Error);
  EXPECT_THROW(RuleSet::parse(R"({"rules":[{"name":"r","category":"ReorderData","kind":"weird"}]})"), Error);
  EXPECT_THROW(RuleSet::parse(R"({"rules":[{"name":"r","category":"ReorderData","kind":"token"}]})"), Error);
  EXPECT_THROW(RuleSet::parse(R"({"rules":[{"name":"r","category":"Miscellaneous","kind":"token","added":["x"]}]})"),
               Error);
}

TEST(RuleSet, CustomTableIsUsed) {
  const auto rules = RuleSet::parse(R"({"rules":[{"name":"shuffle","category":"ReorderData","kind":"token","added":["shuffle"]}]})");
  EXPECT_EQ(label_diff("a();", "a();\nshuffle(xs);", rules).labels, LabelSet({FixCategory::ReorderData}));
  EXPECT_EQ(label_diff("a();", "a();\nxs.clear();", rules).labels, LabelSet::miscellaneous());
}

TEST(RuleSet, BundledTableLoads) { EXPECT_GE(RuleSet::defaults().rules().size(), 12u); }
