#include <gtest/gtest.h>

#include <set>

#include "flakyfix/dataflow.hpp"
#include "oracles.hpp"

using namespace flakyfix;

namespace {

using Key = oracle::EdgeKey;

std::set<Key> keys(std::string_view code) {
  std::set<Key> out;
  for (const auto& e : extract_dataflow(code).edges) out.insert(e.key());
  return out;
}

std::vector<std::string> originals(std::string_view code) {
  std::vector<std::string> out;
  for (const auto& v : extract_dataflow(code).variables) out.push_back(v.original);
  return out;
}

}  // namespace

// Edge sets below were worked out by hand from the def/use rules.
TEST(Dataflow, ReassignmentStartsANewDefinition) {
  const std::string code = "int f() { int a = 1; int b = a + 2; b = a * b; return b; }";
  EXPECT_EQ(originals(code), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(keys(code), (std::set<Key>{{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 1, 0}}));
}

TEST(Dataflow, ParametersAndCompoundAssignment) {
  const std::string code = "void g(int x, int y) { int s = x; s += y; use(s); }";
  EXPECT_EQ(originals(code), (std::vector<std::string>{"x", "y", "s"}));
  EXPECT_EQ(keys(code), (std::set<Key>{{0, 0, 0}, {2, 0, 0}, {1, 0, 0}, {2, 1, 0}}));
}

TEST(Dataflow, EnhancedForAndIncrement) {
  const std::string code =
      "void h(List<String> items) { int n = 0; for (String it : items) { n++; log(it); } check(n); }";
  EXPECT_EQ(keys(code), (std::set<Key>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 1, 0}}));
}

TEST(Dataflow, MemberAccessIsNotARead) {
  const std::string code = "void k() { Foo foo = new Foo(); foo.bar = 3; int z = foo.baz(); System.out.println(z); }";
  EXPECT_EQ(keys(code), (std::set<Key>{{0, 0, 0}, {0, 0, 1}, {1, 0, 0}}));
}

TEST(Dataflow, CatchParameter) {
  const std::string code =
      "void m() { int base = 2; try { call(base); } catch (Exception e) { handle(e, base); } }";
  EXPECT_EQ(keys(code), (std::set<Key>{{0, 0, 0}, {1, 0, 0}, {0, 0, 1}}));
}

TEST(Dataflow, LambdaParameter) {
  const std::string code = "void q() { int base = 2; Function<Integer, Integer> f = v -> v * base; f.apply(1); }";
  EXPECT_EQ(originals(code), (std::vector<std::string>{"base", "v", "f"}));
  EXPECT_EQ(keys(code), (std::set<Key>{{1, 0, 0}, {0, 0, 0}, {2, 0, 0}}));
}

TEST(Dataflow, NoReadsNoEdges) {
  EXPECT_TRUE(keys("void n() { call(); }").empty());
  EXPECT_TRUE(keys("void t() { x = 1; }").empty());
  EXPECT_EQ(originals("void t() { x = 1; }"), std::vector<std::string>{"x"});
}

TEST(Dataflow, NormalizedNamesFollowDefinitionOrder) {
  const auto g = extract_dataflow("void f() { int zeta = 1; int alpha = zeta; }");
  ASSERT_EQ(g.variables.size(), 2u);
  EXPECT_EQ(g.variables[0].normalized, "var_0");
  EXPECT_EQ(g.variables[1].normalized, "var_1");
}

TEST(DataflowMatch, RenamingDoesNotMatter) {
  const auto m = dataflow_match("int f() { int p = 1; int q = p + 2; q = p * q; return q; }",
                                "int f() { int a = 1; int b = a + 2; b = a * b; return b; }");
  EXPECT_DOUBLE_EQ(m.score, 1.0);
  EXPECT_FALSE(m.reference_has_no_edges);
}

TEST(DataflowMatch, AgreesWithSetOracle) {
  const std::pair<std::string, std::string> pairs[] = {
      {"int f() { int a = 1; return a; }", "int f() { int a = 1; int b = a + 2; b = a * b; return b; }"},
      {"void g(int x, int y) { use(x); }", "void g(int x, int y) { int s = x; s += y; use(s); }"},
      {"void k() { Foo foo = new Foo(); foo.baz(); }", "void k() { Foo foo = new Foo(); foo.bar = 3; int z = foo.baz(); System.out.println(z); }"},
      {"void z() { }", "void m() { int base = 2; try { call(base); } catch (Exception e) { handle(e, base); } }"},
  };
  for (const auto& [c, r] : pairs) {
    const double expected = oracle::dataflow_match(keys(c), keys(r));
    EXPECT_NEAR(dataflow_match(c, r).score, expected, 1e-15) << c;
  }
  // First pair by hand: candidate has only (0,0,0) of the four reference edges.
  EXPECT_DOUBLE_EQ(dataflow_match(pairs[0].first, pairs[0].second).score, 0.25);
}

TEST(DataflowMatch, EmptyReferenceScoresOneAndIsFlagged) {
  const auto m = dataflow_match("int f() { int a = 1; return a; }", "void n() { call(); }");
  EXPECT_DOUBLE_EQ(m.score, 1.0);
  EXPECT_TRUE(m.reference_has_no_edges);
}
