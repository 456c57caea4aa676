#include <gtest/gtest.h>

#include "flakyfix/java_ast.hpp"
#include "flakyfix/java_lexer.hpp"
#include "oracles.hpp"

using namespace flakyfix;

namespace {

std::vector<std::string> kinds(const TokenSeq& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) out.emplace_back(token_kind_name(t.kind));
  return out;
}

AstNode leaf(TokenKind k, std::string text) {
  AstNode n;
  n.token = Token{k, std::move(text)};
  return n;
}

AstNode node(std::string kind, std::vector<AstNode> children) {
  AstNode n;
  n.kind = std::move(kind);
  n.children = std::move(children);
  return n;
}

}  // namespace

TEST(Lexer, TokenKinds) {
  const auto s = tokenize_java("int x = 42; // note\nString s = \"a b\"; x >>>= 1;");
  EXPECT_EQ(s.texts(), (std::vector<std::string>{"int", "x", "=", "42", ";", "String", "s", "=", "\"a b\"", ";", "x",
                                                 ">>>=", "1", ";"}));
  EXPECT_EQ(kinds(s)[0], "keyword");
  EXPECT_EQ(kinds(s)[1], "identifier");
  EXPECT_EQ(kinds(s)[3], "literal");
  EXPECT_EQ(kinds(s)[4], "separator");
  EXPECT_EQ(s.tokens[5].line, 2u);
}

TEST(Lexer, CommentsTextBlocksAndNumbers) {
  const auto s = tokenize_java("/* a\n b */ x = \"\"\"\nhi\n\"\"\" + 1.5e-3f + 0x1F + 'c' + true;");
  EXPECT_EQ(s.texts(), (std::vector<std::string>{"x", "=", "\"\"\"\nhi\n\"\"\"", "+", "1.5e-3f", "+", "0x1F", "+", "'c'",
                                                 "+", "true", ";"}));
  EXPECT_EQ(s.tokens[0].line, 2u);
}

TEST(Lexer, MethodReferenceAndLambda) {
  EXPECT_EQ(tokenize_java("xs.forEach(System.out::println); f = a -> a;").texts(),
            (std::vector<std::string>{"xs", ".", "forEach", "(", "System", ".", "out", "::", "println", ")", ";", "f",
                                      "=", "a", "->", "a", ";"}));
}

TEST(Lexer, JoinedRelexesIdentically) {
  const std::string code = "@Test public void t() { Map<String, List<Integer>> m = new HashMap<>(); m.put(\"k\", null); }";
  const auto a = tokenize_java(code);
  const auto b = tokenize_java(a.joined());
  EXPECT_EQ(a.texts(), b.texts());
  EXPECT_EQ(kinds(a), kinds(b));
}

TEST(Lexer, UnterminatedStringDegrades) {
  const auto s = tokenize_java("x = \"oops\ny;");
  EXPECT_FALSE(s.empty());
  EXPECT_EQ(s.tokens[2].text, "\"");
}

TEST(Parser, LeavesAreTheTokenStream) {
  const std::string codes[] = {
      "@Test(timeout = 100) public void t() throws Exception { int[] a = {1, 2}; for (int i = 0; i < a.length; i++) "
      "{ if (a[i] > 0) { sum += a[i]; } else continue; } }",
      "void t() { try (Stream<String> s = open()) { s.forEach(x -> log(x)); } catch (IOException | RuntimeException e) "
      "{ throw new IllegalStateException(e); } finally { close(); } }",
      "class A { int f; void g() { do { f--; } while (f > 0); } }",
      "} } garbage ( [ ; ) void",
      "",
  };
  for (const auto& code : codes) {
    std::vector<Token> leaves;
    parse_java_subset(code).root.collect_tokens(leaves);
    const auto tokens = tokenize_java(code);
    ASSERT_EQ(leaves.size(), tokens.size()) << code;
    for (std::size_t i = 0; i < leaves.size(); ++i) EXPECT_EQ(leaves[i].text, tokens.tokens[i].text);
  }
}

TEST(Parser, StatementShape) {
  const auto ast = parse_java_subset("int a = b + 1;");
  EXPECT_EQ(serialize_abstract(ast.root),
            "(unit (local_var (type int) (declarator identifier = (expr identifier + literal)) ;))");
}

TEST(Parser, MethodShape) {
  const auto ast = parse_java_subset("void f() { return; }");
  ASSERT_EQ(ast.root.children.size(), 1u);
  EXPECT_EQ(ast.root.children[0].kind, "method");
  EXPECT_NE(serialize_abstract(ast.root).find("(return return ;)"), std::string::npos);
}

TEST(AstMatch, IdenticalAndRenamedCodeScoreOne) {
  EXPECT_DOUBLE_EQ(ast_match("void f() { int a = g(1); }", "void f() { int a = g(1); }"), 1.0);
  EXPECT_DOUBLE_EQ(ast_match("void f() { int zz = h(7); }", "void f() { int a = g(1); }"), 1.0);
  EXPECT_LT(ast_match("void f() { a(); }", "void f() { if (x) { a(); } }"), 1.0);
}

TEST(AstMatch, EmptyReferenceScoresOne) {
  JavaAst empty;
  empty.root.kind = "unit";
  empty.root.children.clear();
  // The unit node itself is the only subtree; an empty candidate matches it.
  EXPECT_DOUBLE_EQ(ast_match(parse_java_subset(""), parse_java_subset("")), 1.0);
  EXPECT_DOUBLE_EQ(oracle::ast_match(empty.root, empty.root), 1.0);
}

TEST(AstMatch, HandBuiltTreesMatchEnumerationOracle) {
  using K = TokenKind;
  // ref: (unit (call a (args (expr 1))) (call a (args (expr 1))))
  auto call = [&](std::string name, std::string lit) {
    return node("call", {leaf(K::Identifier, name), node("args", {leaf(K::Separator, "("),
                                                                  node("expr", {leaf(K::Literal, lit)}),
                                                                  leaf(K::Separator, ")")})});
  };
  JavaAst ref{node("unit", {call("a", "1"), call("a", "1")})};
  JavaAst one{node("unit", {call("b", "2")})};
  JavaAst other{node("unit", {node("if", {leaf(K::Keyword, "if"), call("a", "1")})})};
  // Hand count: ref has 7 subtrees (unit + 2 x (call, args, expr)); `one`
  // supplies one call/args/expr triple, so 3 of 7 match.
  EXPECT_NEAR(ast_match(one, ref), 3.0 / 7.0, 1e-15);
  EXPECT_NEAR(oracle::ast_match(one.root, ref.root), 3.0 / 7.0, 1e-15);
  EXPECT_NEAR(ast_match(other, ref), oracle::ast_match(other.root, ref.root), 1e-15);
  EXPECT_NEAR(ast_match(ref, one), oracle::ast_match(ref.root, one.root), 1e-15);
}

TEST(AstMatch, ParsedSnippetsMatchEnumerationOracle) {
  const std::pair<std::string, std::string> pairs[] = {
      {"int a = b + 1;", "int a = b + 2;"},
      {"x = f(1, 2);", "x = f(2);"},
      {"if (a) b(); else c();", "if (a) { b(); }"},
      {"return new Foo(x);", "return x;"},
      {"for (int i = 0; i < n; i++) s += i;", "while (i < n) i++;"},
      {"try { a(); } catch (E e) { }", "a();"},
  };
  for (const auto& [c, r] : pairs) {
    const auto ca = parse_java_subset(c), ra = parse_java_subset(r);
    EXPECT_LE(ra.root.node_count(), 30u) << r;
    EXPECT_NEAR(ast_match(ca, ra), oracle::ast_match(ca.root, ra.root), 1e-15) << c << " vs " << r;
  }
}
