#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flakyfix/java_lexer.hpp"

namespace flakyfix {

// Parse tree over the test-code subset of Java. Internal nodes carry a kind
// ("unit", "method", "block", "if", "try", "catch", "call", ...); leaves carry
// exactly one source token. Statements the grammar does not cover become
// "raw_statement" nodes whose leaves are the statement's tokens, so the leaf
// sequence of a tree is always the full token stream of the input.
struct AstNode {
  std::string kind;
  std::optional<Token> token;  // set iff this is a leaf
  std::vector<AstNode> children;

  bool is_leaf() const { return token.has_value(); }
  std::size_t node_count() const;
  std::size_t internal_count() const;
  /// Leaf tokens in source order.
  void collect_tokens(std::vector<Token>& out) const;
};

struct JavaAst {
  AstNode root;  // kind "unit"
};

/// Never throws; unparseable input degrades to raw_statement nodes.
JavaAst parse_java_subset(std::string_view code);
JavaAst parse_java_subset(const TokenSeq& tokens);

/// S-expression of a subtree with identifiers and literals abstracted to
/// their token kind, e.g. "(call identifier (args (expr literal)))".
std::string serialize_abstract(const AstNode& node);

/// Serializations of every internal node's subtree, in pre-order.
std::vector<std::string> abstract_subtrees(const JavaAst& ast);

/// Fraction of the reference's subtrees (multiset, clipped) also present
/// among the candidate's subtrees.
double ast_match(const JavaAst& candidate, const JavaAst& reference);
double ast_match(std::string_view candidate_code, std::string_view reference_code);

/// Indented debug rendering.
std::string render_tree(const AstNode& node);

}  // namespace flakyfix
