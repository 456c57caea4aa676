#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace flakyfix {

enum class TokenKind { Keyword, Identifier, Literal, Operator, Separator };

std::string_view token_kind_name(TokenKind k);

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t offset = 0;  // byte offset into the lexed source
  std::size_t line = 1;    // 1-based line of the first byte

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
};

// Lexer output. Token texts are never empty; joining them with single
// spaces and re-lexing reproduces the same kinds and texts.
struct TokenSeq {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::vector<std::string> texts() const;
  std::string joined() const;
};

bool is_java_keyword(std::string_view word);

/// Total Java lexer: comments are dropped, string/char/text-block literals
/// kept whole, anything unrecognized becomes a one-character operator.
TokenSeq tokenize_java(std::string_view code);

}  // namespace flakyfix
