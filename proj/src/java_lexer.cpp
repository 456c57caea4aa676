#include "flakyfix/java_lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace flakyfix {
namespace {

constexpr std::array<std::string_view, 50> kKeywords = {
    "abstract",   "assert",       "boolean",   "break",      "byte",      "case",
    "catch",      "char",         "class",     "const",      "continue",  "default",
    "do",         "double",       "else",      "enum",       "extends",   "final",
    "finally",    "float",        "for",       "goto",       "if",        "implements",
    "import",     "instanceof",   "int",       "interface",  "long",      "native",
    "new",        "package",      "private",   "protected",  "public",    "return",
    "short",      "static",       "strictfp",  "super",      "switch",    "synchronized",
    "this",       "throw",        "throws",    "transient",  "try",       "void",
    "volatile",   "while",
};

// Longest first so maximal munch is a linear scan.
constexpr std::array<std::string_view, 26> kMultiCharOps = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",   ">=",  "+=",  "-=",  "*=",  "/=", "&=", "|=", "^=", "%=", "<<", ">>", "",
};

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}
bool is_ident_part(unsigned char c) { return is_ident_start(c) || std::isdigit(c); }

bool is_separator(std::string_view op) {
  static constexpr std::array<std::string_view, 12> kSeps = {"(", ")", "{", "}", "[", "]",
                                                             ";", ",", ".", "...", "@", "::"};
  return std::find(kSeps.begin(), kSeps.end(), op) != kSeps.end();
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  TokenSeq run() {
    TokenSeq out;
    while (pos_ < src_.size()) {
      const unsigned char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
      } else if (starts_with("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (starts_with("/*")) {
        skip_block_comment();
      } else if (starts_with("\"\"\"")) {
        lex_text_block(out);
      } else if (c == '"' || c == '\'') {
        lex_quoted(out, static_cast<char>(c));
      } else if (std::isdigit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                                     std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number(out);
      } else if (is_ident_start(c)) {
        lex_word(out);
      } else {
        lex_operator(out);
      }
    }
    return out;
  }

 private:
  bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void emit(TokenSeq& out, TokenKind kind, std::size_t begin, std::size_t start_line) {
    out.tokens.push_back({kind, std::string(src_.substr(begin, pos_ - begin)), begin, start_line});
  }

  void skip_block_comment() {
    pos_ += 2;
    while (pos_ < src_.size() && !starts_with("*/")) {
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    pos_ = std::min(src_.size(), pos_ + 2);
  }

  void lex_text_block(TokenSeq& out) {
    const std::size_t begin = pos_, start_line = line_;
    std::size_t p = pos_ + 3;
    std::size_t lines = 0;
    while (p < src_.size() && src_.substr(p, 3) != "\"\"\"") {
      if (src_[p] == '\\') ++p;
      else if (src_[p] == '\n') ++lines;
      ++p;
    }
    if (p >= src_.size()) {
      // Unterminated: fall back to the plain string rule for the first quote.
      lex_quoted(out, '"');
      return;
    }
    pos_ = p + 3;
    line_ += lines;
    emit(out, TokenKind::Literal, begin, start_line);
  }

  void lex_quoted(TokenSeq& out, char quote) {
    const std::size_t begin = pos_;
    std::size_t p = pos_ + 1;
    while (p < src_.size() && src_[p] != quote && src_[p] != '\n') {
      if (src_[p] == '\\' && p + 1 < src_.size() && src_[p + 1] != '\n') ++p;
      ++p;
    }
    if (p >= src_.size() || src_[p] != quote) {
      pos_ = begin + 1;
      emit(out, TokenKind::Operator, begin, line_);
      return;
    }
    pos_ = p + 1;
    emit(out, TokenKind::Literal, begin, line_);
  }

  void lex_number(TokenSeq& out) {
    const std::size_t begin = pos_;
    const bool hex = starts_with("0x") || starts_with("0X");
    auto exponent_char = [&](char ch) {
      return hex ? (ch == 'p' || ch == 'P') : (ch == 'e' || ch == 'E');
    };
    while (pos_ < src_.size()) {
      const unsigned char c = src_[pos_];
      if (std::isalnum(c) || c == '_') {
        ++pos_;
        if (exponent_char(static_cast<char>(c)) && pos_ + 1 < src_.size() &&
            (src_[pos_] == '+' || src_[pos_] == '-') &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
          ++pos_;
        }
      } else if (c == '.' && src_.substr(begin, pos_ - begin).find('.') == std::string_view::npos &&
                 !(pos_ + 1 < src_.size() && is_ident_start(src_[pos_ + 1]) &&
                   !exponent_char(src_[pos_ + 1]) && src_[pos_ + 1] != 'f' &&
                   src_[pos_ + 1] != 'F' && src_[pos_ + 1] != 'd' && src_[pos_ + 1] != 'D')) {
        ++pos_;
      } else {
        break;
      }
    }
    emit(out, TokenKind::Literal, begin, line_);
  }

  void lex_word(TokenSeq& out) {
    const std::size_t begin = pos_;
    while (pos_ < src_.size() && is_ident_part(src_[pos_])) ++pos_;
    const std::string_view word = src_.substr(begin, pos_ - begin);
    TokenKind kind = TokenKind::Identifier;
    if (word == "true" || word == "false" || word == "null") kind = TokenKind::Literal;
    else if (is_java_keyword(word)) kind = TokenKind::Keyword;
    emit(out, kind, begin, line_);
  }

  void lex_operator(TokenSeq& out) {
    const std::size_t begin = pos_;
    std::size_t len = 1;
    for (auto op : kMultiCharOps) {
      if (!op.empty() && starts_with(op)) {
        len = op.size();
        break;
      }
    }
    pos_ += len;
    const std::string_view text = src_.substr(begin, len);
    emit(out, is_separator(text) ? TokenKind::Separator : TokenKind::Operator, begin, line_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

std::string_view token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Literal: return "literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Separator: return "separator";
  }
  return "operator";
}

bool is_java_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<std::string> TokenSeq::texts() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

std::string TokenSeq::joined() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

TokenSeq tokenize_java(std::string_view code) { return Lexer(code).run(); }

}  // namespace flakyfix
