#include "flakyfix/java_ast.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace flakyfix {
namespace {

constexpr std::array<std::string_view, 8> kPrimitiveTypes = {
    "int", "long", "short", "byte", "char", "boolean", "float", "double"};

constexpr std::array<std::string_view, 12> kModifiers = {
    "public", "private",      "protected", "static",    "final",    "abstract",
    "native", "synchronized", "transient", "volatile",  "strictfp", "default"};

constexpr std::array<std::string_view, 12> kAssignOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="};

template <std::size_t N>
bool one_of(std::string_view s, const std::array<std::string_view, N>& set) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

AstNode leaf(const Token& t) { return AstNode{"leaf", t, {}}; }
AstNode node(std::string kind) { return AstNode{std::move(kind), std::nullopt, {}}; }

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : t_(toks) {}

  AstNode parse_unit() {
    AstNode unit = node("unit");
    while (!at_end()) {
      const std::size_t before = p_;
      parse_member(unit, /*in_class=*/false);
      if (p_ == before) unit.children.push_back(raw_one());
    }
    return unit;
  }

 private:
  // --- token helpers -------------------------------------------------------
  bool at_end() const { return p_ >= t_.size(); }
  const Token* peek(std::size_t k = 0) const { return p_ + k < t_.size() ? &t_[p_ + k] : nullptr; }
  bool peek_is(std::string_view text, std::size_t k = 0) const {
    const Token* t = peek(k);
    return t && t->text == text && t->kind != TokenKind::Literal;
  }
  bool peek_kind(TokenKind kind, std::size_t k = 0) const {
    const Token* t = peek(k);
    return t && t->kind == kind;
  }
  AstNode take() { return leaf(t_[p_++]); }
  void take_into(AstNode& n) { n.children.push_back(take()); }
  AstNode raw_one() {
    AstNode r = node("raw_statement");
    take_into(r);
    return r;
  }

  bool is_text_at(std::size_t i, std::string_view text) const {
    return i < t_.size() && t_[i].text == text && t_[i].kind != TokenKind::Literal;
  }

  // Index just past the token matching the opener at `i`, or t_.size().
  std::size_t match_close(std::size_t i, std::string_view open, std::string_view close) const {
    int depth = 0;
    for (std::size_t k = i; k < t_.size(); ++k) {
      if (is_text_at(k, open)) ++depth;
      else if (is_text_at(k, close) && --depth == 0) return k + 1;
    }
    return t_.size();
  }

  // Index past a generic argument list starting at `i` ('<'), or npos.
  std::size_t skip_generics(std::size_t i) const {
    int depth = 0;
    for (std::size_t k = i; k < t_.size(); ++k) {
      const auto& tx = t_[k].text;
      if (t_[k].kind == TokenKind::Literal) return std::string::npos;
      if (tx == "<") ++depth;
      else if (tx == ">") depth -= 1;
      else if (tx == ">>") depth -= 2;
      else if (tx == ">>>") depth -= 3;
      else if (tx == ";" || tx == "{" || tx == "}" || tx == "(" || tx == ")" || tx == "=") {
        return std::string::npos;
      }
      if (depth <= 0) return depth == 0 ? k + 1 : std::string::npos;
    }
    return std::string::npos;
  }

  // Index past a type starting at `i`, or npos when no type starts there.
  std::size_t scan_type(std::size_t i) const {
    if (i >= t_.size()) return std::string::npos;
    const Token& first = t_[i];
    std::size_t k = i;
    if (first.kind == TokenKind::Keyword && one_of(first.text, kPrimitiveTypes)) {
      k = i + 1;
    } else if (first.kind == TokenKind::Identifier) {
      k = i + 1;
      while (true) {
        if (is_text_at(k, "<")) {
          const std::size_t g = skip_generics(k);
          if (g == std::string::npos) return std::string::npos;
          k = g;
        }
        if (is_text_at(k, ".") && k + 1 < t_.size() && t_[k + 1].kind == TokenKind::Identifier) {
          k += 2;
          continue;
        }
        break;
      }
    } else {
      return std::string::npos;
    }
    while (is_text_at(k, "[") && is_text_at(k + 1, "]")) k += 2;
    if (is_text_at(k, "...")) ++k;
    return k;
  }

  // Type followed by a variable name and a declarator terminator.
  bool looks_like_declaration(std::size_t i) const {
    while (i < t_.size() && (is_text_at(i, "final") || is_text_at(i, "@"))) {
      if (is_text_at(i, "@")) {
        i += 2;
        if (is_text_at(i, "(")) i = match_close(i, "(", ")");
      } else {
        ++i;
      }
    }
    const std::size_t k = scan_type(i);
    if (k == std::string::npos || k >= t_.size()) return false;
    if (t_[k].kind != TokenKind::Identifier) return false;
    return is_text_at(k + 1, "=") || is_text_at(k + 1, ";") || is_text_at(k + 1, ",") ||
           is_text_at(k + 1, "[") || is_text_at(k + 1, ":") || is_text_at(k + 1, ")");
  }

  // modifiers/annotations, [type params], type-or-void, name, '('
  bool looks_like_method(std::size_t i, bool in_class) const {
    while (i < t_.size()) {
      if (t_[i].kind == TokenKind::Keyword && one_of(t_[i].text, kModifiers)) {
        ++i;
      } else if (is_text_at(i, "@") && i + 1 < t_.size() && t_[i + 1].text != "interface") {
        i += 2;
        while (is_text_at(i, ".") && i + 1 < t_.size()) i += 2;
        if (is_text_at(i, "(")) i = match_close(i, "(", ")");
      } else {
        break;
      }
    }
    if (is_text_at(i, "<")) {
      i = skip_generics(i);
      if (i == std::string::npos) return false;
    }
    std::size_t name = std::string::npos;
    if (is_text_at(i, "void")) {
      name = i + 1;
    } else {
      const std::size_t k = scan_type(i);
      if (k == std::string::npos) return false;
      // constructor: Name '(' directly (only inside a class body)
      if (in_class && is_text_at(k, "(") && k == i + 1) name = i;
      else name = k;
    }
    if (name >= t_.size() || t_[name].kind != TokenKind::Identifier) return false;
    if (!is_text_at(name + 1, "(")) return false;
    const std::size_t after = match_close(name + 1, "(", ")");
    return is_text_at(after, "{") || is_text_at(after, "throws") || is_text_at(after, ";");
  }

  bool looks_like_type_decl(std::size_t i) const {
    while (i < t_.size()) {
      if (t_[i].kind == TokenKind::Keyword && one_of(t_[i].text, kModifiers)) ++i;
      else if (is_text_at(i, "@") && !is_text_at(i + 1, "interface")) {
        i += 2;
        if (is_text_at(i, "(")) i = match_close(i, "(", ")");
      } else break;
    }
    return is_text_at(i, "class") || is_text_at(i, "interface") || is_text_at(i, "enum") ||
           (is_text_at(i, "@") && is_text_at(i + 1, "interface"));
  }

  // --- members ---------------------------------------------------------------
  void parse_member(AstNode& parent, bool in_class) {
    if (peek_is("@") && !peek_is("interface", 1) && !looks_like_method(p_, in_class) &&
        !looks_like_type_decl(p_) && !looks_like_declaration(p_)) {
      parent.children.push_back(parse_annotation());
      return;
    }
    if (looks_like_type_decl(p_)) {
      parent.children.push_back(parse_type_decl());
    } else if (looks_like_method(p_, in_class)) {
      parent.children.push_back(parse_method());
    } else if (in_class) {
      if (looks_like_field(p_)) parent.children.push_back(parse_field());
      else parent.children.push_back(parse_statement());
    } else {
      parent.children.push_back(parse_statement());
    }
  }

  bool looks_like_field(std::size_t i) const {
    while (i < t_.size() && t_[i].kind == TokenKind::Keyword && one_of(t_[i].text, kModifiers)) ++i;
    return looks_like_declaration(i);
  }

  AstNode parse_field() {
    AstNode n = node("field");
    while (peek_kind(TokenKind::Keyword) && one_of(peek()->text, kModifiers) && !peek_is("final")) {
      take_into(n);
    }
    AstNode decl = parse_local_var(/*require_semicolon=*/true);
    n.children.push_back(std::move(decl));
    return n;
  }

  AstNode parse_annotation() {
    AstNode n = node("annotation");
    take_into(n);  // '@'
    if (peek_kind(TokenKind::Identifier) || peek_kind(TokenKind::Keyword)) take_into(n);
    while (peek_is(".") && (peek_kind(TokenKind::Identifier, 1))) {
      take_into(n);
      take_into(n);
    }
    if (peek_is("(")) {
      const std::size_t end = match_close(p_, "(", ")");
      while (p_ < end) take_into(n);
    }
    return n;
  }

  void take_modifiers(AstNode& n) {
    while (!at_end()) {
      if (peek_kind(TokenKind::Keyword) && one_of(peek()->text, kModifiers)) {
        take_into(n);
      } else if (peek_is("@") && !peek_is("interface", 1)) {
        n.children.push_back(parse_annotation());
      } else {
        break;
      }
    }
  }

  AstNode parse_type_node(std::size_t end) {
    AstNode ty = node("type");
    while (p_ < end && !at_end()) take_into(ty);
    return ty;
  }

  AstNode parse_type_decl() {
    AstNode n = node("class");
    take_modifiers(n);
    const bool is_enum = peek_is("enum");
    while (!at_end() && !peek_is("{") && !peek_is(";")) take_into(n);
    if (peek_is("{")) {
      if (is_enum) {
        AstNode body = node("enum_body");
        const std::size_t end = match_close(p_, "{", "}");
        while (p_ < end) take_into(body);
        n.children.push_back(std::move(body));
      } else {
        n.children.push_back(parse_class_body());
      }
    } else if (peek_is(";")) {
      take_into(n);
    }
    return n;
  }

  AstNode parse_class_body() {
    AstNode body = node("class_body");
    take_into(body);  // '{'
    while (!at_end() && !peek_is("}")) {
      const std::size_t before = p_;
      parse_member(body, /*in_class=*/true);
      if (p_ == before) body.children.push_back(raw_one());
    }
    if (peek_is("}")) take_into(body);
    return body;
  }

  AstNode parse_method() {
    AstNode m = node("method");
    take_modifiers(m);
    if (peek_is("<")) {
      AstNode tp = node("type_params");
      const std::size_t end = skip_generics(p_);
      while (p_ < end) take_into(tp);
      m.children.push_back(std::move(tp));
    }
    if (peek_is("void")) {
      AstNode ty = node("type");
      take_into(ty);
      m.children.push_back(std::move(ty));
    } else if (!(peek_kind(TokenKind::Identifier) && peek_is("(", 1))) {
      m.children.push_back(parse_type_node(scan_type(p_)));
    }
    take_into(m);  // name
    m.children.push_back(parse_params());
    if (peek_is("throws")) {
      AstNode th = node("throws");
      while (!at_end() && !peek_is("{") && !peek_is(";")) take_into(th);
      m.children.push_back(std::move(th));
    }
    if (peek_is("{")) m.children.push_back(parse_block());
    else if (peek_is(";")) take_into(m);
    return m;
  }

  AstNode parse_params() {
    AstNode ps = node("params");
    const std::size_t end = match_close(p_, "(", ")");
    take_into(ps);  // '('
    while (p_ + 1 < end) {
      if (peek_is(",")) {
        take_into(ps);
        continue;
      }
      AstNode prm = node("param");
      while (p_ + 1 < end && !peek_is(",")) {
        if (peek_is("@")) prm.children.push_back(parse_annotation());
        else take_into(prm);
      }
      ps.children.push_back(std::move(prm));
    }
    if (p_ < end) take_into(ps);  // ')'
    return ps;
  }

  // --- statements --------------------------------------------------------------
  AstNode parse_block() {
    AstNode b = node("block");
    take_into(b);  // '{'
    while (!at_end() && !peek_is("}")) {
      const std::size_t before = p_;
      b.children.push_back(parse_statement());
      if (p_ == before) b.children.push_back(raw_one());
    }
    if (peek_is("}")) take_into(b);
    return b;
  }

  AstNode parse_statement() {
    if (at_end()) return node("empty");
    const Token& t = *peek();
    if (t.kind == TokenKind::Separator && t.text == "{") return parse_block();
    if (t.kind == TokenKind::Separator && t.text == ";") {
      AstNode e = node("empty");
      take_into(e);
      return e;
    }
    if (t.kind == TokenKind::Keyword) {
      if (t.text == "if") return parse_if();
      if (t.text == "try") return parse_try();
      if (t.text == "for") return parse_for();
      if (t.text == "while") return parse_while();
      if (t.text == "do") return parse_do();
      if (t.text == "return" || t.text == "throw") return parse_keyword_expr(t.text);
      if (t.text == "break" || t.text == "continue") return parse_raw_until_semicolon();
      if (t.text == "switch" || t.text == "synchronized") return parse_raw_with_block();
      if (t.text == "class" || t.text == "interface" || t.text == "enum" || t.text == "abstract" ||
          t.text == "static") {
        if (looks_like_type_decl(p_)) return parse_type_decl();
      }
    }
    if (looks_like_declaration(p_)) return parse_local_var(/*require_semicolon=*/true);
    if (t.kind == TokenKind::Separator && t.text == "@") return parse_annotation();
    if (t.kind == TokenKind::Separator && t.text == "}") return raw_one();
    return parse_expr_statement();
  }

  AstNode parse_paren_condition() {
    AstNode c = node("condition");
    if (!peek_is("(")) return c;
    const std::size_t end = match_close(p_, "(", ")");
    take_into(c);
    c.children.push_back(parse_expr());
    while (p_ + 1 < end) take_into(c);  // anything the expression grammar left
    if (p_ < end) take_into(c);
    return c;
  }

  AstNode parse_if() {
    AstNode n = node("if");
    take_into(n);
    n.children.push_back(parse_paren_condition());
    if (!at_end()) n.children.push_back(parse_statement());
    if (peek_is("else")) {
      AstNode e = node("else");
      take_into(e);
      if (!at_end()) e.children.push_back(parse_statement());
      n.children.push_back(std::move(e));
    }
    return n;
  }

  AstNode parse_try() {
    AstNode n = node("try");
    take_into(n);
    if (peek_is("(")) {
      AstNode res = node("resources");
      const std::size_t end = match_close(p_, "(", ")");
      take_into(res);
      while (p_ + 1 < end) {
        const std::size_t before = p_;
        if (looks_like_declaration(p_)) res.children.push_back(parse_local_var(false));
        else res.children.push_back(parse_expr());
        if (peek_is(";")) take_into(res);
        if (p_ == before) take_into(res);
      }
      if (p_ < end) take_into(res);
      n.children.push_back(std::move(res));
    }
    if (peek_is("{")) n.children.push_back(parse_block());
    while (peek_is("catch")) {
      AstNode c = node("catch");
      take_into(c);
      if (peek_is("(")) c.children.push_back(parse_params());
      if (peek_is("{")) c.children.push_back(parse_block());
      n.children.push_back(std::move(c));
    }
    if (peek_is("finally")) {
      AstNode f = node("finally");
      take_into(f);
      if (peek_is("{")) f.children.push_back(parse_block());
      n.children.push_back(std::move(f));
    }
    return n;
  }

  AstNode parse_for() {
    AstNode n = node("for");
    take_into(n);
    if (peek_is("(")) {
      const std::size_t end = match_close(p_, "(", ")");
      bool classic = false;
      int depth = 0;
      for (std::size_t k = p_; k < end; ++k) {
        if (is_text_at(k, "(")) ++depth;
        else if (is_text_at(k, ")")) --depth;
        else if (depth == 1 && is_text_at(k, ";")) classic = true;
      }
      AstNode header = node(classic ? "for_control" : "foreach_control");
      take_into(header);  // '('
      if (classic) {
        if (looks_like_declaration(p_)) header.children.push_back(parse_local_var(false));
        else if (!peek_is(";")) header.children.push_back(parse_expr());
        if (peek_is(";")) take_into(header);
        if (!peek_is(";")) header.children.push_back(parse_expr());
        if (peek_is(";")) take_into(header);
        while (p_ + 1 < end) {
          const std::size_t before = p_;
          if (peek_is(",")) take_into(header);
          else header.children.push_back(parse_expr());
          if (p_ == before) take_into(header);
        }
      } else {
        AstNode var = node("foreach_var");
        while (p_ + 1 < end && !peek_is(":")) take_into(var);
        header.children.push_back(std::move(var));
        if (peek_is(":")) take_into(header);
        if (p_ + 1 < end) header.children.push_back(parse_expr());
        while (p_ + 1 < end) take_into(header);
      }
      if (p_ < end) take_into(header);  // ')'
      n.children.push_back(std::move(header));
    }
    if (!at_end()) n.children.push_back(parse_statement());
    return n;
  }

  AstNode parse_while() {
    AstNode n = node("while");
    take_into(n);
    n.children.push_back(parse_paren_condition());
    if (!at_end()) n.children.push_back(parse_statement());
    return n;
  }

  AstNode parse_do() {
    AstNode n = node("do");
    take_into(n);
    if (!at_end()) n.children.push_back(parse_statement());
    if (peek_is("while")) {
      take_into(n);
      n.children.push_back(parse_paren_condition());
    }
    if (peek_is(";")) take_into(n);
    return n;
  }

  AstNode parse_keyword_expr(const std::string& kw) {
    AstNode n = node(kw == "return" ? "return" : "throw");
    take_into(n);
    if (!peek_is(";") && !at_end()) n.children.push_back(parse_expr());
    finish_statement(n);
    return n;
  }

  // Consumes stray tokens up to and including the statement's ';'.
  void finish_statement(AstNode& n) {
    while (!at_end() && !peek_is(";") && !peek_is("}")) {
      if (peek_is("{")) {
        const std::size_t end = match_close(p_, "{", "}");
        while (p_ < end) take_into(n);
      } else {
        take_into(n);
      }
    }
    if (peek_is(";")) take_into(n);
  }

  AstNode parse_raw_until_semicolon() {
    AstNode n = node("raw_statement");
    take_into(n);
    finish_statement(n);
    return n;
  }

  AstNode parse_raw_with_block() {
    AstNode n = node("raw_statement");
    take_into(n);
    while (!at_end() && !peek_is("{") && !peek_is(";")) take_into(n);
    if (peek_is("{")) {
      const std::size_t end = match_close(p_, "{", "}");
      while (p_ < end) take_into(n);
    } else if (peek_is(";")) {
      take_into(n);
    }
    return n;
  }

  AstNode parse_local_var(bool require_semicolon) {
    AstNode n = node("local_var");
    while (peek_is("final") || peek_is("@")) {
      if (peek_is("@")) n.children.push_back(parse_annotation());
      else take_into(n);
    }
    n.children.push_back(parse_type_node(scan_type(p_)));
    while (!at_end()) {
      AstNode d = node("declarator");
      if (peek_kind(TokenKind::Identifier)) take_into(d);
      while (peek_is("[") && peek_is("]", 1)) {
        take_into(d);
        take_into(d);
      }
      if (peek_is("=")) {
        take_into(d);
        d.children.push_back(parse_expr());
      }
      n.children.push_back(std::move(d));
      if (peek_is(",")) {
        take_into(n);
        continue;
      }
      break;
    }
    if (require_semicolon) finish_statement(n);
    return n;
  }

  AstNode parse_expr_statement() {
    AstNode n = node("expr_stmt");
    const std::size_t before = p_;
    n.children.push_back(parse_expr());
    if (p_ == before) {
      // Nothing expression-like here: degrade.
      AstNode raw = node("raw_statement");
      take_into(raw);
      finish_statement(raw);
      return raw;
    }
    finish_statement(n);
    return n;
  }

  // --- expressions ---------------------------------------------------------------
  bool at_expr_stop() const {
    const Token* t = peek();
    if (!t) return true;
    if (t->kind != TokenKind::Separator) return false;
    return t->text == ";" || t->text == "," || t->text == ")" || t->text == "]" || t->text == "}";
  }

  AstNode parse_expr() {
    AstNode e = node("expr");
    while (!at_expr_stop()) {
      const Token& t = *peek();
      if (t.kind == TokenKind::Separator && t.text == "(") {
        const std::size_t close = match_close(p_, "(", ")");
        if (is_text_at(close, "->")) e.children.push_back(parse_lambda());
        else e.children.push_back(parse_paren());
      } else if (t.kind == TokenKind::Separator && t.text == "[") {
        AstNode idx = node("index");
        take_into(idx);
        if (!peek_is("]")) idx.children.push_back(parse_expr());
        while (!at_end() && !peek_is("]") && !peek_is(";") && !peek_is("}")) take_into(idx);
        if (peek_is("]")) take_into(idx);
        e.children.push_back(std::move(idx));
      } else if (t.kind == TokenKind::Separator && t.text == "{") {
        AstNode init = node("array_init");
        const std::size_t end = match_close(p_, "{", "}");
        while (p_ < end) take_into(init);
        e.children.push_back(std::move(init));
      } else if (t.kind == TokenKind::Identifier && peek_is("->", 1)) {
        e.children.push_back(parse_lambda());
      } else if ((t.kind == TokenKind::Identifier || t.text == "this" || t.text == "super") &&
                 peek_is("(", 1)) {
        e.children.push_back(parse_call());
      } else if (t.kind == TokenKind::Keyword && t.text == "new") {
        e.children.push_back(parse_creation());
      } else if (t.kind == TokenKind::Separator && t.text == "@") {
        e.children.push_back(parse_annotation());
      } else {
        take_into(e);
      }
    }
    return e;
  }

  AstNode parse_paren() {
    AstNode n = node("paren");
    const std::size_t end = match_close(p_, "(", ")");
    take_into(n);
    while (p_ + 1 < end) {
      const std::size_t before = p_;
      n.children.push_back(parse_expr());
      if (p_ == before) take_into(n);
    }
    if (p_ < end) take_into(n);
    return n;
  }

  AstNode parse_args() {
    AstNode a = node("args");
    const std::size_t end = match_close(p_, "(", ")");
    take_into(a);
    while (p_ + 1 < end) {
      if (peek_is(",")) {
        take_into(a);
        continue;
      }
      const std::size_t before = p_;
      a.children.push_back(parse_expr());
      if (p_ == before) take_into(a);
    }
    if (p_ < end) take_into(a);
    return a;
  }

  AstNode parse_call() {
    AstNode c = node("call");
    take_into(c);  // name
    c.children.push_back(parse_args());
    return c;
  }

  AstNode parse_creation() {
    AstNode n = node("new");
    take_into(n);  // 'new'
    while (!at_end()) {
      if (peek_kind(TokenKind::Identifier) || peek_is(".") ||
          (peek_kind(TokenKind::Keyword) && one_of(peek()->text, kPrimitiveTypes))) {
        take_into(n);
      } else if (peek_is("<")) {
        const std::size_t end = skip_generics(p_);
        if (end == std::string::npos) break;
        while (p_ < end) take_into(n);
      } else {
        break;
      }
    }
    if (peek_is("(")) {
      n.children.push_back(parse_args());
      if (peek_is("{")) {
        AstNode body = node("anonymous_body");
        const std::size_t end = match_close(p_, "{", "}");
        while (p_ < end) take_into(body);
        n.children.push_back(std::move(body));
      }
    }
    while (peek_is("[")) {
      AstNode dim = node("index");
      take_into(dim);
      if (!peek_is("]")) dim.children.push_back(parse_expr());
      while (!at_end() && !peek_is("]") && !peek_is(";") && !peek_is("}")) take_into(dim);
      if (peek_is("]")) take_into(dim);
      n.children.push_back(std::move(dim));
    }
    if (peek_is("{")) {
      AstNode init = node("array_init");
      const std::size_t end = match_close(p_, "{", "}");
      while (p_ < end) take_into(init);
      n.children.push_back(std::move(init));
    }
    return n;
  }

  // Opaque: parameters, arrow and body are kept as leaves.
  AstNode parse_lambda() {
    AstNode n = node("lambda");
    if (peek_is("(")) {
      const std::size_t end = match_close(p_, "(", ")");
      while (p_ < end) take_into(n);
    } else {
      take_into(n);
    }
    if (peek_is("->")) take_into(n);
    if (peek_is("{")) {
      const std::size_t end = match_close(p_, "{", "}");
      while (p_ < end) take_into(n);
      return n;
    }
    int depth = 0;
    while (!at_end()) {
      const Token& t = *peek();
      if (t.kind == TokenKind::Separator) {
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        else if (t.text == ")" || t.text == "]" || t.text == "}") {
          if (depth == 0) break;
          --depth;
        } else if ((t.text == ";" || t.text == ",") && depth == 0) {
          break;
        }
      }
      take_into(n);
    }
    return n;
  }

  const std::vector<Token>& t_;
  std::size_t p_ = 0;
};

void serialize_into(const AstNode& n, std::string& out) {
  if (n.is_leaf()) {
    const Token& t = *n.token;
    if (t.kind == TokenKind::Identifier || t.kind == TokenKind::Literal) {
      out += token_kind_name(t.kind);
    } else {
      out += t.text;
    }
    return;
  }
  out.push_back('(');
  out += n.kind;
  for (const auto& c : n.children) {
    out.push_back(' ');
    serialize_into(c, out);
  }
  out.push_back(')');
}

void collect_subtrees(const AstNode& n, std::vector<std::string>& out) {
  if (n.is_leaf()) return;
  out.push_back(serialize_abstract(n));
  for (const auto& c : n.children) collect_subtrees(c, out);
}

void render_into(const AstNode& n, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  if (n.is_leaf()) {
    out += "'" + n.token->text + "'\n";
    return;
  }
  out += n.kind + "\n";
  for (const auto& c : n.children) render_into(c, depth + 1, out);
}

}  // namespace

std::size_t AstNode::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::size_t AstNode::internal_count() const {
  if (is_leaf()) return 0;
  std::size_t n = 1;
  for (const auto& c : children) n += c.internal_count();
  return n;
}

void AstNode::collect_tokens(std::vector<Token>& out) const {
  if (is_leaf()) {
    out.push_back(*token);
    return;
  }
  for (const auto& c : children) c.collect_tokens(out);
}

JavaAst parse_java_subset(const TokenSeq& tokens) {
  Parser parser(tokens.tokens);
  return JavaAst{parser.parse_unit()};
}

JavaAst parse_java_subset(std::string_view code) { return parse_java_subset(tokenize_java(code)); }

std::string serialize_abstract(const AstNode& node) {
  std::string out;
  serialize_into(node, out);
  return out;
}

std::vector<std::string> abstract_subtrees(const JavaAst& ast) {
  std::vector<std::string> out;
  collect_subtrees(ast.root, out);
  return out;
}

double ast_match(const JavaAst& candidate, const JavaAst& reference) {
  const auto ref = abstract_subtrees(reference);
  if (ref.empty()) return 1.0;
  std::map<std::string, std::size_t> available;
  for (auto& s : abstract_subtrees(candidate)) ++available[s];
  std::size_t matched = 0;
  for (const auto& s : ref) {
    auto it = available.find(s);
    if (it != available.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  return static_cast<double>(matched) / static_cast<double>(ref.size());
}

double ast_match(std::string_view candidate_code, std::string_view reference_code) {
  return ast_match(parse_java_subset(candidate_code), parse_java_subset(reference_code));
}

std::string render_tree(const AstNode& node) {
  std::string out;
  render_into(node, 0, out);
  return out;
}

}  // namespace flakyfix
