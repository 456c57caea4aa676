#include "flakyfix/dataflow.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace flakyfix {
namespace {

bool is_assign_op(const Token& t) {
  static const std::set<std::string> ops = {"=",  "+=", "-=", "*=",  "/=",  "%=",
                                            "&=", "|=", "^=", "<<=", ">>=", ">>>="};
  return t.kind == TokenKind::Operator && ops.count(t.text) > 0;
}

struct Binding {
  std::size_t var;
  std::size_t def_count = 0;
  std::size_t current_def = 0;
  std::size_t uses_of_current = 0;
  std::size_t def_line = 0;
};

class Extractor {
 public:
  explicit Extractor(const JavaAst& ast) {
    index_leaves(ast.root);
    scopes_.emplace_back();
    visit(ast.root);
  }

  DataFlowGraph take() { return std::move(graph_); }

 private:
  void index_leaves(const AstNode& n) {
    if (n.is_leaf()) {
      position_[&n] = flat_.size();
      flat_.push_back(&*n.token);
      return;
    }
    for (const auto& c : n.children) index_leaves(c);
  }

  const Token* neighbor(const AstNode& leaf, int delta) const {
    const auto i = static_cast<long>(position_.at(&leaf)) + delta;
    if (i < 0 || i >= static_cast<long>(flat_.size())) return nullptr;
    return flat_[static_cast<std::size_t>(i)];
  }

  Binding* lookup(const std::string& name) {
    for (auto s = scopes_.rbegin(); s != scopes_.rend(); ++s) {
      auto it = s->find(name);
      if (it != s->end()) return &bindings_[it->second];
    }
    return nullptr;
  }

  std::size_t new_binding(const std::string& name, std::map<std::string, std::size_t>& scope) {
    graph_.variables.push_back({"var_" + std::to_string(graph_.variables.size()), name});
    bindings_.push_back(Binding{graph_.variables.size() - 1});
    scope[name] = bindings_.size() - 1;
    return bindings_.size() - 1;
  }

  static void record_def(Binding& b, std::size_t line) {
    b.current_def = b.def_count++;
    b.uses_of_current = 0;
    b.def_line = line;
  }

  void declare(const Token& t) {
    record_def(bindings_[new_binding(t.text, scopes_.back())], t.line);
  }

  void assign(const Token& t) {
    Binding* b = lookup(t.text);
    if (!b) b = &bindings_[new_binding(t.text, scopes_.front())];
    record_def(*b, t.line);
  }

  void use(const Token& t) {
    Binding* b = lookup(t.text);
    if (!b) return;
    graph_.edges.push_back({b->var, b->current_def, b->uses_of_current++, b->def_line, t.line});
  }

  void defer_assign(const Token& t) {
    if (pending_ && expr_depth_ > 0) pending_->push_back(&t);
    else assign(t);
  }

  void leaf(const AstNode& n) {
    const Token& t = *n.token;
    if (t.kind != TokenKind::Identifier) return;
    const Token* prev = neighbor(n, -1);
    const Token* next = neighbor(n, +1);
    if (prev && (prev->text == "." || prev->text == "::")) return;
    if (next && next->text == "(" && next->kind == TokenKind::Separator) return;
    if (next && is_assign_op(*next)) {
      if (next->text != "=") use(t);
      defer_assign(t);
      return;
    }
    const bool inc = (next && (next->text == "++" || next->text == "--")) ||
                     (prev && (prev->text == "++" || prev->text == "--"));
    use(t);
    if (inc) defer_assign(t);
  }

  static const AstNode* last_identifier(const AstNode& n) {
    const AstNode* found = nullptr;
    for (const auto& c : n.children) {
      if (c.is_leaf() && c.token->kind == TokenKind::Identifier) found = &c;
    }
    return found;
  }

  void visit_children(const AstNode& n) {
    for (const auto& c : n.children) visit(c);
  }

  void visit_scoped(const AstNode& n) {
    scopes_.emplace_back();
    visit_children(n);
    scopes_.pop_back();
  }

  void visit_lambda(const AstNode& n) {
    scopes_.emplace_back();
    bool body = false;
    for (const auto& c : n.children) {
      if (!c.is_leaf()) {
        visit(c);
        continue;
      }
      if (!body) {
        if (c.token->text == "->") body = true;
        else if (c.token->kind == TokenKind::Identifier) {
          // "(Type name)" parameters: the name is the identifier before ',' or ')'
          const Token* next = neighbor(c, +1);
          if (!next || next->text == "," || next->text == ")" || next->text == "->") declare(*c.token);
        }
        continue;
      }
      leaf(c);
    }
    scopes_.pop_back();
  }

  void visit(const AstNode& n) {
    if (n.is_leaf()) {
      leaf(n);
      return;
    }
    const std::string& k = n.kind;
    if (k == "type" || k == "annotation" || k == "throws" || k == "type_params") return;
    if (k == "class" || k == "method") {
      scopes_.emplace_back();
      for (const auto& c : n.children) {
        if (!c.is_leaf()) visit(c);
      }
      scopes_.pop_back();
      return;
    }
    if (k == "param" || k == "foreach_var") {
      if (const AstNode* id = last_identifier(n)) declare(*id->token);
      return;
    }
    if (k == "block" || k == "for" || k == "catch" || k == "try" || k == "class_body") {
      visit_scoped(n);
      return;
    }
    if (k == "lambda") {
      visit_lambda(n);
      return;
    }
    if (k == "declarator") {
      const AstNode* name = nullptr;
      for (const auto& c : n.children) {
        if (c.is_leaf() && c.token->kind == TokenKind::Identifier && !name) name = &c;
        else if (!c.is_leaf()) visit(c);
      }
      if (name) declare(*name->token);
      return;
    }
    if (k == "foreach_control") {
      const AstNode* var = nullptr;
      for (const auto& c : n.children) {
        if (c.kind == "foreach_var") var = &c;
        else if (!c.is_leaf()) visit(c);
      }
      if (var) visit(*var);
      return;
    }
    if (k == "call") {
      for (const auto& c : n.children) {
        if (!c.is_leaf()) visit(c);
      }
      return;
    }
    if (k == "new") {
      for (const auto& c : n.children) {
        if (!c.is_leaf()) visit(c);
      }
      return;
    }
    if (k == "expr") {
      std::vector<const Token*> local;
      const bool outer = expr_depth_ == 0;
      if (outer) pending_ = &local;
      ++expr_depth_;
      visit_children(n);
      --expr_depth_;
      if (outer) {
        pending_ = nullptr;
        for (const Token* t : local) assign(*t);
      }
      return;
    }
    visit_children(n);
  }

  std::vector<const Token*> flat_;
  std::unordered_map<const AstNode*, std::size_t> position_;
  std::vector<std::map<std::string, std::size_t>> scopes_;
  std::vector<Binding> bindings_;
  std::vector<const Token*>* pending_ = nullptr;
  int expr_depth_ = 0;
  DataFlowGraph graph_;
};

}  // namespace

DataFlowGraph extract_dataflow(const JavaAst& ast) { return Extractor(ast).take(); }

DataFlowGraph extract_dataflow(std::string_view code) {
  return extract_dataflow(parse_java_subset(code));
}

DataflowMatch dataflow_match(const DataFlowGraph& candidate, const DataFlowGraph& reference) {
  if (reference.edges.empty()) return {1.0, true};
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> have;
  for (const auto& e : candidate.edges) have.insert(e.key());
  std::size_t hit = 0;
  for (const auto& e : reference.edges) hit += have.count(e.key());
  return {static_cast<double>(hit) / static_cast<double>(reference.edges.size()), false};
}

DataflowMatch dataflow_match(std::string_view candidate_code, std::string_view reference_code) {
  return dataflow_match(extract_dataflow(candidate_code), extract_dataflow(reference_code));
}

}  // namespace flakyfix
