#include "flakyfix/labeler.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "flakyfix/error.hpp"
#include "flakyfix/java_lexer.hpp"

namespace flakyfix {

std::string_view default_rules_json();

namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         static_cast<unsigned char>(c) >= 0x80;
}

// --- diff sides --------------------------------------------------------------

// A matchable unit on a line: an identifier or keyword, a '.'/'(' separator,
// a word inside a string literal, or any other token (which never matches a
// word pattern but breaks adjacency).
struct Entry {
  std::string norm;
  std::size_t offset;
  std::size_t length;
  bool word;
};

struct SideLine {
  std::size_t line;
  std::vector<const Token*> tokens;
  std::vector<Entry> entries;
};

struct Side {
  std::string_view source;
  TokenSeq lexed;
  std::vector<SideLine> lines;

  std::string text(std::size_t offset, std::size_t length) const {
    return std::string(source.substr(offset, length));
  }
};

void add_entries(const Token& t, std::vector<Entry>& out) {
  if (t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword) {
    out.push_back({lower(t.text), t.offset, t.text.size(), true});
    return;
  }
  if (t.kind == TokenKind::Literal && !t.text.empty() && t.text.front() == '"') {
    std::size_t i = 0;
    while (i < t.text.size()) {
      if (!is_word_char(t.text[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < t.text.size() && is_word_char(t.text[j])) ++j;
      out.push_back({lower(std::string_view(t.text).substr(i, j - i)), t.offset + i, j - i, true});
      i = j;
    }
    return;
  }
  out.push_back({t.text, t.offset, t.text.size(), false});
}

Side build_side(std::string_view source, const CodeDiff& diff, DiffKind kind) {
  Side side{source, tokenize_java(source), {}};
  std::vector<std::size_t> wanted;
  for (const auto& l : diff.lines) {
    if (l.kind != kind) continue;
    wanted.push_back(kind == DiffKind::Deleted ? *l.old_line : *l.new_line);
  }
  for (std::size_t n : wanted) {
    SideLine sl{n, {}, {}};
    for (const auto& t : side.lexed.tokens) {
      if (t.line == n) {
        sl.tokens.push_back(&t);
        add_entries(t, sl.entries);
      }
    }
    side.lines.push_back(std::move(sl));
  }
  return side;
}

// --- keyword patterns ----------------------------------------------------------

struct Pattern {
  std::string key;  // lowercase original
  std::vector<std::string> parts;
};

Pattern make_pattern(std::string_view text) {
  Pattern p{lower(text), {}};
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (is_word_char(text[i])) {
      std::size_t j = i;
      while (j < text.size() && is_word_char(text[j])) ++j;
      p.parts.push_back(lower(text.substr(i, j - i)));
      i = j;
    } else {
      p.parts.emplace_back(1, text[i]);
      ++i;
    }
  }
  return p;
}

std::vector<Pattern> make_patterns(const std::vector<std::string>& texts) {
  std::vector<Pattern> out;
  for (const auto& t : texts) out.push_back(make_pattern(t));
  std::stable_sort(out.begin(), out.end(),
                   [](const Pattern& a, const Pattern& b) { return a.parts.size() > b.parts.size(); });
  return out;
}

struct Hit {
  std::string key;
  MatchedToken where;
};

std::vector<Hit> scan(const Side& side, const std::vector<Pattern>& patterns) {
  std::vector<Hit> hits;
  for (const auto& line : side.lines) {
    const auto& e = line.entries;
    std::size_t i = 0;
    while (i < e.size()) {
      bool found = false;
      for (const auto& p : patterns) {
        if (p.parts.empty() || i + p.parts.size() > e.size()) continue;
        bool ok = true;
        for (std::size_t k = 0; k < p.parts.size() && ok; ++k) ok = e[i + k].norm == p.parts[k];
        if (!ok) continue;
        const auto& last = e[i + p.parts.size() - 1];
        const std::size_t begin = e[i].offset;
        hits.push_back({p.key, {line.line, side.text(begin, last.offset + last.length - begin)}});
        i += p.parts.size();
        found = true;
        break;
      }
      if (!found) ++i;
    }
  }
  return hits;
}

void insert_hits(std::set<MatchedToken>& out, const std::vector<Hit>& hits) {
  for (const auto& h : hits) out.insert(h.where);
}

std::set<std::string> keys_of(const std::vector<Hit>& hits) {
  std::set<std::string> out;
  for (const auto& h : hits) out.insert(h.key);
  return out;
}

// --- call sites ----------------------------------------------------------------

struct CallSite {
  const Token* name;
  std::vector<std::vector<const Token*>> args;
};

std::vector<CallSite> call_sites(const SideLine& line) {
  std::vector<CallSite> out;
  const auto& t = line.tokens;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i]->kind != TokenKind::Identifier || t[i + 1]->text != "(") continue;
    CallSite cs{t[i], {}};
    int depth = 0;
    bool closed = false;
    std::vector<const Token*> current;
    for (std::size_t k = i + 1; k < t.size(); ++k) {
      const std::string& x = t[k]->text;
      const bool sep = t[k]->kind == TokenKind::Separator;
      if (sep && (x == "(" || x == "[" || x == "{")) {
        if (depth++ == 0) continue;
      } else if (sep && (x == ")" || x == "]" || x == "}")) {
        if (--depth == 0) {
          if (!current.empty() || !cs.args.empty()) cs.args.push_back(current);
          closed = true;
          break;
        }
      } else if (sep && x == "," && depth == 1) {
        cs.args.push_back(current);
        current.clear();
        continue;
      }
      current.push_back(t[k]);
    }
    if (closed) out.push_back(std::move(cs));
  }
  return out;
}

std::string joined(const std::vector<const Token*>& toks) {
  std::string s;
  for (const auto* t : toks) {
    if (!s.empty()) s.push_back(' ');
    s += t->text;
  }
  return s;
}

bool is_data_literal(const Token& t) {
  if (t.kind != TokenKind::Literal) return false;
  if (t.text == "true" || t.text == "false" || t.text == "null") return false;
  return t.text.front() != '\'';
}

std::size_t literal_length(const Token& t) {
  if (t.text.size() >= 6 && t.text.rfind("\"\"\"", 0) == 0) return t.text.size() - 6;
  if (t.text.front() == '"') return t.text.size() >= 2 ? t.text.size() - 2 : 0;
  return t.text.size();
}

// --- matchers ------------------------------------------------------------------

struct Sides {
  const Side& del;
  const Side& add;
};

bool match_token(const Rule& r, const Sides& s, RuleMatch& m) {
  if (!r.either.empty()) {
    const auto pats = make_patterns(r.either);
    const auto d = scan(s.del, pats), a = scan(s.add, pats);
    insert_hits(m.matched_deleted, d);
    insert_hits(m.matched_added, a);
    return !d.empty() || !a.empty();
  }
  std::vector<Hit> d, a;
  if (!r.deleted.empty()) {
    d = scan(s.del, make_patterns(r.deleted));
    if (d.empty()) return false;
  }
  if (!r.added.empty()) {
    const auto pats = make_patterns(r.added);
    a = scan(s.add, pats);
    if (r.require_different || r.absent_from_deleted) {
      const auto before = keys_of(scan(s.del, pats));
      std::erase_if(a, [&](const Hit& h) { return before.count(h.key) > 0; });
    }
    if (a.empty()) return false;
  }
  insert_hits(m.matched_deleted, d);
  insert_hits(m.matched_added, a);
  return !d.empty() || !a.empty();
}

bool match_pairs(const Rule& r, const Sides& s, RuleMatch& m) {
  bool fired = false;
  for (const auto& [from, to] : r.pairs) {
    const auto d = scan(s.del, {make_pattern(from)});
    const auto a = scan(s.add, {make_pattern(to)});
    if (d.empty() || a.empty()) continue;
    insert_hits(m.matched_deleted, d);
    insert_hits(m.matched_added, a);
    fired = true;
  }
  return fired;
}

bool is_ternary(const std::vector<const Token*>& line, std::size_t i) {
  if (i > 0 && line[i - 1]->text == "<") return false;
  if (i + 1 < line.size()) {
    const auto& n = line[i + 1]->text;
    if (n == ">" || n == "," || n == "extends" || n == "super") return false;
  }
  return true;
}

std::vector<MatchedToken> occurrences(const Side& side, const std::string& token) {
  std::vector<MatchedToken> out;
  for (const auto& line : side.lines) {
    for (std::size_t i = 0; i < line.tokens.size(); ++i) {
      const Token& t = *line.tokens[i];
      if (t.text != token || t.kind == TokenKind::Literal) continue;
      if (token == "?" && !is_ternary(line.tokens, i)) continue;
      out.push_back({line.line, t.text});
    }
  }
  return out;
}

bool match_count_change(const Rule& r, const Sides& s, RuleMatch& m) {
  bool fired = false;
  for (const auto& tok : r.tokens) {
    const auto d = occurrences(s.del, tok), a = occurrences(s.add, tok);
    if (d.size() == a.size()) continue;
    fired = true;
    if (d.size() > a.size()) m.matched_deleted.insert(d.begin(), d.end());
    else m.matched_added.insert(a.begin(), a.end());
  }
  return fired;
}

bool ends_with_ci(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && lower(s.substr(s.size() - suffix.size())) == lower(suffix);
}

bool match_suffix_set(const Rule& r, const Sides& s, RuleMatch& m) {
  auto collect = [&](const Side& side) {
    std::map<std::string, std::vector<MatchedToken>> out;
    for (const auto& line : side.lines) {
      for (const auto* t : line.tokens) {
        if (t->kind == TokenKind::Identifier && ends_with_ci(t->text, r.suffix)) {
          out[t->text].push_back({line.line, t->text});
        }
      }
    }
    return out;
  };
  const auto d = collect(s.del), a = collect(s.add);
  bool fired = false;
  for (const auto& [name, where] : d) {
    if (a.count(name)) continue;
    m.matched_deleted.insert(where.begin(), where.end());
    fired = true;
  }
  for (const auto& [name, where] : a) {
    if (d.count(name)) continue;
    m.matched_added.insert(where.begin(), where.end());
    fired = true;
  }
  return fired;
}

bool match_keyword_lines(const Rule& r, const Sides& s, RuleMatch& m) {
  const std::string needle = lower(r.contains);
  auto collect = [&](const Side& side, std::set<MatchedToken>& hits) {
    std::vector<std::string> lines;
    for (const auto& line : side.lines) {
      bool any = false;
      for (const auto& e : line.entries) {
        if (e.word && e.norm.find(needle) != std::string::npos) {
          hits.insert({line.line, side.text(e.offset, e.length)});
          any = true;
        }
      }
      if (!any) continue;
      std::string text;
      for (const auto* t : line.tokens) text += t->text + " ";
      lines.push_back(text);
    }
    std::sort(lines.begin(), lines.end());
    return lines;
  };
  std::set<MatchedToken> dh, ah;
  const auto d = collect(s.del, dh), a = collect(s.add, ah);
  if (d.empty() || a.empty() || d == a) return false;
  m.matched_deleted = std::move(dh);
  m.matched_added = std::move(ah);
  return true;
}

bool match_literal_change(const Rule& r, const Sides& s, RuleMatch& m) {
  bool fired = false;
  for (const auto& dl : s.del.lines) {
    for (const auto& dc : call_sites(dl)) {
      for (const auto& al : s.add.lines) {
        for (const auto& ac : call_sites(al)) {
          if (dc.name->text != ac.name->text || dc.args.size() != ac.args.size()) continue;
          for (std::size_t i = 0; i < dc.args.size(); ++i) {
            if (dc.args[i].size() != 1 || ac.args[i].size() != 1) continue;
            const Token& x = *dc.args[i][0];
            const Token& y = *ac.args[i][0];
            if (!is_data_literal(x) || !is_data_literal(y) || x.text == y.text) continue;
            if (std::max(literal_length(x), literal_length(y)) < r.min_length) continue;
            m.matched_deleted.insert({dl.line, x.text});
            m.matched_added.insert({al.line, y.text});
            fired = true;
          }
        }
      }
    }
  }
  return fired;
}

bool match_permutation(const Rule&, const Sides& s, RuleMatch& m) {
  bool fired = false;
  for (const auto& dl : s.del.lines) {
    for (const auto& dc : call_sites(dl)) {
      if (dc.args.size() < 2) continue;
      std::vector<std::string> dargs;
      for (const auto& a : dc.args) dargs.push_back(joined(a));
      for (const auto& al : s.add.lines) {
        for (const auto& ac : call_sites(al)) {
          if (dc.name->text != ac.name->text || dc.args.size() != ac.args.size()) continue;
          std::vector<std::string> aargs;
          for (const auto& a : ac.args) aargs.push_back(joined(a));
          if (aargs == dargs) continue;
          auto ds = dargs, as = aargs;
          std::sort(ds.begin(), ds.end());
          std::sort(as.begin(), as.end());
          if (ds != as) continue;
          m.matched_deleted.insert({dl.line, dc.name->text});
          m.matched_added.insert({al.line, ac.name->text});
          fired = true;
        }
      }
    }
  }
  return fired;
}

bool camel_type_name(const std::string& s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return std::any_of(s.begin(), s.end(), [](char c) { return std::islower(static_cast<unsigned char>(c)); });
}

struct StaticCallSite {
  std::string key;  // Type.method
  MatchedToken where;
};

std::vector<StaticCallSite> static_calls(const Side& side) {
  std::vector<StaticCallSite> out;
  for (const auto& line : side.lines) {
    const auto& t = line.tokens;
    for (std::size_t i = 0; i + 3 < t.size(); ++i) {
      if (t[i]->kind != TokenKind::Identifier || !camel_type_name(t[i]->text)) continue;
      if (i > 0 && (t[i - 1]->text == "." || t[i - 1]->text == "new")) continue;
      if (t[i + 1]->text != "." || t[i + 2]->kind != TokenKind::Identifier || t[i + 3]->text != "(") {
        continue;
      }
      const std::size_t begin = t[i]->offset;
      const std::size_t end = t[i + 2]->offset + t[i + 2]->text.size();
      out.push_back({t[i]->text + "." + t[i + 2]->text, {line.line, side.text(begin, end - begin)}});
    }
  }
  return out;
}

// Names that the fixed code constructs (`new T`) or declares as variables.
std::set<std::string> instance_names(const TokenSeq& code) {
  std::set<std::string> out;
  const auto& t = code.tokens;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i].text == "new" && t[i + 1].kind == TokenKind::Identifier) out.insert(t[i + 1].text);
    if (i > 0 && t[i].kind == TokenKind::Identifier &&
        (t[i - 1].kind == TokenKind::Identifier || t[i - 1].text == ">") &&
        (t[i + 1].text == "=" || t[i + 1].text == ";")) {
      out.insert(t[i].text);
    }
  }
  return out;
}

bool match_static_call(const Rule& r, const Sides& s, RuleMatch& m) {
  const std::set<std::string> excluded(r.exclude_types.begin(), r.exclude_types.end());
  const auto instances = instance_names(s.add.lexed);
  std::set<std::string> before;
  for (const auto& c : static_calls(s.del)) before.insert(c.key);
  bool fired = false;
  for (const auto& c : static_calls(s.add)) {
    const std::string type = c.key.substr(0, c.key.find('.'));
    if (excluded.count(type) || instances.count(type) || before.count(c.key)) continue;
    m.matched_added.insert(c.where);
    fired = true;
  }
  return fired;
}

bool match_chain(const Rule& r, const Sides& s, RuleMatch& m) {
  const std::string needle = lower(r.contains);
  const Pattern then = make_pattern(r.then);
  bool fired = false;
  for (const auto& line : s.add.lines) {
    const auto& e = line.entries;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i].word || e[i].norm.find(needle) == std::string::npos) continue;
      for (std::size_t j = i + 1; j + then.parts.size() <= e.size(); ++j) {
        bool ok = true;
        for (std::size_t k = 0; k < then.parts.size() && ok; ++k) ok = e[j + k].norm == then.parts[k];
        if (!ok) continue;
        const auto& last = e[j + then.parts.size() - 1];
        m.matched_added.insert({line.line, s.add.text(e[i].offset, e[i].length)});
        m.matched_added.insert(
            {line.line, s.add.text(e[j].offset, last.offset + last.length - e[j].offset)});
        fired = true;
        break;
      }
    }
  }
  return fired;
}

bool apply(const Rule& r, const Sides& s, RuleMatch& m) {
  switch (r.kind) {
    case MatcherKind::Token: return match_token(r, s, m);
    case MatcherKind::PairReplacement: return match_pairs(r, s, m);
    case MatcherKind::CallArgPermutation: return match_permutation(r, s, m);
    case MatcherKind::LiteralChange: return match_literal_change(r, s, m);
    case MatcherKind::CountChange: return match_count_change(r, s, m);
    case MatcherKind::SuffixSetChange: return match_suffix_set(r, s, m);
    case MatcherKind::KeywordLineChange: return match_keyword_lines(r, s, m);
    case MatcherKind::StaticCall: return match_static_call(r, s, m);
    case MatcherKind::Chain: return match_chain(r, s, m);
  }
  return false;
}

// --- rules file ------------------------------------------------------------------

constexpr std::pair<MatcherKind, std::string_view> kKindNames[] = {
    {MatcherKind::Token, "token"},
    {MatcherKind::PairReplacement, "pair-replacement"},
    {MatcherKind::CallArgPermutation, "call-arg-permutation"},
    {MatcherKind::LiteralChange, "literal-change"},
    {MatcherKind::CountChange, "count-change"},
    {MatcherKind::SuffixSetChange, "suffix-set-change"},
    {MatcherKind::KeywordLineChange, "keyword-line-change"},
    {MatcherKind::StaticCall, "static-call"},
    {MatcherKind::Chain, "chain"},
};

std::vector<std::string> string_list(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return {};
  if (!j[key].is_array()) throw Error(where + ": '" + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j[key]) {
    if (!x.is_string() || x.get<std::string>().empty()) {
      throw Error(where + ": '" + key + "' must hold nonempty strings");
    }
    out.push_back(x.get<std::string>());
  }
  return out;
}

Rule parse_rule(const json& j, std::size_t index) {
  std::string where = "rule " + std::to_string(index);
  if (!j.is_object()) throw Error(where + ": not an object");
  Rule r;
  r.name = j.value("name", "rule-" + std::to_string(index));
  where = "rule '" + r.name + "'";
  const auto cat = parse_category(j.value("category", ""));
  if (!cat) throw Error(where + ": unknown category");
  if (*cat == FixCategory::Miscellaneous) throw Error(where + ": Miscellaneous is the fallback, not a rule");
  r.category = *cat;
  const std::string kind = j.value("kind", "");
  const auto* k = std::find_if(std::begin(kKindNames), std::end(kKindNames),
                               [&](const auto& p) { return p.second == kind; });
  if (k == std::end(kKindNames)) throw Error(where + ": unknown matcher kind '" + kind + "'");
  r.kind = k->first;
  r.deleted = string_list(j, "deleted", where);
  r.added = string_list(j, "added", where);
  r.either = string_list(j, "either", where);
  r.tokens = string_list(j, "tokens", where);
  r.exclude_types = string_list(j, "exclude_types", where);
  r.contains = j.value("contains", "");
  r.suffix = j.value("suffix", "");
  r.then = j.value("then", "");
  r.require_different = j.value("require_different", false);
  r.absent_from_deleted = j.value("absent_from_deleted", false);
  if (j.contains("min_length")) {
    if (!j["min_length"].is_number_unsigned()) throw Error(where + ": min_length must be a count");
    r.min_length = j["min_length"].get<std::size_t>();
  }
  if (j.contains("pairs")) {
    for (const auto& p : j["pairs"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
        throw Error(where + ": pairs must be [from, to] string pairs");
      }
      r.pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
  }
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw Error(where + ": " + kind + " rule needs " + what);
  };
  switch (r.kind) {
    case MatcherKind::Token:
      require(!r.deleted.empty() || !r.added.empty() || !r.either.empty(), "patterns");
      break;
    case MatcherKind::PairReplacement: require(!r.pairs.empty(), "pairs"); break;
    case MatcherKind::CountChange: require(!r.tokens.empty(), "tokens"); break;
    case MatcherKind::SuffixSetChange: require(!r.suffix.empty(), "a suffix"); break;
    case MatcherKind::KeywordLineChange: require(!r.contains.empty(), "'contains'"); break;
    case MatcherKind::Chain: require(!r.contains.empty() && !r.then.empty(), "'contains' and 'then'"); break;
    default: break;
  }
  return r;
}

}  // namespace

std::string_view matcher_kind_name(MatcherKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "token";
}

RuleSet RuleSet::parse(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("rules file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rules") || !j["rules"].is_array()) {
    throw Error("rules file: expected an object with a 'rules' array");
  }
  RuleSet set;
  std::size_t i = 0;
  for (const auto& r : j["rules"]) set.rules_.push_back(parse_rule(r, i++));
  return set;
}

RuleSet RuleSet::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read rules file: " + path);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse(text);
}

const RuleSet& RuleSet::defaults() {
  static const RuleSet set = parse(default_rules_json());
  return set;
}

void RuleSet::set_min_literal_length(std::size_t n) {
  for (auto& r : rules_) {
    if (r.kind == MatcherKind::LiteralChange) r.min_length = n;
  }
}

LabelResult label_diff(std::string_view flaky_code, std::string_view fixed_code,
                       const RuleSet& rules) {
  if (flaky_code == fixed_code) throw Error("empty diff");
  const CodeDiff diff = compute_diff(flaky_code, fixed_code);
  const Side del = build_side(flaky_code, diff, DiffKind::Deleted);
  const Side add = build_side(fixed_code, diff, DiffKind::Added);
  const Sides sides{del, add};

  LabelResult out;
  std::vector<FixCategory> fired;
  for (const auto& rule : rules.rules()) {
    RuleMatch m{rule.category, rule.name, {}, {}};
    if (!apply(rule, sides, m)) continue;
    if (m.matched_deleted.empty() && m.matched_added.empty()) continue;
    fired.push_back(rule.category);
    out.matches.push_back(std::move(m));
  }
  if (!fired.empty()) out.labels = LabelSet::from(fired);
  return out;
}

LabelResult label_record(const TestRecord& record, const RuleSet& rules) {
  if (!record.fixed_code) throw Error("record " + record.id + ": unlabeled record (no fixed_code)");
  try {
    return label_diff(record.flaky_code, *record.fixed_code, rules);
  } catch (const Error& e) {
    throw Error("record " + record.id + ": " + e.what());
  }
}

CorpusLabeling label_corpus(const Corpus& corpus, const RuleSet& rules) {
  CorpusLabeling out;
  for (FixCategory c : kAllCategories) out.counts[c] = 0;
  out.corpus = corpus;
  for (auto& rec : out.corpus) {
    if (!rec.fixed_code) {
      out.unlabeled_ids.push_back(rec.id);
      continue;
    }
    rec.known_labels = label_record(rec, rules).labels;
    for (FixCategory c : rec.known_labels->categories()) ++out.counts[c];
  }
  return out;
}

LabelerEvaluation evaluate_labeler(const Corpus& gold, const RuleSet& rules) {
  LabelerEvaluation ev;
  for (const auto& rec : gold) {
    if (!rec.known_labels) throw Error("record " + rec.id + ": missing gold labels");
    const LabelSet predicted = label_record(rec, rules).labels;
    ++ev.total;
    if (predicted == *rec.known_labels) ++ev.correct;
    else ev.mismatches.push_back({rec.id, *rec.known_labels, predicted});
  }
  ev.accuracy = ev.total ? static_cast<double>(ev.correct) / static_cast<double>(ev.total) : 0.0;
  return ev;
}

}  // namespace flakyfix
