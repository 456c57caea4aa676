#include "flakyfix/augment.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "flakyfix/error.hpp"
#include "flakyfix/java_lexer.hpp"

namespace flakyfix {
namespace {

constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";

bool is_decimal_int(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_plain_string(const std::string& s) {
  return s.size() >= 2 && s.front() == '"' && s.back() == '"' && s.rfind("\"\"\"", 0) != 0;
}

std::string fresh_int(const std::string& old, Rng& rng) {
  std::string v;
  do {
    v = std::to_string(uniform_index(rng, 10000));
  } while (v == old);
  return v;
}

std::string fresh_string(const std::string& old, Rng& rng) {
  const std::size_t n = std::max<std::size_t>(1, old.size() - 2);
  std::string v;
  do {
    v = "\"";
    for (std::size_t i = 0; i < n; ++i) v.push_back(kAlphabet[uniform_index(rng, 26)]);
    v += "\"";
  } while (v == old);
  return v;
}

// Rewrites literals and the test name inside one line. Tokens are lexed from
// the line alone; a line that does not lex cleanly (part of a block comment or
// text block) keeps its literals but still gets the rename.
std::string mutate_line(const std::string& line, const std::string& old_name,
                        const std::string& new_name, Rng& rng) {
  const TokenSeq toks = tokenize_java(line);
  std::string out;
  std::size_t pos = 0;
  for (const auto& t : toks.tokens) {
    std::string replacement = t.text;
    if (!old_name.empty() && t.kind == TokenKind::Identifier && t.text == old_name) {
      replacement = new_name;
    } else if (t.kind == TokenKind::Literal) {
      if (is_decimal_int(t.text)) replacement = fresh_int(t.text, rng);
      else if (is_plain_string(t.text)) replacement = fresh_string(t.text, rng);
      else if (t.text == "true") replacement = "false";
      else if (t.text == "false") replacement = "true";
    }
    out.append(line, pos, t.offset - pos);
    out += replacement;
    pos = t.offset + t.text.size();
  }
  out.append(line, pos, std::string::npos);
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

}  // namespace

std::string random_suffix(Rng& rng) {
  std::string s;
  for (int i = 0; i < 5; ++i) s.push_back(kAlphabet[uniform_index(rng, kAlphabet.size())]);
  return s;
}

TestRecord augment_record(const TestRecord& record, std::uint64_t seed) {
  Rng rng(seed);
  const std::string suffix = random_suffix(rng);
  TestRecord out = record;
  out.id = record.id + "_" + suffix;
  out.test_name = record.test_name.empty() ? suffix : record.test_name + "_" + suffix;

  if (!record.fixed_code) {
    auto lines = split_lines(record.flaky_code);
    for (auto& l : lines) l = mutate_line(l, record.test_name, out.test_name, rng);
    out.flaky_code = join_lines(lines);
    return out;
  }
  auto old_lines = split_lines(record.flaky_code);
  auto new_lines = split_lines(*record.fixed_code);
  for (const auto& d : compute_diff(record.flaky_code, *record.fixed_code).lines) {
    if (d.kind != DiffKind::Context) continue;
    const std::string mutated = mutate_line(d.text, record.test_name, out.test_name, rng);
    old_lines[*d.old_line - 1] = mutated;
    new_lines[*d.new_line - 1] = mutated;
  }
  out.flaky_code = join_lines(old_lines);
  out.fixed_code = join_lines(new_lines);
  return out;
}

bool in_class(const TestRecord& record, FixCategory category) {
  if (!record.known_labels) throw Error("record " + record.id + ": no fix-category labels");
  return record.known_labels->contains(category);
}

TrainingPool augment_training_pool(const Corpus& corpus, FixCategory category, std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < corpus.size(); ++i) (in_class(corpus[i], category) ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) {
    throw Error(std::string("category ") + std::string(category_id(category)) +
                ": both classes need at least one record");
  }
  TrainingPool pool;
  pool.records = corpus;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    pool.positive.push_back(in_class(corpus[i], category));
    pool.augmented_from.emplace_back();
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const bool self_pos = pool.positive[i];
    const std::size_t p = self_pos ? i : pos[uniform_index(rng, pos.size())];
    const std::size_t n = self_pos ? neg[uniform_index(rng, neg.size())] : i;
    for (std::size_t src : {p, n}) {
      pool.records.push_back(augment_record(corpus[src], rng()));
      pool.positive.push_back(src == p);
      pool.augmented_from.push_back(corpus[src].id);
    }
  }
  return pool;
}

}  // namespace flakyfix
