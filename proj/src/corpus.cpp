#include "flakyfix/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "flakyfix/csv.hpp"
#include "flakyfix/error.hpp"
#include "flakyfix/hashing.hpp"

namespace flakyfix {
namespace {

using nlohmann::json;

const std::vector<std::string> kCsvColumns = {"id",      "project", "test_name", "flaky_code",
                                              "fixed_code", "labels", "outcome",  "url",
                                              "date"};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read corpus file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

ExecutionOutcome parse_outcome(std::string_view s, const std::string& where) {
  if (s == "pass") return ExecutionOutcome::Pass;
  if (s == "fail") return ExecutionOutcome::Fail;
  if (s == "unknown") return ExecutionOutcome::Unknown;
  throw Error(where + ": unknown outcome '" + std::string(s) + "'");
}

LabelSet parse_labels(const std::vector<std::string>& names, const std::string& where) {
  std::vector<FixCategory> cats;
  for (const auto& n : names) {
    auto c = parse_category(n);
    if (!c) throw Error(where + ": unknown fix category '" + n + "'");
    cats.push_back(*c);
  }
  try {
    return LabelSet::from(cats);
  } catch (const Error& e) {
    throw Error(where + ": " + e.what());
  }
}

void validate(const TestRecord& r, const std::string& where) {
  if (r.id.empty()) throw Error(where + ": missing id");
  if (r.flaky_code.empty()) throw Error(where + ": missing flaky_code");
  if (r.fixed_code && r.fixed_code->empty()) throw Error(where + ": empty fixed_code");
}

std::optional<std::string> opt_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(where + ": field '" + key + "' must be a string");
  return it->get<std::string>();
}

TestRecord record_from_json(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw Error(where + ": record is not a JSON object");
  TestRecord r;
  r.id = opt_string(obj, "id", where).value_or("");
  r.project = opt_string(obj, "project", where).value_or("");
  r.test_name = opt_string(obj, "test_name", where).value_or("");
  r.flaky_code = opt_string(obj, "flaky_code", where).value_or("");
  r.fixed_code = opt_string(obj, "fixed_code", where);
  if (auto it = obj.find("labels"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw Error(where + ": labels must be an array");
    std::vector<std::string> names;
    for (const auto& v : *it) {
      if (!v.is_string()) throw Error(where + ": labels must be strings");
      names.push_back(v.get<std::string>());
    }
    if (!names.empty()) r.known_labels = parse_labels(names, where);
  }
  if (auto o = opt_string(obj, "outcome", where)) r.execution_outcome = parse_outcome(*o, where);
  r.source_url = opt_string(obj, "url", where);
  r.date = opt_string(obj, "date", where);
  validate(r, where);
  return r;
}

json record_to_json(const TestRecord& r) {
  json obj = json::object();
  obj["id"] = r.id;
  obj["project"] = r.project;
  obj["test_name"] = r.test_name;
  obj["flaky_code"] = r.flaky_code;
  if (r.fixed_code) obj["fixed_code"] = *r.fixed_code;
  if (r.known_labels) {
    json labels = json::array();
    for (auto c : r.known_labels->categories()) labels.push_back(std::string(category_id(c)));
    obj["labels"] = labels;
  }
  if (r.execution_outcome) obj["outcome"] = std::string(outcome_name(*r.execution_outcome));
  if (r.source_url) obj["url"] = *r.source_url;
  if (r.date) obj["date"] = *r.date;
  return obj;
}

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) pos = s.size();
    std::string part(s.substr(start, pos - start));
    if (!part.empty()) out.push_back(part);
    start = pos + 1;
  }
  return out;
}

std::chrono::year_month_day parse_date(std::string_view s) {
  auto fail = [&]() -> std::chrono::year_month_day {
    throw Error("unparseable date '" + std::string(s) + "' (expected YYYY-MM-DD)");
  };
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return fail();
  int y = 0;
  unsigned m = 0, d = 0;
  auto ok = [](std::string_view part, auto& v) {
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    return ec == std::errc{} && p == part.data() + part.size();
  };
  if (!ok(s.substr(0, 4), y) || !ok(s.substr(5, 2), m) || !ok(s.substr(8, 2), d)) return fail();
  if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return fail();
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return fail();
  return ymd;
}

}  // namespace

std::string_view outcome_name(ExecutionOutcome o) {
  switch (o) {
    case ExecutionOutcome::Pass: return "pass";
    case ExecutionOutcome::Fail: return "fail";
    case ExecutionOutcome::Unknown: return "unknown";
  }
  return "unknown";
}

CorpusFormat format_for_path(const std::string& path) {
  auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == "csv") return CorpusFormat::Csv;
  }
  return CorpusFormat::Jsonl;
}

std::string normalize_whitespace(std::string_view code) {
  std::string out;
  out.reserve(code.size());
  std::string line;
  auto flush_line = [&] {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
      line.pop_back();
    }
    out += line;
    line.clear();
  };
  for (char c : code) {
    if (c == '\n') {
      flush_line();
      out.push_back('\n');
    } else if (c == ' ' || c == '\t') {
      if (line.empty() || line.back() != ' ') line.push_back(' ');
    } else {
      line.push_back(c);
    }
  }
  flush_line();
  return out;
}

std::string content_hash(std::string_view code) { return sha256_hex(normalize_whitespace(code)); }

Corpus deduplicate(const Corpus& corpus) {
  Corpus out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::unordered_map<std::string, std::size_t> ids;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& r = corpus[i];
    if (!seen.insert({r.project, r.test_name, content_hash(r.flaky_code)}).second) continue;
    if (!ids.emplace(r.id, i).second) {
      throw Error("record " + std::to_string(i + 1) + ": duplicate id '" + r.id + "'");
    }
    out.push_back(r);
  }
  return out;
}

Corpus parse_corpus_jsonl(std::string_view text) {
  Corpus records;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(where + ": malformed JSON: " + e.what());
    }
    records.push_back(record_from_json(obj, where));
  }
  return deduplicate(records);
}

Corpus parse_corpus_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw Error("csv corpus: header row required");
  const auto& header = rows.front();
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"id", "flaky_code"}) {
    if (!col.count(required)) throw Error(std::string("csv corpus: missing column '") + required + "'");
  }
  Corpus records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    const std::string where = "record " + std::to_string(r);
    auto get = [&](const std::string& name) -> std::optional<std::string> {
      auto it = col.find(name);
      if (it == col.end() || it->second >= row.size() || row[it->second].empty()) return std::nullopt;
      return row[it->second];
    };
    TestRecord rec;
    rec.id = get("id").value_or("");
    rec.project = get("project").value_or("");
    rec.test_name = get("test_name").value_or("");
    rec.flaky_code = get("flaky_code").value_or("");
    rec.fixed_code = get("fixed_code");
    if (auto labels = get("labels")) rec.known_labels = parse_labels(split_on(*labels, ';'), where);
    if (auto o = get("outcome")) rec.execution_outcome = parse_outcome(*o, where);
    rec.source_url = get("url");
    rec.date = get("date");
    validate(rec, where);
    records.push_back(std::move(rec));
  }
  return deduplicate(records);
}

Corpus load_corpus(const std::string& path, CorpusFormat format) {
  const std::string text = read_file(path);
  return format == CorpusFormat::Csv ? parse_corpus_csv(text) : parse_corpus_jsonl(text);
}

Corpus load_corpus(const std::string& path) { return load_corpus(path, format_for_path(path)); }

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& r : corpus) {
    out += record_to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

std::string to_csv(const Corpus& corpus) {
  std::string out = csv::format_row(kCsvColumns);
  for (const auto& r : corpus) {
    std::string labels;
    if (r.known_labels) {
      for (auto c : r.known_labels->categories()) {
        if (!labels.empty()) labels.push_back(';');
        labels += category_id(c);
      }
    }
    out += csv::format_row({r.id, r.project, r.test_name, r.flaky_code, r.fixed_code.value_or(""),
                            labels,
                            r.execution_outcome ? std::string(outcome_name(*r.execution_outcome)) : "",
                            r.source_url.value_or(""), r.date.value_or("")});
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format) {
  write_file(path, format == CorpusFormat::Csv ? to_csv(corpus) : to_jsonl(corpus));
}

// --- diff -------------------------------------------------------------------

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  if (text.empty()) return lines;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return lines;
}

CodeDiff compute_diff(std::string_view old_text, std::string_view new_text) {
  const auto a = split_lines(old_text);
  const auto b = split_lines(new_text);
  const std::size_t n = a.size(), m = b.size();
  // lcs[i][j] = LCS length of a[i..] and b[j..]
  std::vector<std::uint32_t> lcs((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return lcs[i * (m + 1) + j]; };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      at(i, j) = a[i] == b[j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
    }
  }
  CodeDiff diff;
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      diff.lines.push_back({DiffKind::Context, a[i], i + 1, j + 1});
      ++i;
      ++j;
    } else if (j >= m || (i < n && at(i + 1, j) >= at(i, j + 1))) {
      diff.lines.push_back({DiffKind::Deleted, a[i], i + 1, std::nullopt});
      ++i;
    } else {
      diff.lines.push_back({DiffKind::Added, b[j], std::nullopt, j + 1});
      ++j;
    }
  }
  return diff;
}

std::vector<const DiffLine*> CodeDiff::added() const {
  std::vector<const DiffLine*> out;
  for (const auto& l : lines) {
    if (l.kind == DiffKind::Added) out.push_back(&l);
  }
  return out;
}

std::vector<const DiffLine*> CodeDiff::deleted() const {
  std::vector<const DiffLine*> out;
  for (const auto& l : lines) {
    if (l.kind == DiffKind::Deleted) out.push_back(&l);
  }
  return out;
}

namespace {
std::string join_kinds(const std::vector<DiffLine>& lines, DiffKind keep) {
  std::string out;
  bool first = true;
  for (const auto& l : lines) {
    if (l.kind != DiffKind::Context && l.kind != keep) continue;
    if (!first) out.push_back('\n');
    out += l.text;
    first = false;
  }
  return out;
}
}  // namespace

std::string CodeDiff::old_text() const { return join_kinds(lines, DiffKind::Deleted); }
std::string CodeDiff::new_text() const { return join_kinds(lines, DiffKind::Added); }

// --- filtering ----------------------------------------------------------------

RecordPredicate parse_predicate(std::string_view spec) {
  auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? "" : spec.substr(colon + 1);
  if (name == "has_fix" && colon == std::string_view::npos) return HasFix{};
  if (name == "fixed_after") {
    parse_date(arg);
    return FixedAfter{std::string(arg.substr(0, 10))};
  }
  if (name == "project_in") {
    auto parts = split_on(arg, ',');
    return ProjectIn{{parts.begin(), parts.end()}};
  }
  if (name == "min_project_count") {
    std::size_t n = 0;
    auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (ec != std::errc{} || p != arg.data() + arg.size()) {
      throw Error("min_project_count needs an integer, got '" + std::string(arg) + "'");
    }
    return MinProjectCount{n};
  }
  throw Error("unknown filter predicate '" + std::string(spec) + "'");
}

Corpus filter_records(const Corpus& corpus, const RecordPredicate& predicate) {
  Corpus out;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, HasFix>) {
          for (const auto& r : corpus) {
            if (r.has_fix()) out.push_back(r);
          }
        } else if constexpr (std::is_same_v<P, FixedAfter>) {
          const auto cutoff = std::chrono::sys_days(parse_date(p.date));
          for (const auto& r : corpus) {
            if (r.date && std::chrono::sys_days(parse_date(*r.date)) > cutoff) out.push_back(r);
          }
        } else if constexpr (std::is_same_v<P, ProjectIn>) {
          for (const auto& r : corpus) {
            if (p.projects.count(r.project)) out.push_back(r);
          }
        } else {
          std::map<std::string, std::size_t> counts;
          for (const auto& r : corpus) ++counts[r.project];
          for (const auto& r : corpus) {
            if (counts[r.project] >= p.n) out.push_back(r);
          }
        }
      },
      predicate);
  return out;
}

}  // namespace flakyfix
