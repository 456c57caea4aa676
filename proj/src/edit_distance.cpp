#include "flakyfix/edit_distance.hpp"

#include <algorithm>
#include <numeric>

#include "flakyfix/java_lexer.hpp"

namespace flakyfix {

std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

EditDistance token_edit_distance(const std::vector<std::string>& candidate,
                                 const std::vector<std::string>& reference) {
  EditDistance out;
  out.distance = levenshtein(candidate, reference);
  if (!reference.empty()) {
    out.pct_changed = static_cast<double>(out.distance) / static_cast<double>(reference.size());
  } else if (candidate.empty()) {
    out.pct_changed = 0.0;
  }
  return out;
}

EditDistance token_edit_distance(std::string_view candidate_code, std::string_view reference_code) {
  return token_edit_distance(tokenize_java(candidate_code).texts(),
                             tokenize_java(reference_code).texts());
}

}  // namespace flakyfix
