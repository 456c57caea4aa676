#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flakyfix {

struct EditDistance {
  std::size_t distance = 0;
  // distance / reference token count; empty when the reference is empty but
  // the candidate is not.
  std::optional<double> pct_changed;
  bool pct_undefined() const { return !pct_changed.has_value(); }
};

/// Levenshtein distance with unit costs.
std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b);

EditDistance token_edit_distance(const std::vector<std::string>& candidate,
                                 const std::vector<std::string>& reference);
EditDistance token_edit_distance(std::string_view candidate_code, std::string_view reference_code);

}  // namespace flakyfix
