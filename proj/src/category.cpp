#include "flakyfix/category.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "flakyfix/error.hpp"

namespace flakyfix {
namespace {

struct Names {
  std::string_view id;
  std::string_view display;
};

constexpr std::array<Names, kCategoryCount> kNames = {{
    {"ChangeAssertion", "Change Assertion"},
    {"ChangeCondition", "Change Condition"},
    {"ResetVariable", "Reset Variable"},
    {"ReorderData", "Reorder Data"},
    {"ChangeDataStructure", "Change Data Structure"},
    {"HandleException", "Handle Exception"},
    {"Miscellaneous", "Miscellaneous"},
    {"ChangeDataFormat", "Change Data Format"},
    {"ReorderParameters", "Reorder Parameters"},
    {"CallStaticMethod", "Call Static Method"},
    {"StringMatching", "String Matching"},
    {"ChangeTimezone", "Change Timezone"},
    {"HandleTimeout", "Handle Timeout"},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view category_id(FixCategory c) { return kNames[static_cast<std::size_t>(c)].id; }

std::string_view category_display_name(FixCategory c) {
  return kNames[static_cast<std::size_t>(c)].display;
}

std::optional<FixCategory> parse_category(std::string_view text) {
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    if (iequals(text, kNames[i].id) || iequals(text, kNames[i].display)) {
      return kAllCategories[i];
    }
  }
  return std::nullopt;
}

LabelSet::LabelSet(std::initializer_list<FixCategory> cats) {
  for (auto c : cats) bits_ |= bit(c);
  validate();
}

LabelSet LabelSet::from(const std::vector<FixCategory>& cats) {
  LabelSet s;
  for (auto c : cats) s.bits_ |= bit(c);
  s.validate();
  return s;
}

void LabelSet::validate() const {
  if (bits_ == 0) throw Error("label set must be nonempty");
  if (contains(FixCategory::Miscellaneous) && size() != 1) {
    throw Error("Miscellaneous cannot be combined with other categories");
  }
}

std::size_t LabelSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<FixCategory> LabelSet::categories() const {
  std::vector<FixCategory> out;
  for (auto c : kAllCategories) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

std::string LabelSet::display_names() const {
  std::string out;
  for (auto c : categories()) {
    if (!out.empty()) out += ", ";
    out += category_display_name(c);
  }
  return out;
}

}  // namespace flakyfix
