#pragma once

#include <array>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flakyfix {

// The 13 fix categories, in descending frequency order of the reference
// labeling of the public flaky-test dataset.
enum class FixCategory {
  ChangeAssertion,
  ChangeCondition,
  ResetVariable,
  ReorderData,
  ChangeDataStructure,
  HandleException,
  Miscellaneous,
  ChangeDataFormat,
  ReorderParameters,
  CallStaticMethod,
  StringMatching,
  ChangeTimezone,
  HandleTimeout,
};

inline constexpr std::size_t kCategoryCount = 13;

inline constexpr std::array<FixCategory, kCategoryCount> kAllCategories = {
    FixCategory::ChangeAssertion,   FixCategory::ChangeCondition,
    FixCategory::ResetVariable,     FixCategory::ReorderData,
    FixCategory::ChangeDataStructure, FixCategory::HandleException,
    FixCategory::Miscellaneous,     FixCategory::ChangeDataFormat,
    FixCategory::ReorderParameters, FixCategory::CallStaticMethod,
    FixCategory::StringMatching,    FixCategory::ChangeTimezone,
    FixCategory::HandleTimeout,
};

/// Identifier form, e.g. "ChangeDataStructure".
std::string_view category_id(FixCategory c);
/// Human form used in prompts and reports, e.g. "Change Data Structure".
std::string_view category_display_name(FixCategory c);
/// Accepts either the identifier or the display name, case-insensitively.
std::optional<FixCategory> parse_category(std::string_view text);

// Nonempty set of categories. Miscellaneous only ever appears alone.
class LabelSet {
 public:
  /// Throws flakyfix::Error when empty or when Miscellaneous is mixed in.
  explicit LabelSet(std::initializer_list<FixCategory> cats);
  static LabelSet from(const std::vector<FixCategory>& cats);
  static LabelSet miscellaneous() { return LabelSet({FixCategory::Miscellaneous}); }

  bool contains(FixCategory c) const { return bits_ & bit(c); }
  std::size_t size() const;
  /// Members in canonical (enum) order.
  std::vector<FixCategory> categories() const;
  /// Display names joined by ", ".
  std::string display_names() const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  LabelSet() = default;
  static unsigned bit(FixCategory c) { return 1u << static_cast<unsigned>(c); }
  void validate() const;
  unsigned bits_ = 0;
};

}  // namespace flakyfix
