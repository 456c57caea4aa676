#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flakyfix/category.hpp"
#include "flakyfix/corpus.hpp"
#include "flakyfix/random.hpp"

namespace flakyfix {

/// Five lowercase alphanumeric characters.
std::string random_suffix(Rng& rng);

/// Renames the test to `<name>_<suffix>` and rewrites integer, string and
/// boolean literals with fresh random values. When the record carries a fix,
/// only lines shared by both versions are rewritten (identically in both), so
/// changed lines stay byte-identical and the fix labels are preserved. The id
/// gains the same suffix.
TestRecord augment_record(const TestRecord& record, std::uint64_t seed);

bool in_class(const TestRecord& record, FixCategory category);

// Original records followed by synthetic ones. Every original yields one
// synthetic positive and one synthetic negative for the category, so the
// pool holds 3n records.
struct TrainingPool {
  Corpus records;
  std::vector<bool> positive;               // class membership per record
  std::vector<std::string> augmented_from;  // source id, empty for originals
};

/// Throws flakyfix::Error when a record lacks labels or a class is empty.
TrainingPool augment_training_pool(const Corpus& corpus, FixCategory category, std::uint64_t seed);

}  // namespace flakyfix
