#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace flakyfix::csv {

using Row = std::vector<std::string>;

/// RFC-4180 reader: quoted fields may contain commas, CR/LF and doubled
/// quotes. Throws flakyfix::Error on an unterminated quoted field.
std::vector<Row> parse(std::string_view text);

/// Quotes a field only when needed.
std::string escape(std::string_view field);

std::string format_row(const Row& row);

}  // namespace flakyfix::csv
