#pragma once

#include <functional>
#include <string>
#include <vector>

namespace flowres::csv {

/// Splits one CSV line. Handles double-quoted fields with "" escapes.
std::vector<std::string> split_line(const std::string& line);

/// Reads a headered CSV file and calls `row` for each data row with fields
/// matching the expected header order. Field count mismatches and missing
/// header columns raise ParseError naming the file and 1-based line number.
void for_each_row(const std::string& path,
                  const std::vector<std::string>& expected_header,
                  const std::function<void(size_t line_no,
                                           const std::vector<std::string>&)>& row);

std::string quote(const std::string& field);

}  // namespace flowres::csv
