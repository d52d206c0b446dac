#include "flowres/csv.hpp"

#include <fstream>

#include "flowres/errors.hpp"

namespace flowres::csv {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

void for_each_row(const std::string& path,
                  const std::vector<std::string>& expected_header,
                  const std::function<void(size_t, const std::vector<std::string>&)>& row) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);

  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::ParseError, path + ": missing header");
  const auto header = split_line(line);
  if (header != expected_header)
    throw Error(ErrorCode::ParseError, path + ":1: unexpected header");

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_line(line);
    if (fields.size() != expected_header.size())
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(expected_header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    row(line_no, fields);
  }
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace flowres::csv
