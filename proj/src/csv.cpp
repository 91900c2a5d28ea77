#include "dekreg/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dekreg/errors.hpp"
#include "dekreg/format.hpp"

namespace dekreg {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '"'; };
  while (!s.empty() && !not_space(s.back())) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && !not_space(s[start])) ++start;
  return s.substr(start);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& field, std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  if (field.empty() || res.ec != std::errc() || res.ptr != end) {
    throw InputError("line " + std::to_string(line_no) + ": '" + field + "' is not a number");
  }
  return value;
}

}  // namespace

Dataset parse_xy_csv(const std::string& text,
                     const std::vector<std::pair<std::string, std::string>>& accepted_headers) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<double> x, y;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (!have_header) {
      if (fields.size() != 2) {
        throw InputError("line " + std::to_string(line_no) + ": header must have two columns");
      }
      bool ok = false;
      for (const auto& [hx, hy] : accepted_headers) ok = ok || (fields[0] == hx && fields[1] == hy);
      if (!ok) {
        std::string expected;
        for (const auto& [hx, hy] : accepted_headers) {
          expected += (expected.empty() ? "" : " or ") + hx + "," + hy;
        }
        throw InputError("line " + std::to_string(line_no) + ": header '" + trim(line) +
                         "' (expected " + expected + ")");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 2) {
      throw InputError("line " + std::to_string(line_no) + ": expected 2 fields, found " +
                       std::to_string(fields.size()));
    }
    x.push_back(parse_number(fields[0], line_no));
    y.push_back(parse_number(fields[1], line_no));
    if (!std::isfinite(x.back()) || !std::isfinite(y.back())) {
      throw InputError("line " + std::to_string(line_no) + ": value is not finite");
    }
  }
  if (!have_header) throw InputError("line 1: missing header row");
  if (x.empty()) throw InputError("line " + std::to_string(line_no) + ": no data rows");
  return Dataset(std::move(x), std::move(y));
}

Dataset read_xy_csv(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& accepted_headers) {
  return parse_xy_csv(read_text_file(path), accepted_headers);
}

std::string dataset_to_csv(const Dataset& data, const std::string& x_name,
                           const std::string& y_name) {
  std::string out = x_name + "," + y_name + "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out += format_exact(data.x()[i]) + "," + format_exact(data.y()[i]) + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace dekreg
