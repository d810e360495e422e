#include "opml/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "opml/error.hpp"

namespace opml::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw ParseError("cli-io", "line " + std::to_string(line) + ": cannot parse '" +
                                   std::string(cell) + "' as a number");
  }
  return value;
}

}  // namespace

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cli-io", "cannot open " + path.string());
  return is;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("cli-io", "cannot write " + path.string());
  return os;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Dataset read_csv(std::istream& is, bool labeled) {
  std::vector<double> values;
  std::vector<int> labels;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = cells.size();
      if (labeled && cols < 2) throw ParseError("cli-io", "labeled CSV needs at least one feature column");
    } else if (cells.size() != cols) {
      throw ParseError("cli-io", "line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(cols) + " columns, found " +
                                     std::to_string(cells.size()));
    }
    const std::size_t features = labeled ? cols - 1 : cols;
    for (std::size_t c = 0; c < features; ++c) values.push_back(parse_number<double>(cells[c], line_no));
    if (labeled) labels.push_back(parse_number<int>(cells.back(), line_no));
    ++rows;
  }
  const std::size_t d = labeled ? cols - 1 : cols;
  RowMatrix X(static_cast<Index>(rows), static_cast<Index>(d));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < d; ++c) X(static_cast<Index>(i), static_cast<Index>(c)) = values[i * d + c];
  }
  return {FeatureMatrix(std::move(X)), std::move(labels)};
}

Dataset read_csv(const std::filesystem::path& path, bool labeled) {
  auto is = open_input(path);
  return read_csv(is, labeled);
}

void write_csv(std::ostream& os, const RowMatrix& X, const std::vector<int>* labels) {
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index c = 0; c < X.cols(); ++c) {
      if (c > 0) os << ',';
      os << format_double(X(i, c));
    }
    if (labels != nullptr) os << ',' << (*labels)[static_cast<std::size_t>(i)];
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const RowMatrix& X, const std::vector<int>* labels) {
  auto os = open_output(path);
  write_csv(os, X, labels);
}

std::vector<int> read_labels(std::istream& is) {
  std::vector<int> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    out.push_back(parse_number<int>(line, line_no));
  }
  return out;
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  auto is = open_input(path);
  return read_labels(is);
}

void write_labels(std::ostream& os, const std::vector<int>& labels) {
  for (const int l : labels) os << l << '\n';
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  auto os = open_output(path);
  write_labels(os, labels);
}

}  // namespace opml::io
