#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "opml/features.hpp"
#include "opml/types.hpp"

namespace opml::io {

/// Rows of a dataset CSV; `labels` is filled only for labeled files.
struct Dataset {
  FeatureMatrix X;
  std::vector<int> labels;
};

/// Comma-separated, no header, rectangular. With `labeled`, the last column
/// is an integer label.
Dataset read_csv(std::istream& is, bool labeled);
Dataset read_csv(const std::filesystem::path& path, bool labeled);

/// Values printed with 17 significant digits, so reading back is exact.
void write_csv(std::ostream& os, const RowMatrix& X, const std::vector<int>* labels = nullptr);
void write_csv(const std::filesystem::path& path, const RowMatrix& X,
               const std::vector<int>* labels = nullptr);

/// One integer per line (-1 = noise).
std::vector<int> read_labels(std::istream& is);
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(std::ostream& os, const std::vector<int>& labels);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

/// Opens for writing or throws a ParseError naming the path.
std::ofstream open_output(const std::filesystem::path& path);
std::ifstream open_input(const std::filesystem::path& path);

}  // namespace opml::io
