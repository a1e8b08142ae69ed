#pragma once

#include <string>
#include <vector>

namespace entac {

/// One CSV document: header plus rows, quoted per RFC 4180 on write.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  /// Appends a row; its width must match the header.
  void add_row(std::vector<std::string> row);

  /// Floating-point cell rendered with 6 significant digits.
  static std::string cell(double value);
  static std::string cell(int value);
  static std::string cell(long long value);
  static std::string cell(unsigned long long value);

  /// Serializes header + rows; fields containing separators or quotes are
  /// quoted with doubled inner quotes. Rows end with '\n'.
  std::string to_string() const;

  /// Writes to_string() to a file; raises std::runtime_error on I/O failure.
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace entac
