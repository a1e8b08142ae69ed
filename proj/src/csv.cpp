#include "entac/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "entac/errors.hpp"

namespace entac {
namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

void append_field(std::string& out, const std::string& field) {
  if (!needs_quoting(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ',';
    append_field(out, row[i]);
  }
  out += '\n';
}

}  // namespace

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw ContractError("csv row width does not match header");
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::cell(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

std::string CsvTable::cell(int value) { return std::to_string(value); }
std::string CsvTable::cell(long long value) { return std::to_string(value); }
std::string CsvTable::cell(unsigned long long value) { return std::to_string(value); }

std::string CsvTable::to_string() const {
  std::string out;
  append_row(out, header_);
  for (const auto& row : rows_) append_row(out, row);
  return out;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out << to_string();
  if (!out) {
    throw std::runtime_error("failed to write csv: " + path);
  }
}

}  // namespace entac
