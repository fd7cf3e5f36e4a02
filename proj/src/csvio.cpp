#include "esqpt/csvio.hpp"

#include <cstdio>
#include <stdexcept>

namespace esqpt {

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open output file: " + path);
  out_ << "# esqpt " << kArtifactVersion << "\n";
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::meta(const std::string& key, const std::string& value) {
  out_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::meta(const std::string& key, double value) { meta(key, format(value)); }

void CsvWriter::meta(const std::string& key, long long value) { meta(key, format(value)); }

void CsvWriter::columns(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
  out_ << "\n";
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string CsvWriter::format(int v) { return std::to_string(v); }

std::string CsvWriter::format(long long v) { return std::to_string(v); }

}  // namespace esqpt
