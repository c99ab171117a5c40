#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace bgrid {

/// Formats a double with 12 significant digits, '.' decimal point,
/// locale-independent. All CSV output goes through this so that identical
/// runs produce identical bytes.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Minimal CSV emitter: comma separators, LF line endings, one header row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<const char*> header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path);
    bool first = true;
    for (const char* h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }

  CsvWriter& field(const std::string& s) {
    sep();
    out_ << s;
    return *this;
  }
  CsvWriter& field(const char* s) { return field(std::string(s)); }
  CsvWriter& field(double v) { return field(format_double(v)); }
  CsvWriter& field(int v) { return field(std::to_string(v)); }
  CsvWriter& field(long v) { return field(std::to_string(v)); }
  CsvWriter& field(unsigned long long v) { return field(std::to_string(v)); }

  void endrow() {
    out_ << '\n';
    row_open_ = false;
  }

 private:
  void sep() {
    if (row_open_) out_ << ',';
    row_open_ = true;
  }

  std::ofstream out_;
  bool row_open_ = false;
};

}  // namespace bgrid
