#include "qwgw/csv.hpp"

#include <fmt/format.h>

#include "qwgw/types.hpp"

namespace qwgw {

// signed zero prints as 0
std::string format_real(double v) { return fmt::format("{:.17g}", v + 0.0); }

CsvWriter::CsvWriter(std::string path, std::initializer_list<std::string_view> header)
    : path_(std::move(path)), out_(path_, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot open '" + path_ + "' for writing");
  bool first = true;
  for (auto h : header) {
    if (!first) out_ << ',';
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

CsvWriter::~CsvWriter() {
  if (out_.is_open()) out_.close();
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::vector<double>(values));
}

void CsvWriter::row(const std::vector<double>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_real(values[i]);
  }
  line += '\n';
  out_ << line;
  if (!out_) throw IoError("write failed for '" + path_ + "'");
  ++rows_;
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw IoError("write failed for '" + path_ + "'");
  out_.close();
}

}  // namespace qwgw
