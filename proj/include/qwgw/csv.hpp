#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace qwgw {

/// Shortest round-trippable rendering used in every artifact: %.17g.
std::string format_real(double v);

/// Comma-separated writer with a header row. Throws IoError naming the path
/// when the file cannot be opened or written.
class CsvWriter {
 public:
  CsvWriter(std::string path, std::initializer_list<std::string_view> header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);
  /// Flushes and closes; throws IoError on a failed write.
  void close();
  std::size_t rows() const { return rows_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t rows_ = 0;
};

}  // namespace qwgw
