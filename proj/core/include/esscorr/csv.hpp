#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace esscorr {

/// Shortest decimal text that round-trips a double (17 significant digits).
std::string format_double(double v);

/// Row-oriented CSV emitter with a fixed header. Cells are written with
/// operator<< and a row is closed with end_row().
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns);

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(int v);
  CsvWriter& operator<<(long long v);
  CsvWriter& operator<<(std::string_view v);

  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t cell_ = 0;
};

}  // namespace esscorr
