#include "esscorr/csv.hpp"

#include <cstdio>
#include <stdexcept>

#include "esscorr/error.hpp"

namespace esscorr {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns)
    : out_(out), columns_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out_ << (i == 0 ? "" : ",") << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::separator() {
  if (cell_ >= columns_) {
    throw ValidationError("CSV row has more cells than header columns");
  }
  if (cell_ > 0) {
    out_ << ',';
  }
  ++cell_;
}

CsvWriter& CsvWriter::operator<<(double v) {
  separator();
  out_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(int v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::string_view v) {
  separator();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  if (cell_ != columns_) {
    throw ValidationError("CSV row is shorter than the header");
  }
  out_ << '\n';
  cell_ = 0;
}

}  // namespace esscorr
