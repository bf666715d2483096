#ifndef RELAXLIM_CSV_HPP_
#define RELAXLIM_CSV_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace relaxlim {

/// Shortest round-trip text for a double ("nan"/"inf" for non-finite).
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header)
      : os_(path), path_(path) {
    if (!os_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os_ << header << '\n';
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) os_ << ',';
      os_ << format_number(v);
      first = false;
    }
    os_ << '\n';
  }

  std::ostream& stream() { return os_; }

 private:
  std::ofstream os_;
  std::filesystem::path path_;
};

}  // namespace relaxlim

#endif  // RELAXLIM_CSV_HPP_
