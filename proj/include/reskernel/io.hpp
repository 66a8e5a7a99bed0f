#pragma once

// Plain-text formats: time series (one value per line, u(0) first) and CSV
// output with 17 significant digits, '.' decimal separator and LF endings.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "motifs.hpp"
#include "numerics.hpp"
#include "temporal_kernel.hpp"

namespace reskernel {

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trippable form is not required; fixed 17 significant digits
// keeps files byte-stable.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline TimeSeries parse_time_series(std::string_view text) {
  Vector values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty()) continue;
    double v = 0.0;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), v);
    if (res.ec != std::errc{} || res.ptr != line.data() + line.size() || !std::isfinite(v))
      throw io_error(detail::concat("time series line ", line_no, ": not a finite number: '",
                                    std::string(line), "'"));
    values.push_back(v);
  }
  if (values.empty()) throw io_error("time series is empty");
  return TimeSeries(std::move(values));
}

inline TimeSeries read_time_series(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open time series file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_time_series(ss.str());
}

inline std::string time_series_text(const TimeSeries& u) {
  std::string out;
  for (double v : u.values) out += format_double(v) + "\n";
  return out;
}

inline std::string matrix_csv(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

// Header `index,weight,m_1,...,m_tau`, one motif per row, 1-based index.
inline std::string motifs_csv(const std::vector<Vector>& motifs, const Vector& weights, std::size_t tau) {
  std::string out = "index,weight";
  for (std::size_t k = 1; k <= tau; ++k) out += ",m_" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < motifs.size(); ++i) {
    out += std::to_string(i + 1) + ',' + format_double(weights[i]);
    for (double x : motifs[i]) out += ',' + format_double(x);
    out += '\n';
  }
  return out;
}

inline std::string motifs_csv(const MotifSet& set) { return motifs_csv(set.motifs, set.weights, set.tau); }

// Writes to a sibling temporary file and renames it into place, so readers
// never observe a half-written file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw io_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("cannot rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
}

}  // namespace reskernel
