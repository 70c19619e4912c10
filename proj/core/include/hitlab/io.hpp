#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "hitlab/spectra.hpp"

namespace hitlab {

/// Shortest "%.17g" rendering; identical bits always give identical text.
std::string format_double(double v);

/// Writes `content` to `path` through `path.partial` and a rename, so a
/// reader never sees a half-written file. Throws ErrorCode::io_failure.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Small CSV builder: one header line, then rows of numbers or text.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(std::initializer_list<double> values);
  void add_row(const std::vector<double>& values);
  /// Row of pre-formatted cells (e.g. labels mixed with numbers).
  void add_text_row(const std::vector<std::string>& cells);

  std::size_t columns() const noexcept { return columns_.size(); }
  std::size_t rows() const noexcept { return rows_; }
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::string body_;
  std::size_t rows_ = 0;
};

/// Spectrum snapshot CSV `k,E,nu,t`.
std::string spectrum_csv(const SpectralState& state);

/// Parses a snapshot; the grid is rebuilt from the first and last k and the
/// row count, and every k must match the rebuilt node to 1e-12 relative.
SpectralState parse_spectrum_csv(std::string_view text);
SpectralState read_spectrum_csv(const std::filesystem::path& path);

}  // namespace hitlab
