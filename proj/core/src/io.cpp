#include "hitlab/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hitlab/error.hpp"

namespace hitlab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::io_failure, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_failure, "cannot open " + tmp.string() + ": " + std::strerror(errno));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::io_failure, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io_failure, "rename to " + path.string() + " failed: " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::initializer_list<double> values) {
  add_row(std::vector<double>(values));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_text_row(cells);
}

void CsvTable::add_text_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw Error(ErrorCode::length_mismatch, "row has " + std::to_string(cells.size()) +
                                                " cells, table has " + std::to_string(columns_.size()));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const {
  std::string head;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) head += ',';
    head += columns_[i];
  }
  return head + '\n' + body_;
}

std::string spectrum_csv(const SpectralState& state) {
  CsvTable t({"k", "E", "nu", "t"});
  const auto k = state.mesh().nodes();
  for (std::size_t i = 0; i < k.size(); ++i) t.add_row({k[i], state.E[i], state.nu, state.t});
  return t.str();
}

SpectralState parse_spectrum_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("k,E,nu,t", 0) != 0) {
    throw Error(ErrorCode::config_invalid, "spectrum file must start with the header k,E,nu,t");
  }
  std::vector<double> k, E;
  double nu = 0.0, t = 0.0;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double v[4];
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3]) != 4) {
      throw Error(ErrorCode::config_invalid, "malformed spectrum row " + std::to_string(row));
    }
    if (!k.empty() && (v[2] != nu || v[3] != t)) {
      throw Error(ErrorCode::config_invalid, "nu and t must be constant across the file");
    }
    k.push_back(v[0]);
    E.push_back(v[1]);
    nu = v[2];
    t = v[3];
  }
  if (k.size() < 2) throw Error(ErrorCode::config_invalid, "spectrum file needs at least two rows");
  GridPtr g = make_shared_grid(k.front(), k.back(), k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (std::abs(g->node(i) - k[i]) > 1e-12 * k[i]) {
      throw Error(ErrorCode::config_invalid, "spectrum nodes are not geometric (row " + std::to_string(i + 2) + ")");
    }
  }
  SpectralState s{g, std::move(E), t, nu};
  s.validate();
  return s;
}

SpectralState read_spectrum_csv(const std::filesystem::path& path) {
  return parse_spectrum_csv(read_file(path));
}

}  // namespace hitlab
