#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace hitlab::app {

/// Collects the artifacts of one subcommand and writes the manifest last.
class OutputSet {
 public:
  OutputSet(std::filesystem::path dir, std::string command, const RunConfig& config);

  void write(const std::string& name, const std::string& content);
  /// Values derived while running (grid extent, resolved sample rate, ...).
  nlohmann::ordered_json& resolved() { return resolved_; }
  void finish();

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::string command_;
  nlohmann::ordered_json config_;
  nlohmann::ordered_json resolved_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json files_ = nlohmann::ordered_json::array();
};

struct Context {
  RunConfig config;
  std::function<void(const std::string&)> log;
  /// Human-readable results (fit law, oracle values).
  std::function<void(const std::string&)> print;
};

void cmd_decay(const Context& ctx, bool analyze);
void cmd_forced(const Context& ctx, bool analyze);
void cmd_sweep(const Context& ctx);
void cmd_fit(const Context& ctx);
void cmd_collapse(const Context& ctx);
void cmd_temporal(const Context& ctx);
void cmd_rg(const Context& ctx);

struct PoiseuilleArgs {
  double mu = 1.0;
  std::optional<double> U;
  std::optional<double> P;
  double h = 1.0;
};
void cmd_oracle_poiseuille(const Context& ctx, const PoiseuilleArgs& args);
void cmd_oracle_batchelor(const Context& ctx, double eps, const std::vector<double>& nu);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv);

}  // namespace hitlab::app
