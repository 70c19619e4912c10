#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hitlab/error.hpp"
#include "hitlab/version.hpp"

namespace hitlab::app {

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Spectral closure experiments for forced and decaying isotropic turbulence",
               "hitlab"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON config file (comments allowed)")
      ->envname("HITLAB_CONFIG");
  app.add_option("--out", out_dir, "Output directory")->envname("HITLAB_OUT");
  app.add_option("--seed", seed, "Random seed")->envname("HITLAB_SEED");
  app.add_option("--workers", workers, "Worker threads")
      ->envname("HITLAB_WORKERS")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Suppress progress messages")->envname("HITLAB_QUIET");

  bool analyze = false;
  auto* decay = app.add_subcommand("decay", "Free decay from the initial spectrum");
  decay->add_flag("--analyze", analyze, "Also write flux, structure-function and KHE tables");
  auto* forced = app.add_subcommand("forced", "Forced run to statistical stationarity");
  forced->add_flag("--analyze", analyze, "Also write flux, structure-function and KHE tables");

  auto* sweep = app.add_subcommand("sweep", "Forced runs over the viscosity list");

  std::optional<std::string> fit_input;
  bool quadratic = false;
  auto* fit = app.add_subcommand("fit", "Fit C_eps = C_eps_inf + C / R_L to a sweep table");
  fit->add_option("--input", fit_input, "Sweep table (default <out>/sweep.csv)");
  fit->add_flag("--quadratic", quadratic, "Add a 1/R_L^2 term");

  std::vector<std::string> inputs;
  std::optional<std::string> mode;
  std::optional<double> mu;
  auto* collapse = app.add_subcommand("collapse", "Collapse error of rescaled spectra");
  collapse->add_option("inputs", inputs, "Spectrum CSV files");
  collapse->add_option("--mode", mode, "k41 or k62")->check(CLI::IsMember({"k41", "k62"}));
  collapse->add_option("--mu", mu, "Intermittency exponent for k62");

  std::optional<std::string> model;
  auto* temporal = app.add_subcommand("temporal", "Kinematic Monte Carlo frequency spectrum");
  temporal->add_option("--model", model, "kolmogorov or sweeping")
      ->check(CLI::IsMember({"kolmogorov", "sweeping"}));

  std::optional<double> h;
  auto* rg = app.add_subcommand("rg", "Recursive band elimination to the fixed point");
  rg->set_help_flag("--help", "Print this help message and exit");
  rg->add_option("--h", h, "Band ratio h in (0, 1)");

  auto* oracle = app.add_subcommand("oracle", "Closed-form reference values");
  oracle->require_subcommand(1);
  PoiseuilleArgs pa;
  std::optional<double> U, P;
  auto* pois = oracle->add_subcommand("poiseuille", "Plane Poiseuille flow identities");
  pois->set_help_flag("--help", "Print this help message and exit");
  pois->add_option("--mu", pa.mu, "Dynamic viscosity")->check(CLI::PositiveNumber);
  pois->add_option("--U", U, "Bulk velocity");
  pois->add_option("--P", P, "Pressure gradient magnitude");
  pois->add_option("--h", pa.h, "Channel half-height")->check(CLI::PositiveNumber);
  double b_eps = 1.0;
  std::vector<double> b_nu{1e-2, 1e-3, 1e-4};
  auto* batch = oracle->add_subcommand("batchelor", "Kolmogorov wavenumber against viscosity");
  batch->add_option("--eps", b_eps, "Dissipation rate")->check(CLI::PositiveNumber);
  batch->add_option("--nu", b_nu, "Viscosities, descending");

  for (auto* sub : {decay, forced, sweep, fit, collapse, temporal, rg, oracle, pois, batch})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_code_for(ErrorCode::config_invalid);
  }

  try {
    Context ctx;
    ctx.config = config_path.empty() ? RunConfig{} : load_config(config_path);
    auto& c = ctx.config;
    if (out_dir) c.output_dir = *out_dir;
    if (seed) c.seed = *seed;
    if (workers) c.workers = *workers;
    ctx.log = [quiet](const std::string& m) {
      if (!quiet) std::cerr << m << '\n';
    };
    ctx.print = [](const std::string& m) { std::cout << m << '\n'; };

    if (*decay) {
      cmd_decay(ctx, analyze);
    } else if (*forced) {
      cmd_forced(ctx, analyze);
    } else if (*sweep) {
      cmd_sweep(ctx);
    } else if (*fit) {
      if (fit_input) c.fit.input = *fit_input;
      if (quadratic) c.fit.quadratic = true;
      cmd_fit(ctx);
    } else if (*collapse) {
      if (!inputs.empty()) c.collapse.inputs = inputs;
      if (mode) c.collapse.mode = *mode == "k62" ? CollapseMode::k62 : CollapseMode::k41;
      if (mu) c.collapse.mu = *mu;
      cmd_collapse(ctx);
    } else if (*temporal) {
      if (model)
        c.temporal.ensemble.model =
            *model == "sweeping" ? DecorrelationModel::sweeping : DecorrelationModel::kolmogorov;
      cmd_temporal(ctx);
    } else if (*rg) {
      if (h) {
        c.rg.rg.h = *h;
        c.rg.rg.validate();
      }
      cmd_rg(ctx);
    } else if (*pois) {
      pa.U = U;
      pa.P = P;
      cmd_oracle_poiseuille(ctx, pa);
    } else if (*batch) {
      cmd_oracle_batchelor(ctx, b_eps, b_nu);
    }
  } catch (const Error& e) {
    std::cerr << "hitlab: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "hitlab: io_failure: " << e.what() << '\n';
    return exit_code_for(ErrorCode::io_failure);
  } catch (const std::exception& e) {
    std::cerr << "hitlab: " << e.what() << '\n';
    return exit_code_for(ErrorCode::instability);
  }
  return 0;
}

}  // namespace hitlab::app
