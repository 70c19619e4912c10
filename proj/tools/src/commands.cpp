#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "hitlab/dissipation_law.hpp"
#include "hitlab/error.hpp"
#include "hitlab/flux.hpp"
#include "hitlab/io.hpp"
#include "hitlab/realspace.hpp"
#include "hitlab/reference.hpp"
#include "hitlab/version.hpp"

namespace hitlab::app {
namespace {

using ojson = nlohmann::ordered_json;

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

std::string timeseries_csv(const RunRecord& rec) {
  CsvTable t({"t", "E_tot", "eps", "Pi_max", "R_lambda", "C_eps"});
  for (const auto& s : rec.series)
    t.add_row({s.t, s.total_energy, s.dissipation, s.Pi_max, s.taylor_reynolds, s.C_eps});
  return t.str();
}

ojson run_summary(const RunRecord& rec) {
  const auto d = diagnostics(rec.final_state);
  return {{"t_final", rec.final_state.t},
          {"steps", rec.steps},
          {"stationary", rec.stationary},
          {"stationary_since", rec.stationary_since},
          {"clipped_energy", rec.clipped_energy},
          {"max_balance_residual", rec.max_balance_residual},
          {"total_energy", d.total_energy},
          {"dissipation", d.dissipation},
          {"R_L", d.reynolds_L},
          {"R_lambda", d.taylor_reynolds},
          {"k_d", d.kolmogorov_wavenumber}};
}

// Dissipation of the initial spectrum, used to size the grid of a decay run.
double initial_dissipation(const RunConfig& c) {
  auto wide = make_shared_grid(c.grid.k_min, std::max(40.0 * c.initial.peak_wavenumber,
                                                      4.0 * c.grid.k_min),
                               256);
  return dissipation_rate(initial_spectrum(wide, c.initial, c.nu));
}

// flux.csv, structure.csv, khe.csv and analysis.json for a final state.
void write_analysis(OutputSet& out, const RunConfig& c, const SpectralState& state,
                    const ForcingSpec& forcing) {
  const auto params = evolve_params(c);
  const auto& grid = state.mesh();
  const auto transfer = transfer_spectrum(state, params.closure);
  const double eps = dissipation_rate(state);
  const auto flux = flux_profile(transfer, grid, eps);

  CsvTable ft({"kappa", "Pi", "Pi_minus_plus", "T", "k_star_flag", "Pi_backward"});
  for (std::size_t i = 0; i < flux.kappa.size(); ++i) {
    const bool star = flux.has_crossing && i == flux.k_star_node;
    ft.add_row({flux.kappa[i], flux.Pi[i], flux.Pi_minus_plus[i], flux.T[i], star ? 1.0 : 0.0,
                flux.Pi_backward[i]});
  }
  out.write("flux.csv", ft.str());

  const auto r = make_r_grid(grid, c.analysis.r_per_decade);
  auto sf = structure_functions(state, transfer, r);
  dimensionless_structure(sf, diagnostics(state));
  CsvTable st({"r", "S2", "S3", "x", "f2", "f3", "resolved"});
  for (std::size_t i = 0; i < r.size(); ++i)
    st.add_row({sf.r[i], sf.S2[i], sf.S3[i], sf.x[i], sf.f2[i], sf.f3[i], double(sf.resolved[i])});
  out.write("structure.csv", st.str());

  const double dt = suggest_dt(state, params, forcing);
  const auto next = step(state, params, forcing, dt);
  const auto khe = khe_residual(state, next, params.closure, forcing, r);
  CsvTable kt({"r", "term_E", "term_dS2dt", "term_S3", "term_visc", "residual", "resolved"});
  for (std::size_t i = 0; i < khe.r.size(); ++i)
    kt.add_row({khe.r[i], khe.term_E[i], khe.term_dS2dt[i], khe.term_S3[i], khe.term_visc[i],
                khe.residual[i], double(khe.resolved[i])});
  out.write("khe.csv", kt.str());

  double s3_min = 0.0, s3_min_r = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!sf.resolved[i]) continue;
    const double v = sf.S3[i] / (eps * r[i]);
    if (v < s3_min) {
      s3_min = v;
      s3_min_r = r[i];
    }
  }
  ojson a;
  a["dissipation"] = eps;
  a["conservation_defect"] = transfer.conservation_defect;
  a["flux"] = {{"Pi_max", flux.Pi_max},
               {"Pi_max_over_eps", flux.Pi_max_over_eps},
               {"Pi_max_k", grid.node(flux.Pi_max_node)},
               {"k_star", flux.has_crossing ? ojson(flux.k_star) : ojson(nullptr)},
               {"multiple_crossings", flux.multiple_crossings},
               {"form_mismatch", flux.form_mismatch}};
  a["structure"] = {{"S3_over_eps_r_min", s3_min}, {"at_r", s3_min_r}};
  a["khe"] = {{"dt", dt},
              {"max_term", khe.max_term},
              {"relative_residual", khe.relative_residual},
              {"time_error", khe.time_error}};
  out.write("analysis.json", dump(a));
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "nu,eps_W,R_L,R_lambda,C_eps,Pi_ratio,index,stationary")
    throw Error(ErrorCode::config_invalid, name + ": not a sweep table");
  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      v.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str() || *end != '\0')
        throw Error(ErrorCode::config_invalid, name + ":" + std::to_string(lineno) + ": bad number");
    }
    if (v.size() != 8)
      throw Error(ErrorCode::config_invalid, name + ":" + std::to_string(lineno) + ": expected 8 cells");
    SweepRow r;
    r.nu = v[0];
    r.eps_W = v[1];
    r.R_L = v[2];
    r.R_lambda = v[3];
    r.C_eps = v[4];
    r.Pi_max_over_eps = v[5];
    r.index = static_cast<std::size_t>(v[6]);
    r.stationary = v[7] != 0.0;
    rows.push_back(r);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  CsvTable t({"nu", "eps_W", "R_L", "R_lambda", "C_eps", "Pi_ratio", "index", "stationary"});
  for (const auto& r : rows)
    t.add_row({r.nu, r.eps_W, r.R_L, r.R_lambda, r.C_eps, r.Pi_max_over_eps, double(r.index),
               r.stationary ? 1.0 : 0.0});
  return t.str();
}

std::string fmt(double v, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string spectrum_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "spectra/run_%02zu.csv", index);
  return buf;
}

}  // namespace

OutputSet::OutputSet(std::filesystem::path dir, std::string command, const RunConfig& config)
    : dir_(std::move(dir)), command_(std::move(command)), config_(config_to_json(config)) {}

void OutputSet::write(const std::string& name, const std::string& content) {
  atomic_write(dir_ / name, content);
  files_.push_back({{"name", name}, {"bytes", content.size()}, {"fnv1a64", hex64(fnv1a(content))}});
}

void OutputSet::finish() {
  ojson m;
  m["tool"] = "hitlab";
  m["version"] = std::string(version());
  m["command"] = command_;
  m["seed"] = config_["seed"];
  m["config"] = config_;
  m["resolved"] = resolved_;
  m["files"] = files_;
  atomic_write(dir_ / "manifest.json", dump(m));
}

void cmd_decay(const Context& ctx, bool analyze) {
  const auto& c = ctx.config;
  const double k_max = resolved_k_max(c, c.nu, initial_dissipation(c));
  auto grid = make_shared_grid(c.grid.k_min, k_max, c.grid.n_bins);
  auto params = evolve_params(c);
  params.keep_snapshots = true;
  const auto s0 = initial_spectrum(grid, c.initial, c.nu);
  ctx.log("decay: nu=" + fmt(c.nu) + " grid [" + fmt(c.grid.k_min) + ", " + fmt(k_max) + "] x" +
          std::to_string(c.grid.n_bins) + ", t_end=" + fmt(c.decay.t_end));
  const auto rec = run_decay(s0, params, c.decay.t_end);
  ctx.log("decay: done after " + std::to_string(rec.steps) + " steps");

  OutputSet out(c.output_dir, "decay", c);
  out.resolved()["k_max"] = k_max;
  out.resolved()["grid_hash"] = hex64(grid->hash());
  out.resolved()["run"] = run_summary(rec);
  out.write("timeseries.csv", timeseries_csv(rec));
  out.write("spectrum.csv", spectrum_csv(rec.final_state));
  if (analyze) {
    write_analysis(out, c, rec.final_state, ForcingSpec{});
    ojson d;
    try {
      const auto dc = decay_dissipation_coefficient(rec, std::nullopt, c.decay.x);
      d = {{"t_e", dc.t_e},     {"C_eps", dc.C_eps}, {"R_L", dc.R_L},
           {"x", dc.x},         {"B2", dc.B2},       {"decay_exponent", dc.decay_exponent}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::transient_not_passed) throw;
      d = {{"status", "transient_not_passed"}, {"detail", e.what()}};
    }
    out.write("decay.json", dump(d));
  }
  out.finish();
}

void cmd_forced(const Context& ctx, bool analyze) {
  const auto& c = ctx.config;
  if (c.forcing.mode != ForcingMode::band)
    throw Error(ErrorCode::config_invalid, "config.forcing.mode: forced runs need band forcing");
  const double k_max = resolved_k_max(c, c.nu, c.forcing.injection_rate);
  auto grid = make_shared_grid(c.grid.k_min, k_max, c.grid.n_bins);
  const auto params = evolve_params(c);
  const auto s0 = initial_spectrum(grid, c.initial, c.nu);
  ctx.log("forced: nu=" + fmt(c.nu) + " grid [" + fmt(c.grid.k_min) + ", " + fmt(k_max) + "] x" +
          std::to_string(c.grid.n_bins));
  const auto rec = run_forced(s0, params, c.forcing, c.forced.max_time);
  ctx.log("forced: stationary at t=" + fmt(rec.stationary_since) + " after " +
          std::to_string(rec.steps) + " steps, R_lambda=" +
          fmt(diagnostics(rec.final_state).taylor_reynolds));

  OutputSet out(c.output_dir, "forced", c);
  out.resolved()["k_max"] = k_max;
  out.resolved()["grid_hash"] = hex64(grid->hash());
  out.resolved()["run"] = run_summary(rec);
  out.write("timeseries.csv", timeseries_csv(rec));
  out.write("spectrum.csv", spectrum_csv(rec.final_state));
  if (analyze) write_analysis(out, c, rec.final_state, c.forcing);
  out.finish();
}

void cmd_sweep(const Context& ctx) {
  const auto& c = ctx.config;
  if (c.sweep.nu.empty()) throw Error(ErrorCode::config_invalid, "config.sweep.nu: empty list");
  if (c.grid.k_max != 0.0)
    throw Error(ErrorCode::config_invalid,
                "config.grid.k_max: sweep grids are sized by k_max_factor; leave k_max at 0");
  const SweepConfig sc = sweep_config(c);
  const auto rec = run_sweep(sc, c.sweep.nu, ctx.log);

  OutputSet out(c.output_dir, "sweep", c);
  ojson grids = ojson::array();
  for (std::size_t i = 0; i < rec.rows.size(); ++i) {
    const auto& g = rec.spectra[i].mesh();
    grids.push_back({{"index", rec.rows[i].index},
                     {"k_max", g.k_max()},
                     {"grid_hash", hex64(g.hash())},
                     {"spectrum", spectrum_name(rec.rows[i].index)}});
  }
  out.resolved()["runs"] = grids;
  out.resolved()["warnings"] = rec.warnings;
  out.write("sweep.csv", sweep_csv(rec.rows));
  for (std::size_t i = 0; i < rec.rows.size(); ++i)
    out.write(spectrum_name(rec.rows[i].index), spectrum_csv(rec.spectra[i]));
  out.finish();
}

void cmd_fit(const Context& ctx) {
  const auto& c = ctx.config;
  const std::filesystem::path input =
      c.fit.input.empty() ? std::filesystem::path(c.output_dir) / "sweep.csv"
                          : std::filesystem::path(c.fit.input);
  const auto rows = parse_sweep_csv(read_file(input), input.string());
  const auto fit = fit_asymptote(rows, c.fit.quadratic);
  const auto curve = fit_curve(fit, rows);

  ojson j;
  j["model"] = fit.quadratic ? "C_eps = C_eps_inf + C / R_L + C2 / R_L^2"
                             : "C_eps = C_eps_inf + C / R_L";
  j["C_eps_inf"] = fit.C_eps_inf;
  j["C_eps_inf_stderr"] = fit.C_eps_inf_stderr;
  j["C"] = fit.C;
  j["C_stderr"] = fit.C_stderr;
  if (fit.quadratic) {
    j["C2"] = fit.C2;
    j["C2_stderr"] = fit.C2_stderr;
  }
  j["covariance"] = fit.covariance;
  j["r_squared"] = fit.r_squared;
  j["residuals"] = fit.residuals;
  j["n_points"] = fit.n_points;
  j["reference"] = {{"C_eps_inf", kReferenceCepsInf},
                    {"C_eps_inf_err", kReferenceCepsInfErr},
                    {"C", kReferenceC},
                    {"C_err", kReferenceCErr},
                    {"note",
                     "reference constants come from direct numerical simulation; the closure "
                     "model is a different dynamical system, so only the functional form and "
                     "the existence of the asymptote are expected to agree"}};

  CsvTable t({"inv_R_L", "C_eps_fit"});
  for (const auto& p : curve) t.add_row({p.inv_R_L, p.C_eps});
  CsvTable pts({"inv_R_L", "C_eps", "residual"});
  for (std::size_t i = 0; i < rows.size(); ++i)
    pts.add_row({1.0 / rows[i].R_L, rows[i].C_eps, fit.residuals[i]});

  OutputSet out(c.output_dir, "fit", c);
  out.resolved()["input"] = input.string();
  out.resolved()["input_fnv1a64"] = hex64(fnv1a(read_file(input)));
  out.write("fit.json", dump(j));
  out.write("fit_curve.csv", t.str());
  out.write("fit_points.csv", pts.str());
  out.finish();

  std::string law = "fit:       C_eps = " + fmt(fit.C_eps_inf, 4) + " (+- " +
                    fmt(fit.C_eps_inf_stderr, 2) + ") + " + fmt(fit.C, 4) + " (+- " +
                    fmt(fit.C_stderr, 2) + ") / R_L";
  if (fit.quadratic) law += " + " + fmt(fit.C2, 4) + " / R_L^2";
  ctx.print(law + "   r^2 = " + fmt(fit.r_squared, 6) + ", " + std::to_string(fit.n_points) +
            " points");
  ctx.print("reference: C_eps = " + fmt(kReferenceCepsInf) + " (+- " + fmt(kReferenceCepsInfErr) +
            ") + " + fmt(kReferenceC) + " (+- " + fmt(kReferenceCErr) + ") / R_L   (DNS)");
  ctx.print("note: the closure model is not expected to reproduce the DNS constants");
}

void cmd_collapse(const Context& ctx) {
  const auto& c = ctx.config;
  const auto& b = c.collapse;
  if (b.inputs.size() < 2)
    throw Error(ErrorCode::config_invalid, "config.collapse.inputs: need at least two spectra");
  std::vector<SpectralState> states;
  for (const auto& p : b.inputs) states.push_back(read_spectrum_csv(p));

  CollapseOptions opt;
  opt.mode = b.mode;
  opt.mu = b.mu;
  opt.k_hat_min = b.k_hat_min;
  opt.shared_points = b.shared_points;
  double box = b.box_scale;
  if (b.mode == CollapseMode::k62) {
    if (!b.external_scales.empty()) {
      if (b.external_scales.size() != states.size())
        throw Error(ErrorCode::config_invalid,
                    "config.collapse.external_scales: need one scale per input");
      opt.external_scales = b.external_scales;
    } else {
      if (box == 0.0) box = 2.0 * std::numbers::pi / states.front().mesh().k_min();
      opt.external_scales = external_scales_by_reynolds(states, box, b.spread);
    }
  }
  const auto rep = collapse_error(states, opt);

  ojson j;
  j["mode"] = to_string(rep.mode);
  j["mu"] = rep.mode == CollapseMode::k62 ? rep.mu : 0.0;
  j["window"] = {rep.window_lo, rep.window_hi};
  j["is_void"] = rep.is_void;
  j["collapse_error"] = rep.collapse_error;
  ojson pairs = ojson::array();
  for (const auto& p : rep.pairwise) pairs.push_back({{"a", p.a}, {"b", p.b}, {"distance", p.distance}});
  j["pairwise"] = pairs;
  j["external_scales"] = opt.external_scales;

  CsvTable t({"run_id", "k_hat", "E_hat"});
  for (std::size_t m = 0; m < rep.tables.size(); ++m)
    for (std::size_t i = 0; i < rep.tables[m].k_hat.size(); ++i)
      t.add_row({double(m), rep.tables[m].k_hat[i], rep.tables[m].E_hat[i]});

  OutputSet out(c.output_dir, "collapse", c);
  ojson inputs = ojson::array();
  for (const auto& p : b.inputs) inputs.push_back({{"path", p}, {"fnv1a64", hex64(fnv1a(read_file(p)))}});
  out.resolved()["inputs"] = inputs;
  out.resolved()["box_scale"] = box;
  out.write("collapse.json", dump(j));
  out.write("collapse.csv", t.str());
  out.finish();
  ctx.print("collapse (" + to_string(rep.mode) + "): error = " + fmt(rep.collapse_error) +
            " over k_hat in [" + fmt(rep.window_lo, 4) + ", " + fmt(rep.window_hi, 4) + "]" +
            (rep.is_void ? " (window narrower than half a decade)" : ""));
}

void cmd_temporal(const Context& ctx) {
  const auto& c = ctx.config;
  EnsembleConfig e = c.temporal.ensemble;
  e.seed = c.seed;
  e.workers = c.workers;
  const auto resolved = resolve(e);
  ctx.log("temporal: " + to_string(e.model) + ", " + std::to_string(e.n_realizations) +
          " realizations at fs=" + fmt(resolved.sample_rate) + " for T=" + fmt(resolved.duration));
  const auto res = run_ensemble(e);
  const auto [lo, hi] = central_decade(e);
  const auto fit = slope_fit(res.spectrum, lo, hi);

  ojson j;
  j["mode"] = to_string(e.model);
  j["slope"] = fit.slope;
  j["stderr"] = fit.stderr_;
  j["window"] = {fit.window_lo, fit.window_hi};
  j["n_bins"] = fit.n_bins;
  j["target_variance"] = res.target_variance;
  j["sample_variance"] = res.sample_variance;
  j["spectrum_integral"] = res.spectrum.integral;
  j["integral_over_U2"] = res.spectrum.integral / res.target_variance;
  j["segment_length"] = res.spectrum.segment_length;
  j["n_realizations"] = res.spectrum.n_realizations;
  j["seed"] = e.seed;

  CsvTable t({"omega", "phi"});
  for (std::size_t i = 0; i < res.spectrum.omega.size(); ++i)
    t.add_row({res.spectrum.omega[i], res.spectrum.phi[i]});

  OutputSet out(c.output_dir, "temporal", c);
  out.resolved()["sample_rate"] = resolved.sample_rate;
  out.resolved()["duration"] = resolved.duration;
  out.resolved()["sweep_velocity"] =
      e.sweep_velocity > 0.0 ? e.sweep_velocity : std::sqrt(res.target_variance);
  out.write("temporal.json", dump(j));
  out.write("temporal_spectrum.csv", t.str());
  out.finish();
  ctx.print("temporal (" + to_string(e.model) + "): slope = " + fmt(fit.slope, 4) + " +- " +
            fmt(fit.stderr_, 2) + ", int phi / U^2 = " +
            fmt(res.spectrum.integral / res.target_variance, 4));
}

void cmd_rg(const Context& ctx) {
  const auto& c = ctx.config;
  const auto& g = c.rg.rg;
  const auto rep = iterate_to_fixed_point(g);

  CsvTable trace({"n", "k_n", "nu_n", "nu_tilde", "alpha", "delta_nu"});
  for (const auto& s : rep.state.history)
    trace.add_row({double(s.n), s.k_n, s.nu_n, s.nu_tilde, s.alpha, s.delta_nu});

  // Cutoff check on the model spectrum carrying the implied alpha.
  const double nu = g.nu0;
  const double k_d = std::pow(g.eps / (nu * nu * nu), 0.25);
  auto grid = make_shared_grid(1e-3 * k_d, 10.0 * k_d, 256);
  const auto model = model_dissipation_spectrum(grid, rep.alpha, g.eps, nu);
  const double k0 = effective_cutoff(model, c.rg.cutoff_capture);

  ojson j;
  j["h"] = g.h;
  j["nu_tilde_star"] = rep.nu_tilde_star;
  j["alpha"] = rep.alpha;
  j["alpha_in_band_1_to_2.5"] = rep.alpha >= 1.0 && rep.alpha <= 2.5;
  j["iterations"] = rep.iterations;
  j["tail_slope"] = rep.tail_slope;
  j["cutoff"] = {{"capture", c.rg.cutoff_capture}, {"k0_over_k_d", k0 / k_d}};

  OutputSet out(c.output_dir, "rg", c);
  out.write("rg_trace.csv", trace.str());
  if (!c.rg.h_values.empty()) {
    const auto rows = rg_sweep(g, c.rg.h_values, c.workers);
    CsvTable t({"h", "eta", "nu_tilde_star", "alpha", "iterations"});
    for (const auto& r : rows) t.add_row({r.h, r.eta, r.nu_tilde_star, r.alpha, double(r.iterations)});
    out.write("rg_sweep.csv", t.str());
  }
  out.write("rg.json", dump(j));
  out.finish();
  ctx.print("rg: nu_tilde* = " + fmt(rep.nu_tilde_star, 8) + ", alpha = " + fmt(rep.alpha, 5) +
            ", slope = " + fmt(rep.tail_slope, 6) + ", k0/k_d = " + fmt(k0 / k_d, 4) + " after " +
            std::to_string(rep.iterations) + " iterations");
}

void cmd_oracle_poiseuille(const Context& ctx, const PoiseuilleArgs& a) {
  if (a.U && a.P)
    throw Error(ErrorCode::config_invalid, "oracle poiseuille: give either --U or --P, not both");
  const auto c = a.P ? ChannelFlowCase::from_pressure_gradient(*a.P, a.mu, a.h)
                     : ChannelFlowCase::from_bulk_velocity(a.U.value_or(1.0), a.mu, a.h);
  c.validate();
  const double eps = poiseuille_dissipation(c);
  const double Q = volumetric_flow(c);
  const auto work = pressure_work(c, Q);
  auto line = [&](const std::string& k, double v) { ctx.print(k + " = " + format_double(v)); };
  line("mu", c.dynamic_viscosity);
  line("h", c.half_height);
  line("U", c.bulk_velocity);
  line("P", c.pressure_gradient);
  line("u(-h)", poiseuille_profile(c, -c.half_height));
  line("u(0)", poiseuille_profile(c, 0.0));
  line("u(h)", poiseuille_profile(c, c.half_height));
  line("eps", eps);
  line("eps_quadrature", poiseuille_dissipation_quadrature(c));
  line("Q", Q);
  line("QP", work.work);
  line("QP/eps", work.ratio);
}

void cmd_oracle_batchelor(const Context& ctx, double eps, const std::vector<double>& nu) {
  const auto rows = batchelor_limit_table(eps, nu);
  ctx.print("nu,k_d");
  for (const auto& r : rows) ctx.print(format_double(r.nu) + "," + format_double(r.k_d));
  ctx.print("slope d ln k_d / d ln nu = " + format_double(batchelor_slope(rows)));
}

}  // namespace hitlab::app
