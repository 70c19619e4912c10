#include "config.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string_view>

#include "hitlab/error.hpp"
#include "hitlab/io.hpp"

namespace hitlab::app {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::config_invalid, path + ": " + msg);
}

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported by name.
class Reader {
 public:
  Reader(const json* node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_->is_object()) fail(path_, "expected an object");
  }

  Reader child(const std::string& key) {
    const json* sub = find(key);
    return Reader(sub, path_ + "." + key);
  }

  void get(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(at(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(at(key), "not finite");
    }
  }

  void get(const std::string& key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
        fail(at(key), "expected a non-negative integer");
      out = v->get<std::size_t>();
    }
  }

  void get(const std::string& key, std::uint64_t& out, bool) {
    std::size_t tmp = out;
    get(key, tmp);
    out = tmp;
  }

  void get(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(at(key), "expected an integer");
      const long long x = v->get<long long>();
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        fail(at(key), "integer out of range");
      out = static_cast<int>(x);
    }
  }

  void get(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(at(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void get(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void get(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(at(key), "expected an array of numbers");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back((*v)[i].get<double>());
      }
    }
  }

  void get(const std::string& key, std::vector<std::string>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(at(key), "expected an array of strings");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_string()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back((*v)[i].get<std::string>());
      }
    }
  }

  // Enumerated string value.
  template <class E>
  void get_enum(const std::string& key, E& out,
                std::initializer_list<std::pair<std::string_view, E>> choices) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(at(key), "expected a string");
      const auto s = v->get<std::string>();
      std::string names;
      for (const auto& [name, value] : choices) {
        if (s == name) {
          out = value;
          return;
        }
        names += names.empty() ? "" : ", ";
        names += name;
      }
      fail(at(key), "unknown value '" + s + "' (expected one of " + names + ")");
    }
  }

  // Throws on the first key nobody asked for.
  void finish() const {
    if (!node_) return;
    for (const auto& [key, value] : node_->items())
      if (!seen_.count(key)) fail(at(key), "unknown key");
  }

 private:
  const json* find(const std::string& key) {
    seen_.insert(key);
    if (!node_) return nullptr;
    auto it = node_->find(key);
    if (it == node_->end() || it->is_null()) return nullptr;
    return &*it;
  }
  std::string at(const std::string& key) const { return path_ + "." + key; }

  const json* node_;
  std::string path_;
  std::set<std::string> seen_;
};

void check_positive(double v, const std::string& path) {
  if (!(v > 0.0)) fail(path, "must be positive");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::config_invalid, std::string("config: ") + e.what());
  }
  RunConfig c;
  Reader r(&root, "config");
  r.get("schema_version", c.schema_version);
  if (c.schema_version != kSchemaVersion)
    fail("config.schema_version",
         "unsupported version " + std::to_string(c.schema_version) + " (expected " +
             std::to_string(kSchemaVersion) + ")");
  r.get("seed", c.seed, true);
  r.get("workers", c.workers);
  r.get("output_dir", c.output_dir);
  r.get("nu", c.nu);
  check_positive(c.nu, "config.nu");

  {
    auto g = r.child("grid");
    g.get("k_min", c.grid.k_min);
    g.get("n_bins", c.grid.n_bins);
    g.get("k_max", c.grid.k_max);
    g.get("k_max_factor", c.grid.k_max_factor);
    g.finish();
    check_positive(c.grid.k_min, "config.grid.k_min");
    if (c.grid.n_bins < 2) fail("config.grid.n_bins", "needs at least 2 bins");
    if (c.grid.k_max != 0.0 && c.grid.k_max <= c.grid.k_min)
      fail("config.grid.k_max", "must exceed k_min (or be 0 for automatic)");
    check_positive(c.grid.k_max_factor, "config.grid.k_max_factor");
  }
  {
    auto s = r.child("initial");
    s.get("peak_wavenumber", c.initial.peak_wavenumber);
    s.get("total_energy", c.initial.total_energy);
    s.get("low_k_exponent", c.initial.low_k_exponent);
    s.finish();
    check_positive(c.initial.peak_wavenumber, "config.initial.peak_wavenumber");
    check_positive(c.initial.total_energy, "config.initial.total_energy");
    if (c.initial.low_k_exponent != 2 && c.initial.low_k_exponent != 4)
      fail("config.initial.low_k_exponent", "must be 2 or 4");
  }
  {
    auto s = r.child("closure");
    s.get("damping_constant", c.closure.damping_constant);
    s.get_enum("markov_time_mode", c.closure.markov_time_mode,
               {{"asymptotic", MarkovTimeMode::asymptotic},
                {"finite_time", MarkovTimeMode::finite_time}});
    s.get("enabled", c.closure.enabled);
    s.finish();
    check_positive(c.closure.damping_constant, "config.closure.damping_constant");
  }
  {
    auto s = r.child("forcing");
    s.get_enum("mode", c.forcing.mode, {{"none", ForcingMode::none}, {"band", ForcingMode::band}});
    s.get("band_top", c.forcing.band_top);
    s.get("injection_rate", c.forcing.injection_rate);
    s.finish();
    if (c.forcing.mode == ForcingMode::band) {
      check_positive(c.forcing.band_top, "config.forcing.band_top");
      check_positive(c.forcing.injection_rate, "config.forcing.injection_rate");
    }
  }
  {
    auto s = r.child("integrator");
    auto& p = c.integrator;
    s.get("dt_safety", p.dt_safety);
    s.get("dt_max", p.dt_max);
    s.get("sample_interval", p.sample_interval);
    s.get("balance_tolerance", p.balance_tolerance);
    s.get("stationarity_tolerance", p.stationarity_tolerance);
    s.get("stationarity_turnovers", p.stationarity_turnovers);
    s.get("drift_tolerance", p.drift_tolerance);
    s.get("max_steps", p.max_steps);
    s.finish();
    check_positive(p.dt_safety, "config.integrator.dt_safety");
    if (p.dt_safety > 1.0) fail("config.integrator.dt_safety", "must not exceed 1");
    if (p.dt_max < 0) fail("config.integrator.dt_max", "must be >= 0");
    if (p.sample_interval < 0) fail("config.integrator.sample_interval", "must be >= 0");
    check_positive(p.balance_tolerance, "config.integrator.balance_tolerance");
    check_positive(p.stationarity_tolerance, "config.integrator.stationarity_tolerance");
    check_positive(p.stationarity_turnovers, "config.integrator.stationarity_turnovers");
    check_positive(p.drift_tolerance, "config.integrator.drift_tolerance");
  }
  {
    auto s = r.child("decay");
    s.get("t_end", c.decay.t_end);
    s.get("x", c.decay.x);
    s.finish();
    check_positive(c.decay.t_end, "config.decay.t_end");
    check_positive(c.decay.x, "config.decay.x");
  }
  {
    auto s = r.child("forced");
    s.get("max_time", c.forced.max_time);
    s.finish();
    check_positive(c.forced.max_time, "config.forced.max_time");
  }
  {
    auto s = r.child("analysis");
    s.get("r_per_decade", c.analysis.r_per_decade);
    s.finish();
    if (c.analysis.r_per_decade < 4) fail("config.analysis.r_per_decade", "must be >= 4");
  }
  {
    auto s = r.child("sweep");
    s.get("nu", c.sweep.nu);
    s.finish();
    for (std::size_t i = 0; i < c.sweep.nu.size(); ++i) {
      const std::string path = "config.sweep.nu[" + std::to_string(i) + "]";
      check_positive(c.sweep.nu[i], path);
      if (i > 0 && !(c.sweep.nu[i] < c.sweep.nu[i - 1])) fail(path, "list must be strictly decreasing");
    }
  }
  {
    auto s = r.child("fit");
    s.get("input", c.fit.input);
    s.get("quadratic", c.fit.quadratic);
    s.finish();
  }
  {
    auto s = r.child("collapse");
    auto& b = c.collapse;
    s.get("inputs", b.inputs);
    s.get_enum("mode", b.mode, {{"k41", CollapseMode::k41}, {"k62", CollapseMode::k62}});
    s.get("mu", b.mu);
    s.get("external_scales", b.external_scales);
    s.get("box_scale", b.box_scale);
    s.get("spread", b.spread);
    s.get("k_hat_min", b.k_hat_min);
    s.get("shared_points", b.shared_points);
    s.finish();
    if (b.box_scale < 0) fail("config.collapse.box_scale", "must be >= 0");
    check_positive(b.spread, "config.collapse.spread");
    check_positive(b.k_hat_min, "config.collapse.k_hat_min");
    if (b.shared_points < 2) fail("config.collapse.shared_points", "needs at least 2 points");
  }
  {
    auto s = r.child("temporal");
    auto& e = c.temporal.ensemble;
    s.get_enum("model", e.model,
               {{"kolmogorov", DecorrelationModel::kolmogorov},
                {"sweeping", DecorrelationModel::sweeping}});
    s.get("k_lo", e.k_lo);
    s.get("k_hi", e.k_hi);
    s.get("n_modes", e.n_modes);
    s.get("alpha", e.alpha);
    s.get("eps", e.eps);
    s.get("time_constant", e.time_constant);
    s.get("rate_noise", e.rate_noise);
    s.get("sweep_velocity", e.sweep_velocity);
    s.get("random_sweep", e.random_sweep);
    s.get("n_realizations", e.n_realizations);
    s.get("sample_rate", e.sample_rate);
    s.get("duration", e.duration);
    s.get_enum("window", c.temporal.window,
               {{"hann", WindowKind::hann}, {"rectangular", WindowKind::rectangular}});
    s.finish();
    check_positive(e.k_lo, "config.temporal.k_lo");
    if (!(e.k_hi > e.k_lo)) fail("config.temporal.k_hi", "must exceed k_lo");
    if (e.n_modes < 2) fail("config.temporal.n_modes", "needs at least 2 modes");
    check_positive(e.alpha, "config.temporal.alpha");
    check_positive(e.eps, "config.temporal.eps");
    check_positive(e.time_constant, "config.temporal.time_constant");
    if (e.rate_noise < 0) fail("config.temporal.rate_noise", "must be >= 0");
    if (e.sweep_velocity < 0) fail("config.temporal.sweep_velocity", "must be >= 0");
    if (e.n_realizations < 1) fail("config.temporal.n_realizations", "must be >= 1");
    if (e.sample_rate < 0) fail("config.temporal.sample_rate", "must be >= 0");
    if (e.duration < 0) fail("config.temporal.duration", "must be >= 0");
  }
  {
    auto s = r.child("rg");
    auto& g = c.rg.rg;
    s.get("h", g.h);
    s.get("nu0", g.nu0);
    s.get("k0", g.k0);
    s.get("eps", g.eps);
    s.get("amplitude", g.amplitude);
    s.get("weight_exponent", g.weight_exponent);
    s.get("tolerance", g.tolerance);
    s.get("max_iterations", g.max_iterations);
    s.get("settle_iterations", g.settle_iterations);
    s.get("h_values", c.rg.h_values);
    s.get("cutoff_capture", c.rg.cutoff_capture);
    s.finish();
    try {
      g.validate();
    } catch (const Error& e) {
      fail("config.rg", e.what());
    }
    for (std::size_t i = 0; i < c.rg.h_values.size(); ++i)
      if (!(c.rg.h_values[i] > 0.0 && c.rg.h_values[i] < 1.0))
        fail("config.rg.h_values[" + std::to_string(i) + "]", "must lie in (0, 1)");
    if (!(c.rg.cutoff_capture > 0.0 && c.rg.cutoff_capture <= 1.0))
      fail("config.rg.cutoff_capture", "must lie in (0, 1]");
  }
  r.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    // A config that cannot be read is a configuration problem for the caller.
    throw Error(ErrorCode::config_invalid, "cannot read config " + path.string());
  }
  return parse_config(text);
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  ojson j;
  j["schema_version"] = c.schema_version;
  j["seed"] = c.seed;
  j["nu"] = c.nu;
  j["grid"] = {{"k_min", c.grid.k_min},
               {"n_bins", c.grid.n_bins},
               {"k_max", c.grid.k_max},
               {"k_max_factor", c.grid.k_max_factor}};
  j["initial"] = {{"peak_wavenumber", c.initial.peak_wavenumber},
                  {"total_energy", c.initial.total_energy},
                  {"low_k_exponent", c.initial.low_k_exponent}};
  j["closure"] = {{"damping_constant", c.closure.damping_constant},
                  {"markov_time_mode", c.closure.markov_time_mode == MarkovTimeMode::asymptotic
                                           ? "asymptotic"
                                           : "finite_time"},
                  {"enabled", c.closure.enabled}};
  j["forcing"] = {{"mode", c.forcing.mode == ForcingMode::band ? "band" : "none"},
                  {"band_top", c.forcing.band_top},
                  {"injection_rate", c.forcing.injection_rate}};
  const auto& p = c.integrator;
  j["integrator"] = {{"dt_safety", p.dt_safety},
                     {"dt_max", p.dt_max},
                     {"sample_interval", p.sample_interval},
                     {"balance_tolerance", p.balance_tolerance},
                     {"stationarity_tolerance", p.stationarity_tolerance},
                     {"stationarity_turnovers", p.stationarity_turnovers},
                     {"drift_tolerance", p.drift_tolerance},
                     {"max_steps", p.max_steps}};
  j["decay"] = {{"t_end", c.decay.t_end}, {"x", c.decay.x}};
  j["forced"] = {{"max_time", c.forced.max_time}};
  j["analysis"] = {{"r_per_decade", c.analysis.r_per_decade}};
  j["sweep"] = {{"nu", c.sweep.nu}};
  j["fit"] = {{"input", c.fit.input}, {"quadratic", c.fit.quadratic}};
  const auto& b = c.collapse;
  j["collapse"] = {{"inputs", b.inputs},
                   {"mode", to_string(b.mode)},
                   {"mu", b.mu},
                   {"external_scales", b.external_scales},
                   {"box_scale", b.box_scale},
                   {"spread", b.spread},
                   {"k_hat_min", b.k_hat_min},
                   {"shared_points", b.shared_points}};
  const auto& e = c.temporal.ensemble;
  j["temporal"] = {{"model", to_string(e.model)},
                   {"k_lo", e.k_lo},
                   {"k_hi", e.k_hi},
                   {"n_modes", e.n_modes},
                   {"alpha", e.alpha},
                   {"eps", e.eps},
                   {"time_constant", e.time_constant},
                   {"rate_noise", e.rate_noise},
                   {"sweep_velocity", e.sweep_velocity},
                   {"random_sweep", e.random_sweep},
                   {"n_realizations", e.n_realizations},
                   {"sample_rate", e.sample_rate},
                   {"duration", e.duration},
                   {"window", c.temporal.window == WindowKind::hann ? "hann" : "rectangular"}};
  const auto& g = c.rg.rg;
  j["rg"] = {{"h", g.h},
             {"nu0", g.nu0},
             {"k0", g.k0},
             {"eps", g.eps},
             {"amplitude", g.amplitude},
             {"weight_exponent", g.weight_exponent},
             {"tolerance", g.tolerance},
             {"max_iterations", g.max_iterations},
             {"settle_iterations", g.settle_iterations},
             {"h_values", c.rg.h_values},
             {"cutoff_capture", c.rg.cutoff_capture}};
  return j;
}

EvolveParams evolve_params(const RunConfig& c) {
  EvolveParams p;
  p.closure = c.closure;
  p.closure.workers = c.workers;
  p.dt_safety = c.integrator.dt_safety;
  p.dt_max = c.integrator.dt_max;
  p.sample_interval = c.integrator.sample_interval;
  p.balance_tolerance = c.integrator.balance_tolerance;
  p.stationarity_tolerance = c.integrator.stationarity_tolerance;
  p.stationarity_turnovers = c.integrator.stationarity_turnovers;
  p.drift_tolerance = c.integrator.drift_tolerance;
  p.max_steps = c.integrator.max_steps;
  return p;
}

SweepConfig sweep_config(const RunConfig& c) {
  SweepConfig sc;
  sc.k_min = c.grid.k_min;
  sc.n_bins = c.grid.n_bins;
  sc.k_max_factor = c.grid.k_max_factor;
  sc.initial = c.initial;
  sc.forcing = c.forcing;
  sc.evolve = evolve_params(c);
  sc.max_time = c.forced.max_time;
  sc.workers = c.workers;
  return sc;
}

double resolved_k_max(const RunConfig& c, double nu, double eps) {
  if (c.grid.k_max > 0.0) return c.grid.k_max;
  const double k_d = std::pow(eps / (nu * nu * nu), 0.25);
  return std::max(c.grid.k_max_factor * k_d, 16.0 * c.grid.k_min);
}

}  // namespace hitlab::app
