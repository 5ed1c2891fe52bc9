#include "zeno/experiments.hpp"

#include "zeno/blockade.hpp"
#include "zeno/continuum.hpp"
#include "zeno/hypercube.hpp"
#include "zeno/protocols.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>
#include <variant>

namespace zeno::cli {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Catalog

Json powers_of_two(int lo, int hi)
{
  Json out = Json::array();
  for (int e = lo; e <= hi; ++e) out.push_back(1 << e);
  return out;
}

Json linspace_json(double a, double b, int count)
{
  Json out = Json::array();
  for (double v : linspace(a, b, count)) out.push_back(v);
  return out;
}

Json int_range(int lo, int hi, int step)
{
  Json out = Json::array();
  for (int v = lo; v <= hi; v += step) out.push_back(v);
  return out;
}

ParamSchema ints(std::string name, Json def, double lo, double hi, std::string help)
{
  return ParamSchema{std::move(name), ParamKind::IntList, std::move(def), lo, hi, false, {}, std::move(help)};
}

ParamSchema doubles(std::string name, Json def, double lo, double hi, bool hi_open, std::string help)
{
  return ParamSchema{std::move(name), ParamKind::DoubleList, std::move(def), lo, hi, hi_open, {}, std::move(help)};
}

ParamSchema integer(std::string name, int def, double lo, double hi, std::string help)
{
  return ParamSchema{std::move(name), ParamKind::Int, def, lo, hi, false, {}, std::move(help)};
}

ParamSchema real(std::string name, double def, double lo, double hi, bool hi_open, std::string help)
{
  return ParamSchema{std::move(name), ParamKind::Double, def, lo, hi, hi_open, {}, std::move(help)};
}

ParamSchema flag(std::string name, bool def, std::string help)
{
  return ParamSchema{std::move(name), ParamKind::Bool, def, 0, 0, false, {}, std::move(help)};
}

ParamSchema choice(std::string name, std::string def, std::vector<std::string> choices, std::string help)
{
  return ParamSchema{std::move(name), ParamKind::String, std::move(def), 0, 0, false, std::move(choices),
                     std::move(help)};
}

const double kInf = std::numeric_limits<double>::infinity();

std::vector<ExperimentInfo> build_catalog()
{
  const Json angles = {kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2, 5 * kPi / 8, 3 * kPi / 4, 7 * kPi / 8, kPi};
  const Json partial_angles = {kPi / 32, kPi / 16, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2};
  const Json walk_times = {kPi / 4, kPi / 2, kPi, 2 * kPi};
  const Json continuum_times = {1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30, 40};
  return {
      {"fig2",
       "Multistage quantum walk: marked probability against m_stage for several t_scale.",
       {ints("m_stage", {1, 2, 3, 4, 5, 6, 8, 10, 20, 50, 100, 10000}, 1, 1e7, "stage counts"),
        doubles("t_scale", walk_times, 0, kInf, false, "scaled runtimes")},
       {"fig2.csv: t_scale, m_stage, p_marked"}},
      {"fig3",
       "Adiabatic protocol: marked probability against t_scale, integrated and as m_stage = 10000.",
       {doubles("t_scale", linspace_json(0.1, 10.0, 100), 1e-12, kInf, false, "scaled runtimes")},
       {"fig3.csv: t_scale, p_marked_adiabatic, p_marked_multistage"}},
      {"fig4",
       "Full-discrete dephasing/destruction against operation count, plus fixed-total-angle variants.",
       {ints("m", powers_of_two(0, 12), 1, 1e7, "operation counts"),
        real("total_angle", kPi / 2, 0, kTwoPi, true, "summed angle for the fixed-total variants")},
       {"fig4.csv: m, p_marked_dephase_full, p_marked_destroy_full, p_destroyed_destroy_full, "
        "p_marked_dephase_total, p_marked_destroy_total, p_destroyed_destroy_total"}},
      {"fig5",
       "Phase rotations of fixed angle per operation against operation count.",
       {ints("m", powers_of_two(0, 12), 1, 1e7, "operation counts"),
        doubles("phi", angles, 0, kTwoPi, true, "rotation angles per operation")},
       {"fig5.csv: phi, m, p_marked"}},
      {"fig6",
       "Continuous dephasing master equation: marked probability against t_scale.",
       {doubles("kappa0", {0.5, 1.0, 2.0, 5.0}, 0, kInf, false, "base rates"),
        doubles("t_scale", continuum_times, 1e-12, kInf, false, "scaled runtimes")},
       {"fig6.csv: kappa0, t_scale, p_marked, purity"}},
      {"fig7",
       "Continuous destruction master equation: marked and destroyed probability against t_scale.",
       {doubles("kappa0", {0.5, 1.0, 2.0, 5.0}, 0, kInf, false, "base rates"),
        doubles("t_scale", continuum_times, 1e-12, kInf, false, "scaled runtimes")},
       {"fig7.csv: kappa0, t_scale, p_marked, p_destroyed"}},
      {"fig8",
       "Partial destruction with fixed angle per operation against operation count.",
       {ints("m", powers_of_two(0, 12), 1, 1e7, "operation counts"),
        doubles("phi", partial_angles, 0, kTwoPi, true, "rotation angles per operation")},
       {"fig8.csv: phi, m, p_marked, p_destroyed"}},
      {"fig9",
       "Partial dephasing with fixed angle per operation against operation count.",
       {ints("m", powers_of_two(0, 12), 1, 1e7, "operation counts"),
        doubles("phi", partial_angles, 0, kTwoPi, true, "rotation angles per operation")},
       {"fig9.csv: phi, m, p_marked"}},
      {"fig10",
       "Hypercube search spectrum in the symmetric subspace against s.",
       {integer("n", 20, 1, 64, "qubits"), integer("s_points", 400, 2, 1e6, "evenly spaced s values in [0, 1]"),
        integer("marked_sign", -1, -1, 1, "sign of the n s |m><m| term (+1 or -1)")},
       {"fig10.csv: s, E_0..E_n, marked_0..marked_n, omega_0..omega_n"}},
      {"invariance",
       "Raw-units reruns across g_min; maximum population deviation per protocol.",
       {doubles("g_min", {0.1, 0.01, 0.001}, 1e-300, 1, false, "minimum gaps, at least two distinct"),
        integer("m", 64, 1, 1e7, "operations or stages"), real("t_scale", 10.0, 0, kInf, false, "scaled runtime"),
        real("phi", kPi / 4, 0, kTwoPi, true, "angle per operation for the partial channels")},
       {"invariance.csv: protocol, max_deviation"}},
      {"zeno-scaling",
       "Leaked and destroyed probability of full-discrete protocols against m, with a power-law fit.",
       {ints("m", int_range(1000, 10000, 1000), 1, 1e7, "operation counts")},
       {"zeno-scaling.csv: family, m, leaked, destroyed", "zeno-scaling_fit.csv: family, exponent"}},
      {"blockade-grid",
       "Zeno blockade regime labels against sign changes of the reduced equation and the Fock oracle.",
       {doubles("G", {0.25, 0.5, 1.0, 2.0, 4.0}, 0, kInf, false, "nonlinear couplings"),
        doubles("gamma", {0.5, 1.0, 2.0, 4.0, 8.0}, 0, kInf, false, "loss rates"),
        integer("m", 1, 1, 64, "control photons"), integer("n", 1, 1, 64, "fiber photons"),
        real("t_max", 20.0, 1e-12, kInf, false, "time horizon"),
        integer("samples", 2001, 2, 1e7, "samples per trajectory"),
        flag("oracle", true, "also run the truncated-Fock master equation"),
        integer("fock_cutoff", 1, 1, 8, "max occupation per mode for the oracle; >= max(m, n)")},
       {"blockade-grid.csv: G, gamma, regime, offdiag_sign_changes, oracle_sign_changes (-1 when disabled)"}},
      {"custom",
       "One operation-sequence protocol, as a per-step trace or a trajectory average.",
       {choice("family", "decoherence", {"phase_rotation", "decoherence", "destruction"}, "channel family"),
        choice("manifestation", "full_discrete", {"full_discrete", "partial_discrete"}, "channel manifestation"),
        integer("m_ops", 64, 0, 1e7, "operations"), real("phi", kPi / 2, 0, kTwoPi, true, "angle"),
        choice("angle_mode", "per_operation", {"per_operation", "fixed_total"}, "phi per operation or summed"),
        real("t_scale", 0.0, 0, kInf, false, "walk time spread over the operations"),
        flag("include_walk_between", false, "walk t_scale/m before each operation"),
        choice("schedule", "optimal", {"optimal", "cutoff"}, "schedule"),
        real("g_min", 0.1, 1e-300, kInf, false, "cutoff schedule only: |f| <= 1/g_min"),
        integer("trajectories", 0, 0, 1e9, "0 for the density-matrix trace, else Monte Carlo count")},
       {"custom.csv (trajectories = 0): step, tau, p_marked, p_destroyed, purity",
        "custom.csv (trajectories > 0): trajectories, seed, p_marked, stderr_marked, p_destroyed"}},
  };
}

// ---------------------------------------------------------------------------
// Validation

// Line of the value at `path` in `text`, found by locating each key in turn.
int locate_line(const std::string& text, const std::vector<std::string>& path)
{
  std::size_t pos = 0;
  std::size_t found = std::string::npos;
  for (const std::string& key : path) {
    const std::size_t at = text.find('"' + key + '"', pos);
    if (at == std::string::npos) break;
    found = at;
    pos = at + key.size() + 2;
  }
  if (found == std::string::npos) return 1;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(found), '\n'));
}

class Collector {
 public:
  explicit Collector(const std::string& text) : text_(text) {}

  void add(const std::vector<std::string>& path, const std::string& message, const std::string& index = "")
  {
    std::string field;
    for (const auto& p : path) field += (field.empty() ? "" : ".") + p;
    errors_.push_back("line " + std::to_string(locate_line(text_, path)) + ": " + field + index + ": " + message);
  }

  bool empty() const { return errors_.empty(); }
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  const std::string& text_;
  std::vector<std::string> errors_;
};

std::string range_text(const ParamSchema& p)
{
  std::ostringstream os;
  os << (std::isinf(p.lo) ? "(-inf" : "[" + format_double(p.lo)) << ", "
     << (std::isinf(p.hi) ? "inf)" : format_double(p.hi) + (p.hi_open ? ")" : "]"));
  return os.str();
}

bool in_range(const ParamSchema& p, double v)
{
  if (!std::isfinite(v) || v < p.lo) return false;
  return p.hi_open ? v < p.hi : v <= p.hi;
}

bool is_int(const Json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

void check_scalar(const ParamSchema& p, const Json& v, Collector& errors, const std::vector<std::string>& path,
                  const std::string& index = "")
{
  const bool want_int = p.kind == ParamKind::Int || p.kind == ParamKind::IntList;
  if (want_int ? !is_int(v) : !v.is_number()) {
    errors.add(path, want_int ? "expected an integer" : "expected a number", index);
    return;
  }
  if (!in_range(p, v.get<double>())) errors.add(path, "out of range " + range_text(p), index);
}

void check_param(const ParamSchema& p, const Json& v, Collector& errors, const std::vector<std::string>& path)
{
  switch (p.kind) {
    case ParamKind::IntList:
    case ParamKind::DoubleList:
      if (!v.is_array()) {
        errors.add(path, "expected a list");
      } else if (v.empty()) {
        errors.add(path, "grid must not be empty");
      } else {
        for (std::size_t i = 0; i < v.size(); ++i) check_scalar(p, v[i], errors, path, "[" + std::to_string(i) + "]");
      }
      break;
    case ParamKind::Int:
    case ParamKind::Double: check_scalar(p, v, errors, path); break;
    case ParamKind::Bool:
      if (!v.is_boolean()) errors.add(path, "expected true or false");
      break;
    case ParamKind::String:
      if (!v.is_string()) {
        errors.add(path, "expected a string");
      } else if (std::find(p.choices.begin(), p.choices.end(), v.get<std::string>()) == p.choices.end()) {
        std::string all;
        for (const auto& c : p.choices) all += (all.empty() ? "" : ", ") + c;
        errors.add(path, "must be one of: " + all);
      }
      break;
  }
}

bool writable_target(const fs::path& dir)
{
  fs::path probe = dir.empty() ? fs::path(".") : dir;
  std::error_code ec;
  while (!fs::exists(probe, ec)) {
    if (!probe.has_parent_path() || probe.parent_path() == probe) {
      probe = ".";
      break;
    }
    probe = probe.parent_path();
  }
  return fs::is_directory(probe, ec) && ::access(probe.c_str(), W_OK) == 0;
}

void cross_checks(const std::string& id, const Json& grid, Collector& errors)
{
  if (id == "invariance") {
    const auto g = grid["g_min"].get<std::vector<double>>();
    if (std::set<double>(g.begin(), g.end()).size() < 2) {
      errors.add({"grid", "g_min"}, "need at least two distinct values");
    }
  }
  if (id == "blockade-grid" && grid["oracle"].get<bool>()) {
    const int need = std::max(grid["m"].get<int>(), grid["n"].get<int>());
    if (grid["fock_cutoff"].get<int>() < need) {
      errors.add({"grid", "fock_cutoff"}, "must be >= max(m, n) = " + std::to_string(need));
    }
  }
  if (id == "fig10" && std::abs(grid["marked_sign"].get<int>()) != 1) {
    errors.add({"grid", "marked_sign"}, "must be +1 or -1");
  }
}

IntegratorConfig parse_integrator(const Json& j, Collector& errors)
{
  IntegratorConfig cfg;
  static const std::set<std::string> known{"method", "steps", "rtol", "atol", "max_steps", "renormalize_every",
                                           "samples"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      errors.add({"integrator", key}, "unknown key");
      continue;
    }
    if (key == "method") {
      if (value == "adaptive") {
        cfg.method = IntegratorConfig::Method::Adaptive;
      } else if (value == "fixed_step") {
        cfg.method = IntegratorConfig::Method::FixedStep;
      } else {
        errors.add({"integrator", key}, "must be one of: adaptive, fixed_step");
      }
    } else if (key == "rtol" || key == "atol") {
      if (!value.is_number()) {
        errors.add({"integrator", key}, "expected a number");
        continue;
      }
      (key == "rtol" ? cfg.rtol : cfg.atol) = value.get<double>();
    } else {
      if (!is_int(value)) {
        errors.add({"integrator", key}, "expected an integer");
        continue;
      }
      if (key == "steps") cfg.steps = value.get<int>();
      if (key == "max_steps") cfg.max_steps = value.get<long>();
      if (key == "renormalize_every") cfg.renormalize_every = value.get<int>();
      if (key == "samples") cfg.samples = value.get<int>();
    }
  }
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    errors.add({"integrator"}, e.what());
  }
  return cfg;
}

Json integrator_json(const IntegratorConfig& c)
{
  return Json{{"method", c.method == IntegratorConfig::Method::Adaptive ? "adaptive" : "fixed_step"},
              {"steps", c.steps},
              {"rtol", c.rtol},
              {"atol", c.atol},
              {"max_steps", c.max_steps},
              {"renormalize_every", c.renormalize_every},
              {"samples", c.samples}};
}

// ---------------------------------------------------------------------------
// Running

using Cell = std::variant<double, long long, std::string>;
using Row = std::vector<Cell>;

struct Table {
  std::string suffix;
  std::vector<std::string> header;
  std::vector<Row> rows;
};

std::string cell_text(const Cell& c)
{
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

// Evaluates fn(0..count-1) on a pool of threads; results keep index order and
// the lowest-index failure is the one reported.
template <typename Fn>
std::vector<Row> parallel_rows(std::size_t count, int threads, Fn fn)
{
  std::vector<Row> out(count);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t extra = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1))) - 1;
  for (std::size_t k = 0; k < extra; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

template <typename Fn>
Row at_point(const std::string& id, const std::string& label, Fn&& fn)
{
  try {
    return fn();
  } catch (const std::exception& e) {
    throw RunError(id + " at " + label + ": " + e.what());
  }
}

std::vector<int> int_list(const Json& grid, const char* key) { return grid[key].get<std::vector<int>>(); }
std::vector<double> double_list(const Json& grid, const char* key) { return grid[key].get<std::vector<double>>(); }

std::string label(std::initializer_list<std::pair<const char*, double>> items)
{
  std::string out;
  for (const auto& [k, v] : items) out += (out.empty() ? "" : ", ") + std::string(k) + "=" + format_double(v);
  return out;
}

IntegratorConfig endpoint_only(IntegratorConfig c)
{
  c.samples = 2;
  return c;
}

ProtocolConfig partial(Family family, int m, double phi)
{
  ProtocolConfig c;
  c.family = family;
  c.manifestation = Manifestation::PartialDiscrete;
  c.m_ops = m;
  c.phi = phi;
  return c;
}

Table run_fig2(const ExperimentConfig& cfg)
{
  const auto ts = double_list(cfg.grid, "t_scale");
  const auto ms = int_list(cfg.grid, "m_stage");
  Table t{"", {"t_scale", "m_stage", "p_marked"}, {}};
  t.rows = parallel_rows(ts.size() * ms.size(), cfg.threads, [&](std::size_t i) {
    const double ts_i = ts[i / ms.size()];
    const int m = ms[i % ms.size()];
    return at_point("fig2", label({{"t_scale", ts_i}, {"m_stage", m}}), [&] {
      return Row{ts_i, static_cast<long long>(m), run_multistage_walk(m, ts_i).final_marked()};
    });
  });
  return t;
}

Table run_fig3(const ExperimentConfig& cfg)
{
  const auto ts = double_list(cfg.grid, "t_scale");
  Table t{"", {"t_scale", "p_marked_adiabatic", "p_marked_multistage"}, {}};
  t.rows = parallel_rows(ts.size(), cfg.threads, [&](std::size_t i) {
    return at_point("fig3", label({{"t_scale", ts[i]}}), [&] {
      const auto r = integrate_adiabatic(ts[i], endpoint_only(cfg.integrator));
      return Row{ts[i], r.trace.final_marked(), run_multistage_walk(10000, ts[i]).final_marked()};
    });
  });
  return t;
}

Table run_fig4(const ExperimentConfig& cfg)
{
  const auto ms = int_list(cfg.grid, "m");
  const double total = cfg.grid["total_angle"].get<double>();
  Table t{"",
          {"m", "p_marked_dephase_full", "p_marked_destroy_full", "p_destroyed_destroy_full", "p_marked_dephase_total",
           "p_marked_destroy_total", "p_destroyed_destroy_total"},
          {}};
  t.rows = parallel_rows(ms.size(), cfg.threads, [&](std::size_t i) {
    const int m = ms[i];
    return at_point("fig4", label({{"m", m}}), [&] {
      ProtocolConfig c;
      c.m_ops = m;
      c.family = Family::Decoherence;
      const auto dephase_full = run_operation_sequence(c);
      c.family = Family::Destruction;
      const auto destroy_full = run_operation_sequence(c);
      ProtocolConfig p = partial(Family::Decoherence, m, total);
      p.angle_mode = AngleMode::FixedTotal;
      const auto dephase_total = run_operation_sequence(p);
      p.family = Family::Destruction;
      const auto destroy_total = run_operation_sequence(p);
      return Row{static_cast<long long>(m),      dephase_full.final_marked(),  destroy_full.final_marked(),
                 destroy_full.final_destroyed(), dephase_total.final_marked(), destroy_total.final_marked(),
                 destroy_total.final_destroyed()};
    });
  });
  return t;
}

Table run_angle_sweep(const ExperimentConfig& cfg, Family family, bool with_destroyed)
{
  const auto phis = double_list(cfg.grid, "phi");
  const auto ms = int_list(cfg.grid, "m");
  Table t{"", {"phi", "m", "p_marked"}, {}};
  if (with_destroyed) t.header.push_back("p_destroyed");
  t.rows = parallel_rows(phis.size() * ms.size(), cfg.threads, [&](std::size_t i) {
    const double phi = phis[i / ms.size()];
    const int m = ms[i % ms.size()];
    return at_point(cfg.experiment, label({{"phi", phi}, {"m", m}}), [&] {
      const auto trace = run_operation_sequence(partial(family, m, phi));
      Row row{phi, static_cast<long long>(m), trace.final_marked()};
      if (with_destroyed) row.push_back(trace.final_destroyed());
      return row;
    });
  });
  return t;
}

Table run_continuum(const ExperimentConfig& cfg, ContinuumFamily family)
{
  const auto ks = double_list(cfg.grid, "kappa0");
  const auto ts = double_list(cfg.grid, "t_scale");
  const bool destroy = family == ContinuumFamily::Destruction;
  Table t{"", {"kappa0", "t_scale", "p_marked", destroy ? "p_destroyed" : "purity"}, {}};
  t.rows = parallel_rows(ks.size() * ts.size(), cfg.threads, [&](std::size_t i) {
    LindbladSpec spec;
    spec.family = family;
    spec.kappa0 = ks[i / ts.size()];
    spec.t_scale = ts[i % ts.size()];
    return at_point(cfg.experiment, label({{"kappa0", spec.kappa0}, {"t_scale", spec.t_scale}}), [&] {
      const auto r = integrate(spec, endpoint_only(cfg.integrator));
      const auto& s = r.trace.final_state;
      return Row{spec.kappa0, spec.t_scale, r.trace.final_marked(), destroy ? destroyed_probability(s) : purity(s)};
    });
  });
  return t;
}

Table run_fig10(const ExperimentConfig& cfg)
{
  const int n = cfg.grid["n"].get<int>();
  const int points = cfg.grid["s_points"].get<int>();
  const int sign = cfg.grid["marked_sign"].get<int>();
  Table t{"", {"s"}, {}};
  for (const char* prefix : {"E_", "marked_", "omega_"}) {
    for (int k = 0; k <= n; ++k) t.header.push_back(prefix + std::to_string(k));
  }
  t.rows = parallel_rows(points, cfg.threads, [&](std::size_t i) {
    const double s = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    return at_point("fig10", label({{"s", s}}), [&] {
      const SpectrumSlice slice = spectrum(n, s, sign);
      Row row{s};
      for (const auto* v : {&slice.eigenvalues, &slice.marked_overlap, &slice.omega_overlap}) {
        for (int k = 0; k <= n; ++k) row.push_back((*v)(k));
      }
      return row;
    });
  });
  return t;
}

Table run_invariance(const ExperimentConfig& cfg)
{
  const auto g = double_list(cfg.grid, "g_min");
  const int m = cfg.grid["m"].get<int>();
  const double t_scale = cfg.grid["t_scale"].get<double>();
  const double phi = cfg.grid["phi"].get<double>();
  const std::vector<std::string> names{"multistage_walk", "phase_rotation", "decoherence", "destruction"};
  Table t{"", {"protocol", "max_deviation"}, {}};
  t.rows = parallel_rows(names.size(), cfg.threads, [&](std::size_t i) {
    return at_point("invariance", "protocol=" + names[i], [&] {
      if (i == 0) return Row{names[i], audit_multistage_invariance(m, t_scale, g)};
      ProtocolConfig c = partial(family_from_string(names[i]), m, phi);
      c.t_scale = t_scale;
      c.include_walk_between = true;
      return Row{names[i], audit_scale_invariance(c, g)};
    });
  });
  return t;
}

std::vector<Table> run_zeno_scaling(const ExperimentConfig& cfg)
{
  const auto ms = int_list(cfg.grid, "m");
  Table points{"", {"family", "m", "leaked", "destroyed"}, {}};
  Table fit{"_fit", {"family", "exponent"}, {}};
  for (Family family : {Family::Decoherence, Family::Destruction}) {
    const auto data = zeno_excitation_scaling(family, ms);
    std::vector<double> x, y;
    for (const auto& p : data) {
      points.rows.push_back(Row{to_string(family), static_cast<long long>(p.m), p.leaked, p.destroyed});
      x.push_back(p.m);
      y.push_back(p.leaked);
    }
    double exponent = std::numeric_limits<double>::quiet_NaN();
    try {
      exponent = fit_decay_exponent(x, y);
    } catch (const std::domain_error&) {
      // Fewer than two points in the top decade: leave the fit undefined.
    }
    fit.rows.push_back(Row{to_string(family), exponent});
  }
  return {points, fit};
}

Table run_blockade(const ExperimentConfig& cfg)
{
  const auto gs = double_list(cfg.grid, "G");
  const auto gammas = double_list(cfg.grid, "gamma");
  const int m = cfg.grid["m"].get<int>();
  const int n = cfg.grid["n"].get<int>();
  const double t_max = cfg.grid["t_max"].get<double>();
  const int samples = cfg.grid["samples"].get<int>();
  const bool oracle = cfg.grid["oracle"].get<bool>();
  const int cutoff = cfg.grid["fock_cutoff"].get<int>();
  constexpr double im0 = 0.5;
  Table t{"", {"G", "gamma", "regime", "offdiag_sign_changes", "oracle_sign_changes"}, {}};
  t.rows = parallel_rows(gs.size() * gammas.size(), cfg.threads, [&](std::size_t i) {
    BlockadeParams p;
    p.m = m;
    p.n = n;
    p.G = gs[i / gammas.size()];
    p.gamma = gammas[i % gammas.size()];
    return at_point("blockade-grid", label({{"G", p.G}, {"gamma", p.gamma}}), [&] {
      const double band = 1e-6 * im0;
      const auto off = simulate_offdiag(p, im0, 0.0, t_max, samples);
      long long oracle_changes = -1;
      if (oracle) {
        const auto o = simulate_master_oracle(p, cutoff, t_max, samples);
        oracle_changes = static_cast<long long>(sign_changes(o.t, o.im_coherence, band).size());
      }
      return Row{p.G, p.gamma, to_string(classify_regime(p)),
                 static_cast<long long>(sign_changes(off.t, off.y, band).size()), oracle_changes};
    });
  });
  return t;
}

Table run_custom(const ExperimentConfig& cfg)
{
  const Json& g = cfg.grid;
  ProtocolConfig c;
  c.family = family_from_string(g["family"].get<std::string>());
  c.manifestation = manifestation_from_string(g["manifestation"].get<std::string>());
  c.m_ops = g["m_ops"].get<int>();
  c.phi = g["phi"].get<double>();
  c.angle_mode = g["angle_mode"] == "fixed_total" ? AngleMode::FixedTotal : AngleMode::PerOperation;
  c.t_scale = g["t_scale"].get<double>();
  c.include_walk_between = g["include_walk_between"].get<bool>();
  if (g["schedule"] == "cutoff") c.schedule = Schedule::cutoff(g["g_min"].get<double>());
  const int trajectories = g["trajectories"].get<int>();
  if (trajectories > 0) {
    Table t{"", {"trajectories", "seed", "p_marked", "stderr_marked", "p_destroyed"}, {}};
    t.rows.push_back(at_point("custom", "trajectories", [&] {
      const auto est = run_trajectories(c, trajectories, cfg.seed);
      return Row{static_cast<long long>(trajectories), static_cast<long long>(cfg.seed), est.p_marked,
                 est.stderr_marked, est.p_destroyed};
    }));
    return t;
  }
  Table t{"", {"step", "tau", "p_marked", "p_destroyed", "purity"}, {}};
  const auto trace = run_operation_sequence(c);
  for (const auto& s : trace.steps) {
    t.rows.push_back(Row{static_cast<long long>(s.step), s.tau, s.p_marked, s.p_destroyed, s.purity});
  }
  return t;
}

std::vector<Table> dispatch(const ExperimentConfig& cfg)
{
  const std::string& id = cfg.experiment;
  if (id == "fig2") return {run_fig2(cfg)};
  if (id == "fig3") return {run_fig3(cfg)};
  if (id == "fig4") return {run_fig4(cfg)};
  if (id == "fig5") return {run_angle_sweep(cfg, Family::PhaseRotation, false)};
  if (id == "fig6") return {run_continuum(cfg, ContinuumFamily::Dephasing)};
  if (id == "fig7") return {run_continuum(cfg, ContinuumFamily::Destruction)};
  if (id == "fig8") return {run_angle_sweep(cfg, Family::Destruction, true)};
  if (id == "fig9") return {run_angle_sweep(cfg, Family::Decoherence, false)};
  if (id == "fig10") return {run_fig10(cfg)};
  if (id == "invariance") return {run_invariance(cfg)};
  if (id == "zeno-scaling") return run_zeno_scaling(cfg);
  if (id == "blockade-grid") return {run_blockade(cfg)};
  if (id == "custom") return {run_custom(cfg)};
  throw RunError("unknown experiment '" + id + "'");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(errors.empty() ? "invalid config" : errors.front()), errors_(std::move(errors))
{
}

const std::vector<ExperimentInfo>& experiment_catalog()
{
  static const std::vector<ExperimentInfo> catalog = build_catalog();
  return catalog;
}

const ExperimentInfo& experiment_info(const std::string& id)
{
  for (const auto& info : experiment_catalog()) {
    if (info.id == id) return info;
  }
  throw std::invalid_argument("unknown experiment '" + id + "'");
}

Json ExperimentConfig::to_json() const
{
  return Json{{"experiment", experiment},
              {"output", output.string()},
              {"threads", threads},
              {"seed", seed},
              {"integrator", integrator_json(integrator)},
              {"grid", grid}};
}

ExperimentConfig parse_config(const std::string& text)
{
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto upto = text.begin() + static_cast<long>(std::min<std::size_t>(e.byte, text.size()));
    const int line = 1 + static_cast<int>(std::count(text.begin(), upto, '\n'));
    throw ConfigError({"line " + std::to_string(line) + ": syntax error: " + e.what()});
  }
  Collector errors(text);
  if (!root.is_object()) throw ConfigError({"line 1: config must be a JSON object"});

  ExperimentConfig cfg;
  static const std::set<std::string> known{"experiment", "output", "threads", "seed", "integrator", "grid"};
  for (const auto& [key, value] : root.items()) {
    if (!known.contains(key)) errors.add({key}, "unknown key");
  }

  const ExperimentInfo* info = nullptr;
  if (!root.contains("experiment")) {
    errors.add({"experiment"}, "required");
  } else if (!root["experiment"].is_string()) {
    errors.add({"experiment"}, "expected a string");
  } else {
    cfg.experiment = root["experiment"].get<std::string>();
    try {
      info = &experiment_info(cfg.experiment);
    } catch (const std::invalid_argument&) {
      errors.add({"experiment"}, "unknown experiment '" + cfg.experiment + "'");
    }
  }

  if (root.contains("output")) {
    if (!root["output"].is_string() || root["output"].get<std::string>().empty()) {
      errors.add({"output"}, "expected a non-empty path");
    } else {
      cfg.output = root["output"].get<std::string>();
    }
  }
  if (!writable_target(cfg.output)) errors.add({"output"}, "directory is not writable: " + cfg.output.string());

  if (root.contains("threads")) {
    const Json& v = root["threads"];
    if (!is_int(v) || v.get<long long>() < 1 || v.get<long long>() > 256) {
      errors.add({"threads"}, "expected an integer in [1, 256]");
    } else {
      cfg.threads = v.get<int>();
    }
  }
  if (root.contains("seed")) {
    const Json& v = root["seed"];
    if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))) {
      errors.add({"seed"}, "expected a non-negative integer");
    } else {
      cfg.seed = v.get<std::uint64_t>();
    }
  }

  if (root.contains("integrator")) {
    if (!root["integrator"].is_object()) {
      errors.add({"integrator"}, "expected an object");
    } else {
      cfg.integrator = parse_integrator(root["integrator"], errors);
    }
  }

  Json grid = root.contains("grid") ? root["grid"] : Json::object();
  if (!grid.is_object()) {
    errors.add({"grid"}, "expected an object");
    grid = Json::object();
  }
  if (info) {
    for (const auto& [key, value] : grid.items()) {
      const bool known_param = std::any_of(info->params.begin(), info->params.end(),
                                           [&](const ParamSchema& p) { return p.name == key; });
      if (!known_param) errors.add({"grid", key}, "unknown parameter for " + info->id);
    }
    const std::size_t before = errors.errors().size();
    for (const ParamSchema& p : info->params) {
      if (!grid.contains(p.name)) {
        grid[p.name] = p.default_value;
      } else {
        check_param(p, grid[p.name], errors, {"grid", p.name});
      }
    }
    if (errors.errors().size() == before) cross_checks(info->id, grid, errors);
  }
  if (!errors.empty()) throw ConfigError(errors.errors());
  cfg.grid = std::move(grid);
  return cfg;
}

ExperimentConfig validate_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError({"line 0: cannot read config file " + path.string()});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config)
{
  const std::vector<Table> tables = dispatch(config);
  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec) throw RunError("cannot create output directory " + config.output.string() + ": " + ec.message());
  std::vector<fs::path> written;
  for (const Table& t : tables) {
    const fs::path file = config.output / (config.experiment + t.suffix + ".csv");
    std::ofstream out(file, std::ios::binary);
    if (!out) throw RunError("cannot write " + file.string());
    for (std::size_t k = 0; k < t.header.size(); ++k) out << (k ? "," : "") << t.header[k];
    out << '\n';
    for (const Row& row : t.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << cell_text(row[k]);
      out << '\n';
    }
    if (!out) throw RunError("write failed for " + file.string());
    written.push_back(file);
  }
  return written;
}

std::string reference_markdown()
{
  std::ostringstream os;
  os << "# Experiment reference\n\n"
     << "Top-level keys: `experiment` (required), `output` (directory, default `.`), `threads` (default 1), "
     << "`seed` (default 0, trajectory mode only), `integrator`, `grid`.\n\n"
     << "`integrator` defaults: `" << integrator_json(IntegratorConfig{}).dump() << "`\n";
  for (const auto& info : experiment_catalog()) {
    os << "\n## " << info.id << "\n\n" << info.summary << "\n\n";
    os << "| parameter | type | default | range | meaning |\n|---|---|---|---|---|\n";
    for (const auto& p : info.params) {
      static const char* kinds[] = {"int list", "number list", "int", "number", "bool", "string"};
      std::string range;
      if (p.kind == ParamKind::String) {
        for (const auto& c : p.choices) range += (range.empty() ? "" : " \\| ") + c;
      } else if (p.kind != ParamKind::Bool) {
        range = range_text(p);
      }
      os << "| `" << p.name << "` | " << kinds[static_cast<int>(p.kind)] << " | `" << p.default_value.dump()
         << "` | " << range << " | " << p.help << " |\n";
    }
    os << "\nOutput:\n";
    for (const auto& c : info.columns) os << "- " << c << "\n";
  }
  return os.str();
}

std::string format_double(double value)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace zeno::cli
