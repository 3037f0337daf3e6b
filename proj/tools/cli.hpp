#pragma once

// Command-line front end. parse_args builds a validated RunConfig; run executes it and writes a
// CSV or JSON table. Exit codes: 0 success, 1 numerical failure or failed verification,
// 2 usage error.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracevo/fracevo.hpp"

namespace fracevo::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; carries the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Kernel, Density, Coeffs, Solve, Verify };

inline std::string to_string(Command c) {
  switch (c) {
    case Command::Kernel: return "kernel";
    case Command::Density: return "density";
    case Command::Coeffs: return "coeffs";
    case Command::Solve: return "solve";
    case Command::Verify: return "verify";
  }
  return "?";
}

inline Command parse_command(const std::string& s) {
  for (Command c : {Command::Kernel, Command::Density, Command::Coeffs, Command::Solve, Command::Verify})
    if (to_string(c) == s) return c;
  throw UsageError("unknown command '" + s + "'");
}

inline const std::vector<std::string>& suites() {
  static const std::vector<std::string> names = {"convolution", "cm", "sector", "density", "postwidder", "hille-yosida"};
  return names;
}

/// Every field is a canonical string or number so that JSON round-trips exactly.
struct RunConfig {
  Command command = Command::Kernel;
  std::string weight = "discrete:0.5";
  std::string kind = "caputo";
  std::string which;  // k1 or k2; empty selects the kernel of `kind`
  std::string generator = "scalar:-1";
  std::string datum = "ones";
  std::string t = "1";
  std::string tau = "0:10:101";
  std::string s = "1";
  std::string spacing = "linear";
  std::string method = "resolvent";
  std::string suite = "convolution";
  int order = 16;
  int steps = 1024;
  int talbot_nodes = 32;
  double tail_tol = 1e-10;
  double tol = 1e-5;
  std::string format = "csv";
  std::string output;
  bool dump_config = false;  // not serialized

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// ---------------------------------------------------------------------------------------------
// Grids and vectors

/// "a:b:n[:log|:linear]", a comma list, or a single number.
inline std::vector<double> parse_grid(const std::string& text, const std::string& spacing = "linear") {
  if (text.find(':') == std::string::npos) {
    std::vector<double> v;
    for (const auto& part : detail::split(text, ',')) v.push_back(detail::parse_number(part, "grid value"));
    if (v.empty()) throw ParameterError("empty grid");
    return v;
  }
  const auto parts = detail::split(text, ':');
  if (parts.size() != 3 && parts.size() != 4) throw ParameterError("grid '" + text + "' must be START:STOP:COUNT[:log|:linear]");
  const double a = detail::parse_number(parts[0], "grid start");
  const double b = detail::parse_number(parts[1], "grid stop");
  const double n = detail::parse_number(parts[2], "grid count");
  const std::string mode = parts.size() == 4 ? parts[3] : spacing;
  if (n < 1 || n != std::floor(n) || n > 1e6) throw ParameterError("grid count must be a positive integer");
  if (mode != "log" && mode != "linear") throw ParameterError("grid spacing must be log or linear");
  const int count = static_cast<int>(n);
  if (count == 1) return {a};
  if (mode == "log" && !(a > 0.0 && b > 0.0)) throw ParameterError("log grid needs positive endpoints");
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    v[i] = mode == "log" ? a * std::pow(b / a, f) : a + (b - a) * f;
  }
  v.back() = b;
  return v;
}

/// "ones", "eK" (1-based unit vector), or a comma list.
inline Vec parse_datum(const std::string& text, std::size_t dim) {
  if (text == "ones") return Vec(dim, 1.0);
  if (text.size() > 1 && text[0] == 'e' && text.find(',') == std::string::npos) {
    const double k = detail::parse_number(text.substr(1), "unit index");
    if (k < 1 || k > static_cast<double>(dim) || k != std::floor(k))
      throw ParameterError("unit vector index out of range 1.." + std::to_string(dim));
    Vec v(dim, 0.0);
    v[static_cast<std::size_t>(k) - 1] = 1.0;
    return v;
  }
  Vec v;
  for (const auto& part : detail::split(text, ',')) v.push_back(detail::parse_number(part, "datum entry"));
  if (v.size() != dim)
    throw ParameterError("datum has " + std::to_string(v.size()) + " entries; generator dimension is " + std::to_string(dim));
  return v;
}

// ---------------------------------------------------------------------------------------------
// Validation and JSON

namespace impl {

template <class F>
void flag_check(const std::string& flag, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

}  // namespace impl

/// Canonicalizes specs and checks every invariant before any computation.
inline void validate(RunConfig& cfg) {
  impl::flag_check("--weight", [&] {
    const auto w = parse_weight(cfg.weight);
    require_valid(w);
    cfg.weight = fracevo::to_string(w);
  });
  impl::flag_check("--kind", [&] { cfg.kind = fracevo::to_string(parse_kind(cfg.kind)); });
  if (!cfg.which.empty() && cfg.which != "k1" && cfg.which != "k2") throw UsageError("--which: expected k1 or k2");
  impl::flag_check("--generator", [&] { cfg.generator = fracevo::to_string(parse_generator(cfg.generator)); });
  impl::flag_check("--a", [&] { parse_datum(cfg.datum, dimension(parse_generator(cfg.generator))); });
  if (cfg.spacing != "linear" && cfg.spacing != "log") throw UsageError("--spacing: expected linear or log");
  impl::flag_check("--t", [&] { parse_grid(cfg.t, cfg.spacing); });
  impl::flag_check("--tau", [&] { parse_grid(cfg.tau, "linear"); });
  impl::flag_check("--s", [&] {
    for (double v : parse_grid(cfg.s, "linear"))
      if (!(v > 0.0)) throw ParameterError("s must be positive");
  });
  impl::flag_check("--method", [&] { parse_method(cfg.method); });
  if (std::find(suites().begin(), suites().end(), cfg.suite) == suites().end())
    throw UsageError("--suite: unknown suite '" + cfg.suite + "'");
  if (cfg.order < 1 || cfg.order > kMaxPostWidderOrder)
    throw UsageError("--order: must lie in 1.." + std::to_string(kMaxPostWidderOrder));
  if (cfg.steps < 2) throw UsageError("--steps: must be >= 2");
  if (cfg.talbot_nodes < 4) throw UsageError("--talbot-nodes: must be >= 4");
  if (!(cfg.tail_tol > 0.0)) throw UsageError("--tail-tol: must be positive");
  if (!(cfg.tol > 0.0)) throw UsageError("--tol: must be positive");
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format: expected csv or json");
}

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"command", to_string(c.command)},
          {"weight", c.weight},
          {"kind", c.kind},
          {"which", c.which},
          {"generator", c.generator},
          {"a", c.datum},
          {"t", c.t},
          {"tau", c.tau},
          {"s", c.s},
          {"spacing", c.spacing},
          {"method", c.method},
          {"suite", c.suite},
          {"order", c.order},
          {"steps", c.steps},
          {"talbot_nodes", c.talbot_nodes},
          {"tail_tol", c.tail_tol},
          {"tol", c.tol},
          {"format", c.format},
          {"output", c.output}};
}

inline RunConfig from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.command = parse_command(j.at("command").get<std::string>());
    c.weight = j.at("weight").get<std::string>();
    c.kind = j.at("kind").get<std::string>();
    c.which = j.at("which").get<std::string>();
    c.generator = j.at("generator").get<std::string>();
    c.datum = j.at("a").get<std::string>();
    c.t = j.at("t").get<std::string>();
    c.tau = j.at("tau").get<std::string>();
    c.s = j.at("s").get<std::string>();
    c.spacing = j.at("spacing").get<std::string>();
    c.method = j.at("method").get<std::string>();
    c.suite = j.at("suite").get<std::string>();
    c.order = j.at("order").get<int>();
    c.steps = j.at("steps").get<int>();
    c.talbot_nodes = j.at("talbot_nodes").get<int>();
    c.tail_tol = j.at("tail_tol").get<double>();
    c.tol = j.at("tol").get<double>();
    c.format = j.at("format").get<std::string>();
    c.output = j.at("output").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("--config: ") + e.what());
  }
  validate(c);
  return c;
}

// ---------------------------------------------------------------------------------------------
// Argument parsing

namespace impl {

// Per-command defaults for flags the user did not give.
inline void apply_defaults(RunConfig& c, const CLI::App& sub) {
  auto given = [&](const std::string& name) {
    try {
      return sub.get_option(name)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (c.command == Command::Verify) {
    if (!given("--t")) c.t = c.suite == "cm" ? "1e-2:1e2:40:log" : "0.1,1,10";
    if (!given("--s")) c.s = c.suite == "hille-yosida" ? "0.1,1,10" : "1";
    if (!given("--order")) c.order = c.suite == "hille-yosida" ? 5 : 16;
    if (!given("--tol")) {
      if (c.suite == "convolution") c.tol = parse_weight(c.weight).index() == 0 ? 1e-6 : 1e-5;
      else if (c.suite == "cm") c.tol = 1e-8;
      else if (c.suite == "sector" || c.suite == "postwidder") c.tol = 1e-12;
      else if (c.suite == "density") c.tol = 1e-6;
      else c.tol = 1e-10;
    }
  } else if (c.command == Command::Coeffs) {
    if (!given("--order")) c.order = 8;
  } else if (c.command == Command::Solve) {
    if (!given("--order")) c.order = 32;
  }
}

}  // namespace impl

/// argv without the program name. Throws UsageError (exit 2) or HelpRequested (exit 0).
inline RunConfig parse_args(const std::vector<std::string>& argv) {
  RunConfig c;
  std::string config_path;
  CLI::App app{"Distributed-order fractional evolution equations: kernels, densities, solvers, checks", "fracevo"};
  app.add_option("--config", config_path, "Run a JSON RunConfig instead of flags");
  app.add_flag("--dump-config", c.dump_config, "Print the parsed RunConfig as JSON and exit");
  app.require_subcommand(0, 1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--weight", c.weight, "discrete:ALPHA[,AJ:BJ]* | constant | poly:C0,C1,...")->capture_default_str();
    sub->add_option("--kind", c.kind, "caputo | rl")->capture_default_str();
    sub->add_option("--format", c.format, "csv | json")->capture_default_str();
    sub->add_option("-o,--output", c.output, "Output file (default stdout)");
    sub->add_flag("--dump-config", c.dump_config, "Print the parsed RunConfig as JSON and exit");
    sub->add_option("--spacing", c.spacing, "Default spacing of START:STOP:COUNT t grids: linear | log")->capture_default_str();
  };

  auto* kernel = app.add_subcommand("kernel", "Evaluate k1 or k2 on a t grid");
  common(kernel);
  kernel->add_option("--which", c.which, "k1 | k2 (default: the kernel of --kind)");
  kernel->add_option("--t", c.t, "t grid")->capture_default_str();

  auto* density = app.add_subcommand("density", "Subordination density phi(t, tau)");
  common(density);
  density->add_option("--t", c.t, "t grid")->capture_default_str();
  density->add_option("--tau", c.tau, "tau grid")->capture_default_str();

  auto* coeffs = app.add_subcommand("coeffs", "Post-Widder coefficients b_{n,k,p}(s)");
  common(coeffs);
  coeffs->add_option("--s", c.s, "point s > 0")->capture_default_str();
  coeffs->add_option("-n,--order", c.order, "order n <= 40 (default 8)");

  auto* solve = app.add_subcommand("solve", "Solve u = a + k * Au");
  common(solve);
  solve->add_option("--generator", c.generator, "scalar:L | diag:L1,L2,... | laplacian:N[,H] | zero")->capture_default_str();
  solve->add_option("--a", c.datum, "initial datum: ones | eK | comma list")->capture_default_str();
  solve->add_option("--t", c.t, "t grid")->capture_default_str();
  solve->add_option("--method", c.method, "resolvent | subordination | postwidder | volterra")->capture_default_str();
  solve->add_option("-n,--order", c.order, "Post-Widder order (default 32)");
  solve->add_option("--steps", c.steps, "Volterra steps")->capture_default_str();
  solve->add_option("--talbot-nodes", c.talbot_nodes, "Talbot nodes for the resolvent method")->capture_default_str();
  solve->add_option("--tail-tol", c.tail_tol, "subordination tail mass tolerance")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  common(verify);
  verify->add_option("--suite", c.suite, "convolution | cm | sector | density | postwidder | hille-yosida")->capture_default_str();
  verify->add_option("--which", c.which, "k1 | k2 for the cm suite");
  verify->add_option("--generator", c.generator, "generator for hille-yosida")->capture_default_str();
  verify->add_option("--t", c.t, "t grid (suite default)");
  verify->add_option("--s", c.s, "s grid for hille-yosida, point for postwidder");
  verify->add_option("-n,--order", c.order, "max order (postwidder 16, hille-yosida 5)");
  verify->add_option("--tol", c.tol, "pass tolerance (suite default)");

  std::vector<std::string> rev(argv.rbegin(), argv.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    throw HelpRequested(out.str());
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    throw HelpRequested(out.str());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw UsageError("--config: cannot open '" + config_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("--config: ") + e.what());
    }
    const bool dump = c.dump_config;
    c = from_json(j);
    c.dump_config = dump;
    return c;
  }
  const auto subs = app.get_subcommands();
  if (subs.empty()) throw UsageError("a command is required: kernel, density, coeffs, solve or verify");
  c.command = parse_command(subs.front()->get_name());
  impl::flag_check("--weight", [&] { parse_weight(c.weight); });
  impl::apply_defaults(c, *subs.front());
  validate(c);
  return c;
}

// ---------------------------------------------------------------------------------------------
// Execution

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> notes;  // summary lines
  bool passed = true;              // verify suites only
};

inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline void write_csv(const Table& t, std::ostream& out) {
  out << "#";
  for (const auto& [k, v] : t.metadata) out << " " << k << "=" << v;
  out << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_value(row[i]);
    out << "\n";
  }
  for (const auto& n : t.notes) out << "# " << n << "\n";
}

inline void write_json(const Table& t, std::ostream& out) {
  nlohmann::json j;
  j["metadata"] = t.metadata;
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  j["notes"] = t.notes;
  if (t.metadata.count("suite")) j["passed"] = t.passed;
  out << j.dump(2) << "\n";
}

namespace impl {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline Table run_kernel(const RunConfig& c) {
  const auto w = parse_weight(c.weight);
  const KernelId id = c.which.empty() ? kernel_for(parse_kind(c.kind)) : (c.which == "k1" ? KernelId::K1 : KernelId::K2);
  Table t;
  t.columns = {"t", "value"};
  t.metadata["which"] = to_string(id);
  for (double x : parse_grid(c.t, c.spacing)) t.rows.push_back({x, kernel_eval(w, id, x)});
  return t;
}

inline Table run_density(const RunConfig& c) {
  const auto w = parse_weight(c.weight);
  const auto kind = parse_kind(c.kind);
  const auto taus = parse_grid(c.tau, "linear");
  Table t;
  t.columns = {"t", "tau", "phi"};
  for (double x : parse_grid(c.t, c.spacing)) {
    const SubordinationDensity phi(w, kind, x);
    for (double tau : taus) t.rows.push_back({x, tau, phi(tau)});
  }
  if (is_discrete(w)) t.metadata["theta0"] = detail::format_number(subordination_angle(w, kind));
  t.metadata["contour_angle"] = detail::format_number(density_angle(w, kind));
  return t;
}

inline Table run_coeffs(const RunConfig& c) {
  const auto w = parse_weight(c.weight);
  const double s = parse_grid(c.s, "linear").front();
  const auto tab = postwidder_coeffs(w, parse_kind(c.kind), s, c.order);
  Table t;
  t.columns = {"k", "p", "b", "weight"};
  for (const auto& [key, b] : tab.entries) t.rows.push_back({double(key.first), double(key.second), b, tab.weights.at(key)});
  t.metadata["n"] = std::to_string(c.order);
  t.metadata["s"] = detail::format_number(s);
  t.metadata["g"] = detail::format_number(tab.g);
  return t;
}

// Linear interpolation of a Volterra trajectory at the requested times.
inline Vec interpolate(const Trajectory& tr, double x) {
  const double dt = tr.times[1] - tr.times[0];
  const std::size_t last = tr.times.size() - 1;
  double pos = std::min(x / dt, double(last));
  std::size_t i = std::min(static_cast<std::size_t>(pos), last - 1);
  const double f = pos - double(i);
  Vec u(tr.states[i].size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = (1.0 - f) * tr.states[i][j] + f * tr.states[i + 1][j];
  return u;
}

inline Table run_solve(const RunConfig& c) {
  const auto w = parse_weight(c.weight);
  const auto kind = parse_kind(c.kind);
  const auto A = parse_generator(c.generator);
  const auto a = parse_datum(c.datum, dimension(A));
  const auto ts = parse_grid(c.t, c.spacing);
  const Method m = parse_method(c.method);
  Trajectory tr;
  Table t;
  switch (m) {
    case Method::Resolvent:
      tr = solve_resolvent(w, kind, A, a, ts, FixedTalbot{c.talbot_nodes});
      t.metadata["talbot_nodes"] = std::to_string(c.talbot_nodes);
      break;
    case Method::Subordination: {
      TauGridOptions opt;
      opt.tail_tol = c.tail_tol;
      tr = solve_subordination(w, kind, A, a, ts, opt);
      break;
    }
    case Method::PostWidder:
      tr = solve_postwidder(w, kind, A, a, ts, c.order);
      break;
    case Method::Volterra: {
      detail::check_times(ts);
      const auto full = solve_volterra(w, kind, A, a, ts.back(), c.steps);
      tr = full;
      tr.times.clear();
      tr.states.clear();
      if (ts.front() > 0.0) {
        tr.times.push_back(0.0);
        tr.states.push_back(a);
      }
      for (double x : ts) {
        tr.times.push_back(x);
        tr.states.push_back(impl::interpolate(full, x));
      }
      tr.metadata["interpolation"] = "linear";
      break;
    }
  }
  for (const auto& [k, v] : tr.metadata) t.metadata[k] = v;
  t.columns = {"t"};
  for (std::size_t i = 1; i <= a.size(); ++i) t.columns.push_back("u_" + std::to_string(i));
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::vector<double> row = {tr.times[i]};
    row.insert(row.end(), tr.states[i].begin(), tr.states[i].end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table verify_convolution(const RunConfig& c) {
  const auto w = parse_weight(c.weight);
  Table t;
  t.columns = {"t", "k1*k2", "deviation"};
  double worst = 0.0;
  for (double x : parse_grid(c.t, c.spacing)) {
    const double v = convolution_identity_check(w, x);
    worst = std::max(worst, std::abs(v - 1.0));
    t.rows.push_back({x, v, std::abs(v - 1.0)});
  }
  t.passed = worst <= c.tol;
  t.notes.push_back("max |k1*k2 - 1| = " + sci(worst) + (t.passed ? " <= " : " > ") + sci(c.tol));
  return t;
}

inline Table verify_cm(const RunConfig& c) {
  const auto w = parse_weight(c.weight);
  const KernelId id = c.which.empty() ? kernel_for(parse_kind(c.kind)) : (c.which == "k1" ? KernelId::K1 : KernelId::K2);
  const auto grid = parse_grid(c.t, c.spacing);
  const auto rep = cm_check(w, id, grid, c.tol);
  Table t;
  t.columns = {"t", "value"};
  for (double x : grid) t.rows.push_back({x, kernel_eval(w, id, x)});
  t.passed = rep.passed;
  t.metadata["which"] = to_string(id);
  t.notes.push_back("complete monotonicity of " + to_string(id) + " up to order 4 on " + std::to_string(rep.points) +
                    " points: " + rep.message);
  if (id == KernelId::K1 && is_discrete(w))
    t.notes.push_back(std::string("spectral density K(r) > 0 on 10^[-8, 8]: ") + (rep.spectral_positive ? "yes" : "no"));
  return t;
}

inline Table verify_sector(const RunConfig& c) {
  const auto w = parse_weight(c.weight);
  const auto kind = parse_kind(c.kind);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> lr(-3.0, 3.0), ar(-1.0, 1.0);
  std::vector<cplx> samples;
  for (int i = 0; i < 500; ++i) samples.push_back(std::polar(std::pow(10.0, lr(rng)), std::numbers::pi * ar(rng)));
  const auto rep = sector_angle_check(w, kind, samples, sector_exponent(w, kind), c.tol);
  Table t;
  t.columns = {"re_s", "im_s", "abs_arg_g", "bound"};
  for (const auto& s : samples)
    t.rows.push_back({s.real(), s.imag(), std::abs(std::arg(g_eval(w, kind, s))), rep.exponent * std::abs(std::arg(s))});
  t.passed = rep.passed;
  t.metadata["exponent"] = detail::format_number(rep.exponent);
  t.notes.push_back("max(|arg g| - " + detail::format_number(rep.exponent) + " |arg s|) = " + sci(rep.max_excess) +
                    (t.passed ? " <= " : " > ") + sci(c.tol));
  return t;
}

inline Table verify_density(const RunConfig& c) {
  const auto w = parse_weight(c.weight);
  const auto kind = parse_kind(c.kind);
  Table t;
  t.columns = {"t", "mass", "min_phi", "tail_bound", "tau_max"};
  double worst_mass = 0.0, worst_min = 0.0;
  for (double x : parse_grid(c.t, c.spacing)) {
    const auto q = subordination_tau_grid(SubordinationDensity(w, kind, x));
    double lo = 0.0;
    for (double f : q.phi) lo = std::min(lo, f);
    worst_mass = std::max(worst_mass, std::abs(q.mass - 1.0));
    worst_min = std::min(worst_min, lo);
    t.rows.push_back({x, q.mass, lo, q.tail_bound, q.tau_max});
  }
  t.passed = worst_mass <= c.tol && worst_min >= -1e-9;
  t.notes.push_back("max |int phi - 1| = " + sci(worst_mass) + ", min phi = " + sci(worst_min) +
                    (t.passed ? ": pass" : ": FAIL"));
  return t;
}

inline Table verify_postwidder(const RunConfig& c) {
  const auto w = parse_weight(c.weight);
  const auto kind = parse_kind(c.kind);
  const double s = parse_grid(c.s, "linear").front();
  Table t;
  t.columns = {"n", "min_relative_entry", "leibniz_error"};
  double worst_neg = 0.0, worst_leib = 0.0;
  for (int n = 1; n <= c.order; ++n) {
    const auto tab = postwidder_coeffs(w, kind, s, n);
    double acc = 0.0;
    for (const auto& [key, b] : tab.entries) acc += b * std::pow(tab.g, -(key.second + 1.0));
    const double leib = std::abs(acc / std::exp(std::lgamma(n + 1.0) - (n + 1.0) * std::log(s)) - 1.0);
    worst_neg = std::min(worst_neg, tab.min_relative_entry());
    worst_leib = std::max(worst_leib, leib);
    t.rows.push_back({double(n), tab.min_relative_entry(), leib});
  }
  t.passed = worst_neg >= -c.tol && worst_leib <= 1e-9;
  t.notes.push_back("min b/max|b| = " + sci(worst_neg) + " (>= -" + sci(c.tol) + "), max Leibniz error = " +
                    sci(worst_leib) + (t.passed ? ": pass" : ": FAIL"));
  return t;
}

inline Table verify_hille_yosida(const RunConfig& c) {
  const auto A = parse_generator(c.generator);
  const auto grid = parse_grid(c.s, "linear");
  const auto rep = hille_yosida_check(A, grid, c.order, c.tol);
  Table t;
  t.columns = {"s", "n", "norm_times_s_pow_n"};
  const auto ev = eigenvalues(A);
  for (double s : grid) {
    double r1 = 0.0;
    for (double l : ev) r1 = std::max(r1, 1.0 / std::abs(s - l));
    for (int n = 1; n <= c.order; ++n) t.rows.push_back({s, double(n), std::pow(r1 * s, n)});
  }
  t.passed = rep.passed;
  t.notes.push_back("max ||R(s,A)^n|| s^n = " + detail::format_number(rep.max_ratio) + (t.passed ? " <= 1" : " > 1"));
  return t;
}

inline Table run_verify(const RunConfig& c) {
  Table t;
  if (c.suite == "convolution") t = verify_convolution(c);
  else if (c.suite == "cm") t = verify_cm(c);
  else if (c.suite == "sector") t = verify_sector(c);
  else if (c.suite == "density") t = verify_density(c);
  else if (c.suite == "postwidder") t = verify_postwidder(c);
  else t = verify_hille_yosida(c);
  t.metadata["suite"] = c.suite;
  t.metadata["tol"] = detail::format_number(c.tol);
  t.notes.push_back(t.passed ? "PASS" : "FAIL");
  return t;
}

}  // namespace impl

/// Executes the mapped library call. Numerical failures carry the library message verbatim.
inline Table execute(const RunConfig& c) {
  Table t;
  switch (c.command) {
    case Command::Kernel: t = impl::run_kernel(c); break;
    case Command::Density: t = impl::run_density(c); break;
    case Command::Coeffs: t = impl::run_coeffs(c); break;
    case Command::Solve: t = impl::run_solve(c); break;
    case Command::Verify: t = impl::run_verify(c); break;
  }
  t.metadata["command"] = to_string(c.command);
  t.metadata["weight"] = c.weight;
  t.metadata["kind"] = c.kind;
  if (c.command == Command::Solve) {
    t.metadata["method"] = c.method;
    t.metadata["tail_tol"] = detail::format_number(c.tail_tol);
    t.metadata["steps"] = std::to_string(c.steps);
    t.metadata["order"] = std::to_string(c.order);
  }
  return t;
}

inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.dump_config) {
    out << to_json(c).dump(2) << "\n";
    return 0;
  }
  Table t;
  try {
    t = execute(c);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  std::ofstream file;
  std::ostream* sink = &out;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) {
      err << "error: cannot open output file '" << c.output << "'\n";
      return 1;
    }
    sink = &file;
  }
  if (c.format == "json") write_json(t, *sink);
  else write_csv(t, *sink);
  if (c.command == Command::Verify) {
    for (const auto& n : t.notes) err << n << "\n";
    return t.passed ? 0 : 1;
  }
  return 0;
}

/// Full entry point: parse, then run.
inline int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c = parse_args(argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  return run(c, out, err);
}

}  // namespace fracevo::cli
