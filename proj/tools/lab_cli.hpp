#pragma once

// Command-line front end for the Burgers norm-inflation laboratory.
//
//   burgers_lab <command> [--key value ...] [--config file]
//
// Exit codes: 0 all checks passed, 1 a mathematical check failed,
// 2 usage or configuration error, 3 numerical convergence failure.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "burgers_ip/burgers_ip.hpp"

namespace burgers::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsageError = 2,
  kNumericalError = 3,
};

inline constexpr const char* kWorkersEnv = "BURGERS_LAB_WORKERS";

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"norms",    "evolve",
                                                 "validate", "gronwall",
                                                 "inflate",  "sweep"};
  return names;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by parse_args for --help; carries the formatted help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time given either absolutely or as a multiple of T* ("0.5tstar").
struct TimeSpec {
  double value = 0.0;
  bool relative_to_tstar = false;

  double resolve(double tstar) const {
    return relative_to_tstar ? value * tstar : value;
  }
};

inline TimeSpec parse_time(const std::string& text) {
  std::string body = text;
  TimeSpec spec;
  const std::string suffix = "tstar";
  if (body.size() >= suffix.size() &&
      body.compare(body.size() - suffix.size(), suffix.size(), suffix) == 0) {
    body.resize(body.size() - suffix.size());
    spec.relative_to_tstar = true;
    if (body.empty()) body = "1";
  }
  try {
    std::size_t used = 0;
    spec.value = std::stod(body, &used);
    if (used != body.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw UsageError("cannot parse time '" + text + "'");
  }
  return spec;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) {
      items.push_back(item.substr(first, last - first + 1));
    }
  }
  return items;
}

inline std::vector<double> parse_doubles(const std::string& text,
                                         const std::string& what) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse " + what + " value '" + item + "'");
    }
  }
  return values;
}

struct RunConfig {
  std::string command;
  double p0 = 1.0;
  double q0 = 0.5;
  double s = 1.0;
  double delta = 0.1;
  std::vector<TimeSpec> times;
  // evolve grid
  double x_min = -5.0;
  double x_max = 5.0;
  int nx = 101;
  // oracle grid
  double half_width = 10.0;
  std::vector<int> cells = {4096};
  double cfl = 0.9;
  double l1_threshold = 1e-2;
  // gronwall
  int k_max = 20;
  // sweep
  std::string sweep_target = "inflate";
  std::vector<double> deltas = {0.1, 0.05};
  std::vector<double> q0_list = {0.5, 0.1, 0.02};
  std::vector<double> s_list = {1.0, 1.25, 1.4};
  int workers = 1;
  QuadratureSpec quad;
  std::string out_path;
  std::uint64_t seed = 12345;
  int samples = 0;

  std::string output_file() const {
    if (!out_path.empty()) return out_path;
    if (command == "sweep") return "sweep_" + sweep_target + ".csv";
    return command + ".csv";
  }
};

/// Reads `key = value` lines; `#` starts a comment.
inline std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(number) +
                       ": expected key = value");
    }
    auto trim = [](std::string v) {
      const auto a = v.find_first_not_of(" \t\r");
      const auto b = v.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw UsageError(path + ":" + std::to_string(number) + ": empty key");
    }
    entries.emplace_back(key, value);
  }
  return entries;
}

/// Parses flags, merging a config file underneath them (flags win).
inline RunConfig parse_args(const std::vector<std::string>& argv) {
  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1),
                                argv.end());
  // Locate --config before the real parse.
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  std::vector<std::string> merged;
  std::optional<std::string> config_command;
  if (config_path) {
    for (const auto& [key, value] : read_config_file(*config_path)) {
      if (key == "command") {
        config_command = value;
      } else {
        merged.push_back("--" + key + "=" + value);
      }
    }
  }
  const bool has_command =
      !args.empty() && std::find(commands().begin(), commands().end(),
                                 args.front()) != commands().end();
  if (!has_command && config_command) merged.insert(merged.begin(), *config_command);
  if (has_command) {
    merged.insert(merged.begin(), args.front());
    merged.insert(merged.end(), args.begin() + 1, args.end());
  } else {
    merged.insert(merged.end(), args.begin(), args.end());
  }

  RunConfig cfg;
  std::string t_list;
  std::string cells_list;
  std::string deltas_list;
  std::string q0_list;
  std::string s_list;
  std::string config_unused;
  CLI::App app{"Burgers norm-inflation laboratory", "burgers_lab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("command", cfg.command, "norms|evolve|validate|gronwall|inflate|sweep")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--config", config_unused, "flat key = value file");
  app.add_option("--p0", cfg.p0, "amplitude");
  app.add_option("--q0", cfg.q0, "half-separation in (0, 1)");
  app.add_option("--s", cfg.s, "Sobolev index");
  app.add_option("--delta", cfg.delta, "inflation target");
  app.add_option("--t", t_list, "times, comma separated; suffix tstar for multiples of T*");
  app.add_option("--xmin", cfg.x_min);
  app.add_option("--xmax", cfg.x_max);
  app.add_option("--nx", cfg.nx);
  app.add_option("--L", cfg.half_width, "oracle domain half-width");
  app.add_option("--cells", cells_list, "oracle cell counts, comma separated");
  app.add_option("--cfl", cfg.cfl);
  app.add_option("--l1-threshold", cfg.l1_threshold);
  app.add_option("--kmax", cfg.k_max, "gronwall grid t_k = T*(1 - 2^-k), k = 0..kmax");
  app.add_option("--target", cfg.sweep_target, "sweep target: inflate|norms")
      ->check(CLI::IsMember({"inflate", "norms"}));
  app.add_option("--deltas", deltas_list);
  app.add_option("--q0-list", q0_list);
  app.add_option("--s-list", s_list);
  app.add_option("--workers", cfg.workers);
  app.add_option("--rel-tol", cfg.quad.rel_tol);
  app.add_option("--abs-tol", cfg.quad.abs_tol);
  app.add_option("--max-depth", cfg.quad.max_depth);
  app.add_option("--out", cfg.out_path, "CSV output path");
  app.add_option("--seed", cfg.seed);
  app.add_option("--samples", cfg.samples, "randomized flow checks (evolve)");

  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      cfg.workers = std::stoi(env);
    } catch (const std::exception&) {
      throw UsageError(std::string(kWorkersEnv) + " is not an integer");
    }
  }

  std::vector<std::string> reversed(merged.rbegin(), merged.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (!t_list.empty()) {
    for (const auto& item : split_list(t_list)) cfg.times.push_back(parse_time(item));
  }
  if (!cells_list.empty()) {
    cfg.cells.clear();
    for (double c : parse_doubles(cells_list, "cells")) {
      if (c < 16 || c != std::floor(c)) throw UsageError("cells must be integers >= 16");
      cfg.cells.push_back(static_cast<int>(c));
    }
  }
  if (!deltas_list.empty()) cfg.deltas = parse_doubles(deltas_list, "delta");
  if (!q0_list.empty()) cfg.q0_list = parse_doubles(q0_list, "q0");
  if (!s_list.empty()) cfg.s_list = parse_doubles(s_list, "s");
  if (cfg.workers < 1) throw UsageError("workers must be >= 1");
  if (cfg.nx < 2) throw UsageError("nx must be >= 2");
  if (!(cfg.x_max > cfg.x_min)) throw UsageError("xmax must exceed xmin");
  if (!(cfg.l1_threshold > 0.0)) throw UsageError("l1-threshold must be positive");
  if (cfg.k_max < 0) throw UsageError("kmax must be >= 0");
  if (cfg.samples < 0) throw UsageError("samples must be >= 0");
  try {
    cfg.quad.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

/// Shortest round-trip decimal representation.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const auto& c : cells) {
    if (!row.empty()) row += ',';
    row += c;
  }
  return row + '\n';
}

namespace headers {
inline constexpr const char* kNorms =
    "p0,q0,s,hs_norm,lower_bracket,upper_bracket,tail_bound,pass\n";
inline constexpr const char* kEvolve = "t,x,u,ux_left,ux_right\n";
inline constexpr const char* kGronwall = "t,A,bound,margin\n";
inline constexpr const char* kInflate =
    "delta,s,p0,q0,c1,c2,hs0,tstar,t0,h1_t0,pass\n";
inline constexpr const char* kValidate = "t,cells,l1_error,linf_error,order_est\n";
}  // namespace headers

struct CommandResult {
  std::string csv;
  std::string summary;
  bool passed = true;
};

inline CommandResult run_norms_for(double p0, double q0, double s,
                                   const QuadratureSpec& quad) {
  const PeakonPair data(p0, q0);
  const SobolevIndex index(s);
  const auto r = hs_norm_u0(data, index, quad);
  const auto bracket = norm_bracket(index);
  const double scale = p0 * std::pow(q0, 1.5 - s);
  const double lower = std::sqrt(bracket.lower) * scale;
  const double upper = std::sqrt(bracket.upper) * scale;
  const bool pass = r.value >= lower && r.value <= upper;
  CommandResult out;
  out.passed = pass;
  out.csv = csv_row({num(p0), num(q0), num(s), num(r.value), num(lower),
                     num(upper), num(r.tail_bound), pass ? "1" : "0"});
  std::ostringstream sum;
  sum << "norms p0=" << num(p0) << " q0=" << num(q0) << " s=" << num(s)
      << " hs_norm=" << num(r.value) << " bracket=[" << num(lower) << ", "
      << num(upper) << "] error_estimate=" << num(r.error_estimate)
      << " tail_bound=" << num(r.tail_bound) << " cutoff=" << num(r.cutoff)
      << " pass=" << pass << '\n';
  out.summary = sum.str();
  return out;
}

inline std::string report_record(const InflationReport& r) {
  std::ostringstream o;
  o << "delta = " << num(r.delta) << '\n'
    << "s = " << num(r.s) << '\n'
    << "p0 = " << num(r.p0) << '\n'
    << "q0 = " << num(r.q0) << '\n'
    << "c1 = " << num(r.c1_emp) << '\n'
    << "c2 = " << num(r.c2_emp) << '\n'
    << "hs_norm_initial = " << num(r.hs_norm_initial) << '\n'
    << "hs_norm_initial_upper = " << num(r.hs_norm_initial_upper) << '\n'
    << "tstar = " << num(r.tstar) << '\n'
    << "t0 = " << num(r.t0) << '\n'
    << "h1_at_t0 = " << num(r.h1_at_t0) << '\n'
    << "h1_at_t0_lower = " << num(r.h1_at_t0_lower) << '\n'
    << "scan_points = " << r.scan.size() << '\n';
  for (const auto& c : r.checks) {
    o << "check." << c.name << " = " << (c.passed ? "pass" : "fail")
      << " margin " << num(c.margin) << '\n';
  }
  o << "certified_norm = H1" << (r.hs_gap() ? " (H^s for s>1 rests on the H^s >= C H^1 embedding, not computed)" : "")
    << '\n'
    << "pass = " << (r.passed() ? 1 : 0) << '\n';
  return o.str();
}

inline CommandResult run_inflate_for(double delta, double s,
                                     const QuadratureSpec& quad) {
  const auto r = assess_inflation(delta, SobolevIndex(s), quad);
  CommandResult out;
  out.passed = r.passed() && reverify(r);
  out.csv = csv_row({num(r.delta), num(r.s), num(r.p0), num(r.q0),
                     num(r.c1_emp), num(r.c2_emp), num(r.hs_norm_initial),
                     num(r.tstar), num(r.t0), num(r.h1_at_t0),
                     out.passed ? "1" : "0"});
  out.summary = report_record(r);
  return out;
}

inline CommandResult run_evolve(const RunConfig& cfg) {
  const CharacteristicSolution sol(PeakonPair(cfg.p0, cfg.q0));
  std::vector<TimeSpec> times = cfg.times;
  if (times.empty()) times = {{0.0, false}, {0.5, true}, {0.9, true}};
  std::vector<double> grid(cfg.nx);
  for (int i = 0; i < cfg.nx; ++i) {
    grid[i] = cfg.x_min + (cfg.x_max - cfg.x_min) * i / (cfg.nx - 1);
  }
  CommandResult out;
  std::ostringstream summary;
  for (const auto& ts : times) {
    const double t = ts.resolve(sol.tstar());
    const auto values = sol.sample_profile(t, grid);
    for (int i = 0; i < cfg.nx; ++i) {
      out.csv += csv_row({num(t), num(grid[i]), num(values[i]),
                          num(sol.u_x(t, grid[i], Side::kLeft)),
                          num(sol.u_x(t, grid[i], Side::kRight))});
    }
    summary << "evolve t=" << num(t) << " tstar=" << num(sol.tstar())
            << " lipschitz=" << num(sol.lipschitz_norm(t)) << '\n';
  }
  if (cfg.samples > 0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < cfg.samples; ++i) {
      const double t = 0.99 * sol.tstar() * unit(rng);
      const double x = -10.0 + 20.0 * unit(rng);
      const double y = sol.psi(t, x);
      worst = std::max({worst, std::fabs(sol.psi(t, sol.psi_inv(t, y)) - y),
                        std::fabs(sol.u(t, y) - sol.data().u0(x)),
                        std::fabs(sol.u(t, -y) + sol.u(t, y))});
    }
    out.passed = worst <= 1e-10;
    summary << "evolve samples=" << cfg.samples << " seed=" << cfg.seed
            << " worst_residual=" << num(worst) << " pass=" << out.passed
            << '\n';
  }
  out.summary = summary.str();
  return out;
}

inline CommandResult run_validate(const RunConfig& cfg) {
  const PeakonPair data(cfg.p0, cfg.q0);
  const CharacteristicSolution sol(data);
  const double t = cfg.times.empty() ? 0.5 * sol.tstar()
                                     : cfg.times.front().resolve(sol.tstar());
  auto error_at = [&](int cells) {
    auto state = fv_init(data, cfg.half_width, static_cast<std::size_t>(cells), cfg.cfl);
    state = fv_solve_to(std::move(state), t);
    return compare_with_exact(state, sol);
  };
  CommandResult out;
  std::ostringstream summary;
  for (int cells : cfg.cells) {
    const auto fine = error_at(cells);
    const auto coarse = error_at(cells / 2);
    const double order = std::log2(coarse.l1_error / fine.l1_error);
    const bool ok = fine.relative_l1() <= cfg.l1_threshold;
    out.passed = out.passed && ok;
    out.csv += csv_row({num(t), std::to_string(cells), num(fine.l1_error),
                        num(fine.linf_error), num(order)});
    summary << "validate t=" << num(t) << " cells=" << cells
            << " relative_l1=" << num(fine.relative_l1())
            << " threshold=" << num(cfg.l1_threshold) << " order_est="
            << num(order) << " pass=" << ok << '\n';
  }
  out.summary = summary.str();
  return out;
}

inline CommandResult run_gronwall(const RunConfig& cfg) {
  const CharacteristicSolution sol(PeakonPair(cfg.p0, cfg.q0));
  std::vector<double> times;
  if (cfg.times.empty()) {
    for (int k = 0; k <= cfg.k_max; ++k) {
      times.push_back(k == 0 ? 0.0 : sol.tstar() * (1.0 - std::ldexp(1.0, -k)));
    }
  } else {
    for (const auto& ts : cfg.times) times.push_back(ts.resolve(sol.tstar()));
  }
  const auto rows = check_gronwall(sol, times, cfg.quad);
  const double a0 = sol.data().a0();
  CommandResult out;
  double worst_margin = 0.0;
  double worst_identity = 0.0;
  for (const auto& row : rows) {
    out.csv += csv_row({num(row.t), num(row.a), num(row.bound), num(row.margin)});
    worst_margin = std::min(worst_margin, row.margin);
    worst_identity = std::max(worst_identity, row.identity_error);
  }
  out.passed = worst_margin >= -1e-8 * a0 && worst_identity <= 1e-8;
  std::ostringstream summary;
  summary << "gronwall points=" << rows.size() << " A0=" << num(a0)
          << " min_margin=" << num(worst_margin)
          << " max_identity_error=" << num(worst_identity)
          << " pass=" << out.passed << '\n';
  out.summary = summary.str();
  return out;
}

inline CommandResult run_sweep(const RunConfig& cfg) {
  struct Task {
    std::vector<double> key;
    std::function<CommandResult()> work;
  };
  std::vector<Task> tasks;
  if (cfg.sweep_target == "inflate") {
    for (double delta : cfg.deltas) {
      tasks.push_back({{delta, cfg.s}, [delta, &cfg] {
                         return run_inflate_for(delta, cfg.s, cfg.quad);
                       }});
    }
  } else {
    for (double s : cfg.s_list) {
      for (double q0 : cfg.q0_list) {
        tasks.push_back({{s, q0}, [s, q0, &cfg] {
                           return run_norms_for(cfg.p0, q0, s, cfg.quad);
                         }});
      }
    }
  }
  std::sort(tasks.begin(), tasks.end(),
            [](const Task& a, const Task& b) { return a.key < b.key; });
  std::vector<CommandResult> results(tasks.size());
  // Static round-robin partition; each worker writes only its own slots.
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::future<void>> pending;
  for (std::size_t w = 0; w < workers; ++w) {
    pending.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < tasks.size(); i += workers) {
        results[i] = tasks[i].work();
      }
    }));
  }
  for (auto& p : pending) p.get();
  CommandResult out;
  for (const auto& r : results) {
    out.csv += r.csv;
    out.summary += r.summary;
    out.passed = out.passed && r.passed;
  }
  return out;
}

inline const char* header_for(const RunConfig& cfg) {
  if (cfg.command == "norms") return headers::kNorms;
  if (cfg.command == "evolve") return headers::kEvolve;
  if (cfg.command == "validate") return headers::kValidate;
  if (cfg.command == "gronwall") return headers::kGronwall;
  if (cfg.command == "inflate") return headers::kInflate;
  return cfg.sweep_target == "inflate" ? headers::kInflate : headers::kNorms;
}

inline void write_error(std::ostream& err, const char* kind, int code,
                        const std::string& message) {
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') escaped += '\\';
    escaped += c == '\n' ? ' ' : c;
  }
  err << "error kind=" << kind << " exit=" << code << " message=\"" << escaped
      << "\"\n";
}

/// Executes one configured command, writing CSV to cfg.output_file() and the
/// summary to `out`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    CommandResult result;
    if (cfg.command == "norms") {
      result = run_norms_for(cfg.p0, cfg.q0, cfg.s, cfg.quad);
    } else if (cfg.command == "evolve") {
      result = run_evolve(cfg);
    } else if (cfg.command == "validate") {
      result = run_validate(cfg);
    } else if (cfg.command == "gronwall") {
      result = run_gronwall(cfg);
    } else if (cfg.command == "inflate") {
      result = run_inflate_for(cfg.delta, cfg.s, cfg.quad);
    } else if (cfg.command == "sweep") {
      result = run_sweep(cfg);
    } else {
      throw UsageError("unknown command '" + cfg.command + "'");
    }
    const std::string path = cfg.output_file();
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot write '" + path + "'");
    file << header_for(cfg) << result.csv;
    out << result.summary << "csv = " << path << '\n';
    if (!result.passed) {
      write_error(err, "check_failed", kCheckFailed,
                  cfg.command + ": a verification check failed (see margins)");
      return kCheckFailed;
    }
    return kOk;
  } catch (const UsageError& e) {
    write_error(err, "usage", kUsageError, e.what());
    return kUsageError;
  } catch (const DegenerateParameterError& e) {
    write_error(err, "degenerate_parameters", kUsageError, e.what());
    return kUsageError;
  } catch (const DomainError& e) {
    write_error(err, "domain", kUsageError, e.what());
    return kUsageError;
  } catch (const ConvergenceError& e) {
    write_error(err, "convergence", kNumericalError, e.what());
    return kNumericalError;
  }
}

inline int main_entry(const std::vector<std::string>& argv, std::ostream& out,
                      std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(argv);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kOk;
  } catch (const UsageError& e) {
    write_error(err, "usage", kUsageError, e.what());
    return kUsageError;
  }
  return run(cfg, out, err);
}

}  // namespace burgers::cli
