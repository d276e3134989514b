#include "nlwave/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "nlwave/config.hpp"
#include "nlwave/experiments.hpp"
#include "nlwave/io.hpp"
#include "nlwave/stability.hpp"

namespace nlwave {

namespace {

struct Globals {
  std::string config_path;
  int threads = 1;
  bool strict = false;
  std::string out_dir;
};

struct NeedConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Config require_config(const Globals& g) {
  if (g.config_path.empty()) throw NeedConfig("--config PATH is required for this subcommand");
  return load_config(g.config_path);
}

std::filesystem::path output_dir(const Globals& g, const Config& c) {
  std::filesystem::path dir = g.out_dir.empty() ? c.output.dir : g.out_dir;
  std::filesystem::create_directories(dir);
  return dir;
}

void print_report(std::ostream& os, const std::string& label, const StabilityReport& r) {
  os << label << ": lhs=" << format_double(r.lhs) << " rhs=" << format_double(r.rhs)
     << " margin=" << format_double(r.margin) << " satisfied=" << (r.satisfied ? "yes" : "no");
  if (r.r_sq > 0.0) os << " R2=" << format_double(r.r_sq);
  if (r.has_corollary) os << " corollary_lhs=" << format_double(r.corollary_lhs);
  if (!r.note.empty()) os << " (" << r.note << ")";
  os << '\n';
}

/// Returns true when the run may proceed.
bool gate(const Globals& g, const std::string& label, const StabilityReport& r) {
  if (r.satisfied) return true;
  std::cerr << "warning: necessary stability condition violated\n";
  print_report(std::cerr, label, r);
  return !g.strict;
}

void write_config_echo(const std::filesystem::path& dir, const Config& c) {
  std::ofstream out(dir / "effective_config.json");
  out << config_to_json(c);
}

int cmd_check(const Globals& g) {
  const Config c = require_config(g);
  const StabilityReport cart = check_cartesian(c.medium, c.grid, c.time.dt);
  print_report(std::cout, "cartesian", cart);
  const StabilityReport rad = check_radial(c.medium, c.radial.dr, c.time.dt);
  print_report(std::cout, "radial", rad);
  return cart.satisfied ? kExitOk : kExitStability;
}

int cmd_simulate(const Globals& g) {
  const Config c = require_config(g);
  if (!gate(g, "cartesian", check_cartesian(c.medium, c.grid, c.time.dt))) return kExitStability;
  const auto dir = output_dir(g, c);
  write_config_echo(dir, c);
  const SimulationResult run = run_simulation(c.run_config(g.threads));
  write_series_csv(run.rows, (dir / "series.csv").string());
  write_site_csv(run, (dir / "site.csv").string());
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const auto name = "snapshot_" + std::to_string(i) + ".nlw3";
    write_snapshot((dir / name).string(), run.snapshots[i].level, c.grid, run.snapshots[i].t);
  }
  std::cout << "steps=" << run.steps << " site_integral=" << format_double(run.site.integral)
            << " max_rate_residual=" << format_double(run.max_rate_residual)
            << " wall_s=" << format_double(run.wall_seconds) << " threads=" << g.threads << '\n';
  return kExitOk;
}

int cmd_sweep(const Globals& g) {
  const Config c = require_config(g);
  if (!gate(g, "cartesian", check_cartesian(c.medium, c.grid, c.time.dt))) return kExitStability;
  const auto dir = output_dir(g, c);
  write_config_echo(dir, c);
  const SweepResult res = supra_sweep(c.sweep_spec(g.threads));
  write_sweep_csv(res, (dir / "sweep.csv").string());
  for (const SweepRow& r : res.rows) {
    std::cout << "A=" << format_double(r.amplitude) << " E=" << format_double(r.integral) << ' '
              << r.status << '\n';
  }
  std::cout << "largest_ratio=" << format_double(res.jump.largest_ratio)
            << " location=" << res.jump.location << " jumps=" << res.jump.count_above << '\n';
  return kExitOk;
}

int cmd_scan(const Globals& g) {
  const Config c = require_config(g);
  if (!gate(g, "radial", check_radial(c.medium, c.radial.dr, c.time.dt))) return kExitStability;
  const auto dir = output_dir(g, c);
  write_config_echo(dir, c);
  const ScanResult res = radial_scan(c.scan_spec(g.threads));
  write_scan_csv(res, (dir / "scan.csv").string());
  for (const SmoothnessReport& s : res.smoothness) {
    std::cout << "omega=" << format_double(s.omega)
              << " max_normalized_ratio=" << format_double(s.max_normalized_ratio)
              << " max_raw_ratio=" << format_double(s.max_raw_ratio)
              << " monotone=" << (s.monotone ? "yes" : "no")
              << " smooth=" << (s.smooth ? "yes" : "no") << '\n';
  }
  return kExitOk;
}

int cmd_transmit(const Globals& g) {
  const Config c = require_config(g);
  if (!gate(g, "cartesian", check_cartesian(c.medium, c.grid, c.time.dt))) return kExitStability;
  const auto dir = output_dir(g, c);
  write_config_echo(dir, c);
  const BitsResult res = transmit_bits(c.bit_spec(g.threads));
  write_site_csv(res.run, (dir / "site.csv").string());
  write_peaks_csv(res.peaks, (dir / "peaks.csv").string());
  std::cout << "peaks=" << res.peaks.times.size();
  for (double t : res.peaks.times) std::cout << ' ' << format_double(t);
  std::cout << '\n';
  return kExitOk;
}

int cmd_snapshot_dump(const Globals& g, const std::string& file, std::optional<int> index) {
  const SnapshotData snap = read_snapshot(file);
  const int plane = index.value_or(snap.level.side() / 2);
  const CsvTable slice = snapshot_slice(snap, plane);
  if (g.out_dir.empty()) {
    std::cout << "n,p,u\n";
    for (const auto& row : slice.rows) std::cout << row[0] << ',' << row[1] << ',' << row[2] << '\n';
  } else {
    std::filesystem::create_directories(g.out_dir);
    write_csv((std::filesystem::path(g.out_dir) / "slice.csv").string(), slice);
  }
  return kExitOk;
}

}  // namespace

int cli_dispatch(int argc, char** argv) {
  Globals g;
  CLI::App app{"Dissipative nonlinear wave simulations"};
  app.name("nlwave");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--strict", g.strict, "refuse to run when a stability condition is violated");
  app.add_option("--out", g.out_dir, "output directory");

  auto* check = app.add_subcommand("check", "report the necessary stability conditions");
  auto* simulate = app.add_subcommand("simulate", "run one Cartesian simulation");
  auto* sweep = app.add_subcommand("sweep", "supratransmission amplitude sweep");
  auto* scan = app.add_subcommand("scan-radial", "radial (omega, A) energy scan");
  auto* transmit = app.add_subcommand("transmit", "bit-sequence transmission");
  auto* dump = app.add_subcommand("snapshot-dump", "print a plane of a snapshot as CSV");
  std::string snap_file;
  std::optional<int> snap_index;
  dump->add_option("file", snap_file, "snapshot file")->required();
  dump->add_option("--index", snap_index, "plane index m (default: middle)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfig;
  }

  try {
    if (check->parsed()) return cmd_check(g);
    if (simulate->parsed()) return cmd_simulate(g);
    if (sweep->parsed()) return cmd_sweep(g);
    if (scan->parsed()) return cmd_scan(g);
    if (transmit->parsed()) return cmd_transmit(g);
    if (dump->parsed()) return cmd_snapshot_dump(g, snap_file, snap_index);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const NeedConfig& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

int cli_dispatch(const std::vector<std::string>& args) {
  std::vector<std::string> copy = args;
  std::vector<char*> argv;
  for (auto& a : copy) argv.push_back(a.data());
  argv.push_back(nullptr);
  return cli_dispatch(static_cast<int>(copy.size()), argv.data());
}

}  // namespace nlwave
