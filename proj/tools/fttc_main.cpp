// Command-line front end. Talks to the library only through fttc.h.

#include <charconv>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fttc/fttc.h"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::size_t jobs = 1;
  bool single_thread = false;
  bool quiet = false;
  std::vector<std::string> overrides;
};

int exit_code(fttc_status s) {
  switch (s) {
    case FTTC_OK: return 0;
    case FTTC_ERR_CONFIG:
    case FTTC_ERR_INVALID_ARGUMENT: return 2;
    case FTTC_ERR_DIVERGENCE:
    case FTTC_ERR_NUMERICAL: return 3;
    case FTTC_ERR_IO: return 4;
    default: return 1;
  }
}

int fail(fttc_status s) {
  std::cerr << "fttc: " << fttc_last_error() << "\n";
  return exit_code(s);
}

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

/// Loads --config and applies every --set key=value.
fttc_status load(const Common& c, fttc_config** cfg) {
  fttc_status s = fttc_config_load(c.config.c_str(), cfg);
  if (s != FTTC_OK) return s;
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "fttc: --set expects key=value, got '" << kv << "'\n";
      return FTTC_ERR_CONFIG;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(' ');
      const auto b = s.find_last_not_of(' ');
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    s = fttc_config_set(*cfg, trim(kv.substr(0, eq)).c_str(), trim(kv.substr(eq + 1)).c_str());
    if (s != FTTC_OK) return s;
  }
  return FTTC_OK;
}

fttc_options options(const Common& c) {
  fttc_options o{};
  o.out_dir = c.out.empty() ? nullptr : c.out.c_str();
  o.jobs = c.single_thread ? 1 : c.jobs;
  o.verbose = c.quiet ? 0 : 1;
  return o;
}

using Command = fttc_status (*)(const fttc_config*, const fttc_options*, fttc_result**);

int run_command(const Common& c, Command cmd, const char* what) {
  if (c.single_thread) fttc_set_threads(1);
  fttc_config* cfg = nullptr;
  fttc_status s = load(c, &cfg);
  if (s != FTTC_OK) {
    fttc_config_free(cfg);
    return fail(s);
  }
  const fttc_options o = options(c);
  fttc_result* res = nullptr;
  s = cmd(cfg, &o, &res);
  fttc_config_free(cfg);
  if (s != FTTC_OK) return fail(s);
  for (std::size_t i = 0; i < fttc_result_warning_count(res); ++i) {
    std::cerr << "warning: " << fttc_result_warning(res, i) << "\n";
  }
  std::cout << what << ": " << fttc_result_rows(res) << " rows";
  if (std::string(what) == "run") {
    std::cout << ", max rank " << fttc_result_max_rank(res) << ", max norm drift "
              << num(fttc_result_max_norm_drift(res)) << ", " << num(fttc_result_wall_seconds(res))
              << " s";
  }
  std::cout << "\n";
  fttc_result_free(res);
  return 0;
}

int print_defaults() {
  char* text = nullptr;
  const fttc_status s = fttc_config_defaults(&text);
  if (s != FTTC_OK) return fail(s);
  std::cout << text;
  fttc_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chebyshev wavepacket propagation on tensor trains and function trains"};
  app.require_subcommand(0, 1);
  Common common;
  bool defaults_flag = false;
  app.add_flag("--print-defaults", defaults_flag, "Print the default configuration and exit");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "Output directory (overrides out_dir)");
    sub->add_option("--jobs", common.jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
    sub->add_flag("--single-thread", common.single_thread, "Sequential sweeps, one BLAS thread");
    sub->add_option("--set", common.overrides, "Override one key: key=value (repeatable)");
    sub->add_flag("--quiet", common.quiet, "No progress lines");
  };
  CLI::App* run = app.add_subcommand("run", "Propagate and write survival, slices and checkpoints");
  add_common(run);
  CLI::App* converge = app.add_subcommand("converge", "Error against the analytic state vs number of terms");
  add_common(converge);
  CLI::App* soft = app.add_subcommand("soft-compare", "Chebyshev vs split-operator error over a dt ladder");
  add_common(soft);

  CLI::App* bessel = app.add_subcommand("bessel", "Print J_0(x)..J_{n-1}(x) as CSV");
  double bx = 1.0;
  std::size_t bn = 20;
  std::string bout;
  bessel->add_option("--x", bx, "Argument")->required();
  bessel->add_option("--n", bn, "Number of orders")->check(CLI::PositiveNumber);
  bessel->add_option("--out", bout, "Write to this file instead of stdout");

  app.add_subcommand("print-defaults", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (defaults_flag || app.got_subcommand("print-defaults")) return print_defaults();
  if (app.got_subcommand(run)) return run_command(common, fttc_run, "run");
  if (app.got_subcommand(converge)) return run_command(common, fttc_converge, "converge");
  if (app.got_subcommand(soft)) return run_command(common, fttc_soft_compare, "soft-compare");
  if (app.got_subcommand(bessel)) {
    if (!bout.empty()) {
      const fttc_status s = fttc_bessel_csv(bx, bn, bout.c_str());
      return s == FTTC_OK ? 0 : fail(s);
    }
    std::vector<double> v(bn);
    const fttc_status s = fttc_bessel(bx, bn, v.data());
    if (s != FTTC_OK) return fail(s);
    std::cout << "k,J_k\n";
    for (std::size_t k = 0; k < bn; ++k) std::cout << k << ',' << num(v[k]) << '\n';
    return 0;
  }
  std::cout << app.help();
  return 2;
}
