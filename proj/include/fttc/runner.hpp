#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fttc/function_train.hpp"
#include "fttc/hamiltonian.hpp"
#include "fttc/observables.hpp"
#include "fttc/propagators.hpp"
#include "fttc/tensor_train.hpp"

namespace fttc {

enum class ModelKind { dna, harmonic };
enum class StateFormat { tt, ft };
enum class RunScheme { chebyshev_recurrence, chebyshev_clenshaw, soft };

/// Everything a run, sweep or comparison needs. Per-coordinate lists hold
/// either one value (broadcast) or `dim` values.
struct RunConfig {
  ModelKind model = ModelKind::dna;
  double alpha_scale = 0.1;
  double beta = -2.0;
  double omega = 1.0;
  std::size_t dim = 50;

  std::vector<double> x_min{-5.0};
  std::vector<double> x_max{5.0};
  std::vector<std::size_t> n{32};
  std::size_t degree = 32;
  StateFormat format = StateFormat::tt;
  double mass = 1.0;

  double width = 1.0;
  std::vector<double> x0{1.0};
  std::vector<double> p0{0.0};

  RunScheme scheme = RunScheme::chebyshev_recurrence;
  double t_final = 1.0;
  double tau = 0.01;
  std::size_t n_terms = 50;
  bool auto_trim = false;
  double dt = 0.001;
  double round_tol = kDefaultRoundTol;
  std::size_t rmax = kDefaultMaxRank;

  std::string out_dir = "out";
  std::vector<double> slice_times;
  std::size_t slice_p = 0;
  std::size_t slice_q = 1;
  bool slice_reduced = false;
  /// Write a state checkpoint every k checkpoints; 0 writes only the final state.
  std::size_t checkpoint_every = 0;
  std::string resume_from;
  double resume_time = 0.0;

  std::vector<std::size_t> n_list{50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
  std::vector<double> t_list{1.0, 6.0};
  std::vector<double> dt_list{1.0};

  bool operator==(const RunConfig&) const = default;

  /// Throws Error(config) naming the offending key.
  void validate() const;
  HamiltonianSpec hamiltonian() const;
  GridSpec grid() const;
  std::vector<Basis> bases() const;
  GaussianParams gaussian() const;
  /// Number of checkpoint intervals between 0 and t_final.
  std::size_t checkpoints() const;
};

/// Flat `key = value` text, `#` comments, comma-separated lists.
/// Throws Error(config) on unknown keys, malformed values or invalid settings.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
/// Text that parse_config maps back to `c`.
std::string print_config(const RunConfig& c);
/// The default configuration with one comment line per key.
std::string default_config_text();

struct RunOptions {
  /// Overrides RunConfig::out_dir when non-empty.
  std::string out_dir;
  /// Concurrent sweep points; 1 is sequential.
  std::size_t jobs = 1;
  /// Progress lines on stderr.
  bool verbose = false;
};

struct SurvivalRow {
  double t = 0.0;
  cplx s;
  double norm = 0.0;
  std::size_t max_rank = 0;
};

struct SimulationResult {
  std::vector<SurvivalRow> rows;
  std::size_t max_rank = 0;
  double max_norm_drift = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
  /// Paths written, relative to the output directory.
  std::vector<std::string> files;
};

/// Propagates checkpoint to checkpoint and writes survival.csv, slice CSVs,
/// state checkpoints and run_report.json. Throws Error(divergence) when the
/// norm drifts by more than 0.5; the partial CSV and the report are kept.
SimulationResult run_simulation(const RunConfig& c, const RunOptions& opts = {});

struct ConvergencePoint {
  double t_final = 0.0;
  std::size_t n_terms = 0;
  double l2_error = 0.0;
};

/// One Chebyshev step of length t per (t, N) in t_list x n_list, scored against
/// the analytic coherent state. Writes converge.csv. Harmonic model only.
std::vector<ConvergencePoint> run_convergence_study(const RunConfig& c,
                                                    const RunOptions& opts = {});

struct SoftComparisonPoint {
  double dt = 0.0;
  double err_ttc = 0.0;
  double err_soft = 0.0;
  double acorr_err_ttc = 0.0;
  double acorr_err_soft = 0.0;
};

/// For each dt in dt_list, t_final/dt Chebyshev steps and t_final/dt split
/// operator steps, scored by L2 and relative survival-amplitude error against
/// the analytic coherent state. Writes soft_compare.csv. Harmonic TT only.
std::vector<SoftComparisonPoint> run_soft_comparison(const RunConfig& c,
                                                     const RunOptions& opts = {});

/// Writes k, J_k(x) for k < n as CSV to `path`.
void write_bessel_csv(double x, std::size_t n, const std::string& path);

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

}  // namespace fttc
