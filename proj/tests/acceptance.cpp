// Acceptance suite. Prints one PASS/FAIL line per criterion plus indented
// detail lines, copies them to DIR/acceptance_report.txt and exits nonzero
// when any criterion fails.
//
//   acceptance [--only 1,2,...] [--out DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bessel_oracle.hpp"
#include "fttc/bessel.hpp"
#include "fttc/dense_reference.hpp"
#include "fttc/error.hpp"
#include "fttc/function_train.hpp"
#include "fttc/observables.hpp"
#include "fttc/propagators.hpp"
#include "fttc/quadrature.hpp"
#include "fttc/runner.hpp"
#include "test_util.hpp"

using namespace fttc;
using fttc::testing::dense_diff;
using fttc::testing::dense_norm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string out_root = "acceptance_out";

// Norm deviations of converged runs, gathered for criterion 5.
struct NormRecord {
  std::string run;
  double worst = 0.0;
};
std::vector<NormRecord> norm_records;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double grid_l2(const std::vector<cplx>& a, const std::vector<cplx>& b, const GridSpec& g) {
  return dense_diff(a, b) * std::sqrt(g.volume_element());
}

RunConfig load(const std::string& name) {
  return load_config(std::string(FTTC_SOURCE_DIR) + "/configs/" + name);
}

// ---- 1: oracle equivalence ------------------------------------------------

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  struct Sys {
    const char* name;
    HamiltonianSpec spec;
  };
  const std::vector<Sys> systems{{"harmonic", {1.0, HarmonicModel{1.0}}},
                                 {"dna beta=0", {1.0, DnaModel{0.1, 0.0}}},
                                 {"dna beta=-2", {1.0, DnaModel{0.1, -2.0}}}};
  double worst = 0.0;
  for (std::size_t d : {1, 2}) {
    const GridSpec grid = GridSpec::uniform(d, -5.0, 5.0, 32);
    const TensorTrain psi0 = initial_gaussian(GaussianParams::uniform(d, 1.0, 1.0, 0.0), grid);
    for (const auto& sys : systems) {
      const auto ref = DenseEigenPropagator(sys.spec, grid).propagate(tt_to_dense(psi0), 1.0);
      TtHamiltonian h(sys.spec, grid, 1e-10, kUnboundedRank);
      for (Scheme s : {Scheme::recurrence, Scheme::clenshaw}) {
        ChebyshevPlan p;
        p.t = 1.0;
        p.n_terms = 300;
        p.scheme = s;
        p.round_tol = 1e-10;
        p.rmax = kUnboundedRank;
        const TensorTrain out = chebyshev_propagate(psi0, h, p);
        const double err = grid_l2(tt_to_dense(out), ref, grid);
        worst = std::max(worst, err);
        const std::string run = fmt("d=%zu %s %s", d, sys.name,
                                    s == Scheme::recurrence ? "recurrence" : "clenshaw");
        o.require(err <= 1e-7, fmt("%s: L2 vs eigendecomposition %.3g <= 1e-7", run.c_str(), err));
        const double n0 = h.norm(psi0);
        norm_records.push_back(
            {"criterion 1 " + run, std::max(std::abs(n0 - 1.0), std::abs(h.norm(out) - 1.0))});
      }
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs <= 60.0, fmt("runtime %.1f s <= 60 s", secs));
  o.details.push_back(fmt("worst L2 error %.3g", worst));
  return o;
}

// ---- 2: error versus number of terms ---------------------------------------

Outcome error_vs_terms() {
  Outcome o;
  const auto t0 = Clock::now();
  RunConfig c = load("converge.cfg");
  RunOptions opts;
  opts.out_dir = out_root + "/converge";
  opts.jobs = 1;
  const auto points = run_convergence_study(c, opts);
  auto best = [&](double t, std::size_t n_max, bool strict) {
    double e = INFINITY;
    std::size_t at = 0;
    for (const auto& p : points) {
      if (std::abs(p.t_final - t) > 1e-12) continue;
      if (strict ? p.n_terms >= n_max : p.n_terms > n_max) continue;
      if (p.l2_error < e) {
        e = p.l2_error;
        at = p.n_terms;
      }
    }
    return std::pair{e, at};
  };
  const auto [e1, n1] = best(1.0, 200, true);
  const auto [e6, n6] = best(6.0, 500, false);
  o.require(e1 <= 1e-6, fmt("t=1: min L2 over N<200 is %.3g (N=%zu) <= 1e-6", e1, n1));
  o.require(e6 <= 1e-6, fmt("t=6: min L2 over N<=500 is %.3g (N=%zu) <= 1e-6", e6, n6));
  for (double t : {1.0, 6.0}) {
    std::size_t first = 0;
    for (const auto& p : points)
      if (std::abs(p.t_final - t) <= 1e-12 && p.l2_error <= 1e-6 && first == 0) first = p.n_terms;
    o.details.push_back(fmt("t=%g: first N reaching 1e-6 is %zu", t, first));
  }
  const double secs = seconds_since(t0);
  o.require(secs <= 300.0, fmt("runtime %.1f s <= 300 s", secs));
  return o;
}

// ---- 3: Chebyshev versus split operator -------------------------------------

Outcome chebyshev_vs_soft() {
  Outcome o;
  const auto t0 = Clock::now();
  RunConfig c = load("soft_compare.cfg");
  RunOptions opts;
  opts.out_dir = out_root + "/soft_compare";
  opts.jobs = 1;
  auto points = run_soft_comparison(c, opts);
  std::sort(points.begin(), points.end(), [](auto& a, auto& b) { return a.dt < b.dt; });
  o.require(c.n_terms == 750, fmt("N = %zu", c.n_terms));

  // Largest ladder step at which SOFT still reaches 1% autocorrelation error.
  double dt_soft = 0.0;
  for (const auto& p : points)
    if (p.acorr_err_soft <= 0.01) dt_soft = p.dt;
  const auto& big = points.back();
  o.require(dt_soft > 0.0, fmt("SOFT 1%% threshold step %g", dt_soft));
  o.require(big.dt >= 100.0 * dt_soft,
            fmt("largest dt %g >= 100 x %g", big.dt, dt_soft));
  o.require(big.err_soft >= 100.0 * big.err_ttc,
            fmt("L2 at dt=%g: SOFT %.3g / TTC %.3g = %.3g >= 100", big.dt, big.err_soft,
                big.err_ttc, big.err_soft / big.err_ttc));
  o.require(big.acorr_err_soft >= 100.0 * big.acorr_err_ttc,
            fmt("autocorrelation at dt=%g: SOFT %.3g / TTC %.3g = %.3g >= 100", big.dt,
                big.acorr_err_soft, big.acorr_err_ttc, big.acorr_err_soft / big.acorr_err_ttc));
  o.require(big.acorr_err_ttc <= 0.01,
            fmt("TTC autocorrelation error %.3g <= 1%% at dt=%g (%gx SOFT's)", big.acorr_err_ttc,
                big.dt, big.dt / dt_soft));
  const double secs = seconds_since(t0);
  o.require(secs <= 600.0, fmt("runtime %.1f s <= 600 s", secs));
  return o;
}

// ---- 4: 50-D DNA runs --------------------------------------------------------

Outcome dna50() {
  Outcome o;
  struct Run {
    const char* cfg;
    SimulationResult r;
  };
  std::vector<Run> runs{{"dna50.cfg", {}},
                        {"dna50_ft.cfg", {}},
                        {"dna50_uncoupled.cfg", {}},
                        {"dna50_uncoupled_ft.cfg", {}}};
  for (auto& run : runs) {
    RunConfig c = load(run.cfg);
    o.require(c.dim == 50 && c.tau == 0.01 && c.n_terms == 50,
              fmt("%s: D=%zu tau=%g N=%zu", run.cfg, c.dim, c.tau, c.n_terms));
    RunOptions opts;
    opts.out_dir = out_root + "/" + std::filesystem::path(run.cfg).stem().string();
    opts.verbose = false;
    run.r = run_simulation(c, opts);
    const std::size_t checkpoints = run.r.rows.size() - 1;
    o.require(checkpoints >= 100, fmt("%s: %zu checkpoints >= 100", run.cfg, checkpoints));
    o.require(run.r.wall_seconds <= 3600.0,
              fmt("%s: %.0f s <= 3600 s, max rank %zu", run.cfg, run.r.wall_seconds,
                  run.r.max_rank));
    double worst = 0.0;
    for (const auto& row : run.r.rows) worst = std::max(worst, std::abs(row.norm - 1.0));
    norm_records.push_back({std::string("criterion 4 ") + run.cfg, worst});
  }
  auto compare = [&](const SimulationResult& tt, const SimulationResult& ft, const char* what) {
    bool same = tt.rows.size() == ft.rows.size();
    double worst = 0.0;
    for (std::size_t i = 0; same && i < tt.rows.size(); ++i) {
      same = std::abs(tt.rows[i].t - ft.rows[i].t) <= 1e-9;
      worst = std::max(worst, std::abs(tt.rows[i].s - ft.rows[i].s));
    }
    o.require(same && worst <= 1e-3, fmt("%s: max |S_tt - S_ft| = %.3g <= 1e-3", what, worst));
  };
  compare(runs[0].r, runs[1].r, "coupled");
  compare(runs[2].r, runs[3].r, "uncoupled");
  o.require(runs[0].r.max_rank > runs[2].r.max_rank,
            fmt("TT max rank coupled %zu > uncoupled %zu", runs[0].r.max_rank, runs[2].r.max_rank));
  o.require(runs[1].r.max_rank > runs[3].r.max_rank,
            fmt("FT max rank coupled %zu > uncoupled %zu", runs[1].r.max_rank, runs[3].r.max_rank));
  return o;
}

// ---- 5: normalization --------------------------------------------------------

Outcome normalization() {
  Outcome o;
  if (norm_records.empty()) o.require(false, "no runs recorded (criteria 1 and 4 not run)");
  for (const auto& r : norm_records)
    o.require(r.worst <= 1e-6, fmt("%s: max |norm - 1| = %.3g <= 1e-6", r.run.c_str(), r.worst));
  return o;
}

// ---- 6: component properties ------------------------------------------------

FunctionTrain random_ft(std::mt19937_64& rng, std::size_t d, std::size_t rank, std::size_t p) {
  std::vector<std::size_t> dims(d, p);
  return FunctionTrain(std::vector<Basis>(d, Basis{-2.0, 1.5, p}),
                       fttc::testing::random_tt(rng, dims, rank));
}

Outcome components() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20261018);

  double worst_round = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TensorTrain a = fttc::testing::random_tt(rng, {8, 8, 8, 8}, 1 + trial % 6);
    const TensorTrain b = fttc::testing::random_tt(rng, {8, 8, 8, 8}, 2);
    const TensorTrain s = tt_add(a, tt_scale(b, 1e-6 * (trial % 3)));
    const double tol = trial % 2 == 0 ? 1e-6 : 1e-3;
    const auto ds = tt_to_dense(s);
    worst_round =
        std::max(worst_round, dense_diff(tt_to_dense(tt_round(s, tol)), ds) / (tol * dense_norm(ds)));
  }
  o.require(worst_round <= 1.0 + 1e-10,
            fmt("tt_round: worst error / (tol ||a||) over 100 trains = %.3g <= 1", worst_round));

  double worst_inner = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + trial % 4;
    const FunctionTrain a = random_ft(rng, d, 3, 4 + trial % 5);
    const FunctionTrain b = random_ft(rng, d, 3, 4 + trial % 3);
    const cplx ref = ft_integrate(ft_multiply(ft_conj(a), b));
    worst_inner = std::max(worst_inner, std::abs(ft_inner(a, b) - ref) / std::abs(ref));
  }
  o.require(worst_inner <= 1e-11,
            fmt("ft_inner vs multiply-then-integrate, 50 pairs: %.3g <= 1e-11", worst_inner));

  double worst_bessel = 0.0;
  for (double x : {0.5, 1.0, 10.0, 300.0}) {
    const auto ref = fttc::testing::bessel_power_series(1001, x);
    const BesselTable t = bessel_j_sequence(1001, x);
    for (std::size_t k = 0; k < 1001; ++k)
      worst_bessel = std::max(worst_bessel, std::abs(t.values[k] - ref[k]));
  }
  o.require(worst_bessel <= 1e-12, fmt("Bessel vs power series, k <= 1000: %.3g <= 1e-12", worst_bessel));

  const auto rule = gauss_chebyshev(32);
  double worst_orth = 0.0;
  for (std::size_t j = 0; j <= 20; ++j)
    for (std::size_t k = 0; k <= 20; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const auto t = chebyshev_values(21, rule.nodes[i]);
        s += rule.weights[i] * t[j] * t[k];
      }
      const double ref = j != k ? 0.0 : (j == 0 ? std::numbers::pi : std::numbers::pi / 2);
      worst_orth = std::max(worst_orth, std::abs(s - ref));
    }
  o.require(worst_orth <= 1e-12, fmt("Chebyshev orthogonality j,k <= 20: %.3g <= 1e-12", worst_orth));

  const GridSpec grid = GridSpec::uniform(1, -5.0, 5.0, 32);
  const HamiltonianSpec spec{1.0, DnaModel{0.1, 0.0}};
  const auto psi0 =
      tt_to_dense(initial_gaussian(GaussianParams::uniform(1, 1.0, 1.0, 0.0), grid));
  double worst_clen = 0.0;
  for (std::size_t n : {1, 2, 3, 40, 120, 300}) {
    DenseRequest r;
    r.method = DenseMethod::chebyshev;
    r.t = 0.7;
    r.n_terms = n;
    const auto direct = fullgrid_reference(psi0, spec, grid, r);
    r.method = DenseMethod::clenshaw;
    worst_clen = std::max(worst_clen,
                          dense_diff(direct, fullgrid_reference(psi0, spec, grid, r)) /
                              dense_norm(direct));
  }
  o.require(worst_clen <= 1e-12, fmt("Clenshaw vs direct summation: %.3g <= 1e-12", worst_clen));

  const auto ref = DenseEigenPropagator(spec, grid).propagate(psi0, 1.0);
  std::vector<double> err;
  for (std::size_t steps : {50, 100, 200, 400}) {
    DenseRequest r;
    r.method = DenseMethod::soft;
    r.dt = 1.0 / static_cast<double>(steps);
    r.steps = steps;
    err.push_back(grid_l2(fullgrid_reference(psi0, spec, grid, r), ref, grid));
  }
  const double order = std::log2(err.front() / err.back()) / 3.0;
  o.require(std::abs(order - 2.0) <= 0.2, fmt("SOFT observed order %.3f in 2 +- 0.2", order));

  const double secs = seconds_since(t0);
  o.require(secs <= 300.0, fmt("runtime %.1f s <= 300 s", secs));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      for (const char* p = argv[++i]; *p; ++p)
        if (*p >= '1' && *p <= '6') only.insert(*p - '0');
    } else if (!std::strcmp(argv[i], "--out") && i + 1 < argc) {
      out_root = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--only 1,2,...] [--out DIR]\n");
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence, d = 1, 2", oracle_equivalence},
      {"error vs number of terms", error_vs_terms},
      {"Chebyshev vs split operator", chebyshev_vs_soft},
      {"50-D DNA runs, TT vs FT", dna50},
      {"normalization of converged runs", normalization},
      {"component properties", components},
  };
  std::string report;
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::string block = fmt("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first);
    for (const auto& d : o.details) block += "    " + d + "\n";
    std::fputs(block.c_str(), stdout);
    std::fflush(stdout);
    report += block;
    failed += o.pass ? 0 : 1;
  }
  std::filesystem::create_directories(out_root);
  if (std::FILE* f = std::fopen((out_root + "/acceptance_report.txt").c_str(), "w")) {
    std::fputs(report.c_str(), f);
    std::fclose(f);
  }
  return failed ? 1 : 0;
}
