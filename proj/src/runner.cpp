#include "fttc/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include <json.hpp>

#include "fttc/bessel.hpp"
#include "fttc/error.hpp"

namespace fttc {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string format_time(double t) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t, std::chars_format::general, 12);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string tag(std::size_t k) {
  std::string s = std::to_string(k);
  return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
}

fs::path output_dir(const RunConfig& c, const RunOptions& o) {
  fs::path dir = o.out_dir.empty() ? fs::path(c.out_dir) : fs::path(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw_io("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot write " + tmp.string());
    out << content;
    out.close();
    if (!out) throw_io("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw_io("cannot rename " + tmp.string() + ": " + ec.message());
}

/// Run fn(i) for i < n on up to `jobs` threads; rethrows the first failure.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(jobs, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ChebyshevPlan make_plan(const RunConfig& c, double t, std::size_t n_terms) {
  ChebyshevPlan p;
  p.t = t;
  p.n_terms = n_terms;
  p.scheme = c.scheme == RunScheme::chebyshev_clenshaw ? Scheme::clenshaw : Scheme::recurrence;
  p.round_tol = c.round_tol;
  p.rmax = c.rmax;
  p.auto_trim = c.auto_trim;
  return p;
}

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::config: return "config";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::io: return "io";
    case ErrorKind::numerical: return "numerical";
  }
  return "error";
}

/// Format-specific pieces of a run.
template <class State>
struct Driver {
  /// Advances one checkpoint interval; stores the peak rank of the interval.
  std::function<State(const State&, std::size_t*)> step;
  std::function<double(const State&)> norm;
  std::function<cplx(const State&, const State&)> inner;
  std::function<void(const State&, const fs::path&, std::size_t, std::vector<std::string>&)>
      slices;
  std::function<void(const State&, const std::string&)> save;
  std::function<State(const std::string&)> load;
  std::function<bool(const State&, const State&)> compatible;
  std::string extension;
  SpectralBounds bounds;
};

template <class State>
SimulationResult simulate(const RunConfig& c, const RunOptions& opts, const State& psi0,
                          const Driver<State>& drv, std::vector<std::string> warnings) {
  const auto start = Clock::now();
  const fs::path dir = output_dir(c, opts);
  SimulationResult res;
  res.warnings = std::move(warnings);
  const std::size_t total = c.checkpoints();
  const double norm0 = drv.norm(psi0);

  std::vector<std::size_t> slice_at;
  for (double t : c.slice_times) slice_at.push_back(static_cast<std::size_t>(std::lround(t / c.tau)));

  nlohmann::ordered_json report;
  report["status"] = "running";
  std::ofstream csv;
  std::optional<State> psi;

  const auto write_report = [&] {
    report["format"] = c.format == StateFormat::tt ? "tt" : "ft";
    report["checkpoints"] = res.rows.size();
    report["t_final"] = c.t_final;
    report["tau"] = c.tau;
    report["bounds"] = {{"e_min", drv.bounds.e_min}, {"e_max", drv.bounds.e_max}};
    report["max_rank"] = res.max_rank;
    report["max_norm_drift"] = res.max_norm_drift;
    report["wall_seconds"] = res.wall_seconds;
    report["warnings"] = res.warnings;
    report["files"] = res.files;
    if (!res.rows.empty()) {
      const auto& r = res.rows.back();
      report["last"] = {{"t", r.t}, {"re_s", r.s.real()}, {"im_s", r.s.imag()}, {"norm", r.norm}};
    }
    report["config"] = print_config(c);
    write_atomic(dir / "run_report.json", report.dump(2) + "\n");
  };

  const auto record = [&](std::size_t k, std::size_t rank) {
    const double t = static_cast<double>(k) * c.tau;
    SurvivalRow row{t, drv.inner(psi0, *psi), drv.norm(*psi), rank};
    res.rows.push_back(row);
    res.max_rank = std::max(res.max_rank, rank);
    const double drift = std::abs(row.norm - norm0);
    res.max_norm_drift = std::max(res.max_norm_drift, drift);
    csv << format_time(t) << ',' << format_double(row.s.real()) << ','
        << format_double(row.s.imag()) << ',' << format_double(std::abs(row.s)) << ','
        << format_double(row.norm) << ',' << rank << '\n';
    csv.flush();
    if (!csv) throw_io("write failed for survival.csv");
    if (opts.verbose) {
      std::cerr << "t = " << format_time(t) << "  |S| = " << format_double(std::abs(row.s))
                << "  norm = " << format_double(row.norm) << "  rank = " << rank << "\n";
    }
    if (drift > 0.5 * norm0) {
      throw Error(ErrorKind::divergence, "norm drifted to " + format_double(row.norm) +
                                             " at t = " + format_time(t));
    }
    if (std::find(slice_at.begin(), slice_at.end(), k) != slice_at.end()) {
      drv.slices(*psi, dir, k, res.files);
    }
    if ((c.checkpoint_every > 0 && k % c.checkpoint_every == 0) || k == total) {
      const std::string name = "state_" + tag(k) + drv.extension;
      drv.save(*psi, (dir / name).string());
      res.files.push_back(name);
    }
  };

  try {
    std::size_t k0 = 0;
    if (!c.resume_from.empty()) {
      k0 = static_cast<std::size_t>(std::lround(c.resume_time / c.tau));
      psi = drv.load(c.resume_from);
      if (!drv.compatible(psi0, *psi)) {
        throw_config("config key 'resume_from': checkpoint does not match the discretization");
      }
    } else {
      psi = psi0;
    }
    csv.open(dir / "survival.csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw_io("cannot write " + (dir / "survival.csv").string());
    csv << "t[au],re_s,im_s,abs_s,norm,max_rank\n";
    res.files.push_back("survival.csv");
    record(k0, psi->max_rank());
    for (std::size_t k = k0 + 1; k <= total; ++k) {
      std::size_t rank = 0;
      psi = drv.step(*psi, &rank);
      record(k, rank);
    }
    res.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report["status"] = "ok";
    write_report();
  } catch (const Error& e) {
    res.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report["status"] = kind_name(e.kind());
    report["message"] = e.what();
    try {
      write_report();
    } catch (...) {
    }
    throw;
  }
  return res;
}

void write_slice(const Slice2d& s, const fs::path& path) {
  std::string out = "x" + std::to_string(s.p) + "[au],x" + std::to_string(s.q) + "[au],density\n";
  for (std::size_t i = 0; i < s.axis_p.size(); ++i) {
    for (std::size_t j = 0; j < s.axis_q.size(); ++j) {
      out += format_double(s.axis_p[i]) + ',' + format_double(s.axis_q[j]) + ',' +
             format_double(s.at(i, j)) + '\n';
    }
  }
  write_atomic(path, out);
}

SimulationResult run_tt(const RunConfig& c, const RunOptions& opts) {
  const GridSpec grid = c.grid();
  const GaussianParams gp = c.gaussian();
  std::vector<std::string> warnings;
  const TensorTrain psi0 = initial_gaussian(gp, grid, &warnings);
  auto h = std::make_shared<TtHamiltonian>(c.hamiltonian(), grid, c.round_tol, c.rmax);
  std::shared_ptr<SoftPropagator> soft;
  std::size_t soft_steps = 0;
  if (c.scheme == RunScheme::soft) {
    soft = std::make_shared<SoftPropagator>(*h, c.dt);
    soft_steps = static_cast<std::size_t>(std::lround(c.tau / c.dt));
  }
  std::vector<std::size_t> fixed;
  for (std::size_t j = 0; j < grid.order(); ++j) fixed.push_back(nearest_node(grid.axes[j], gp.x0[j]));

  Driver<TensorTrain> drv;
  const ChebyshevPlan plan = make_plan(c, c.tau, c.n_terms);
  drv.step = [=](const TensorTrain& psi, std::size_t* rank) {
    RunReport rep;
    TensorTrain out = soft ? soft->run(psi, soft_steps, &rep) : chebyshev_propagate(psi, *h, plan, &rep);
    *rank = std::max(rep.max_rank, out.max_rank());
    return out;
  };
  drv.norm = [=](const TensorTrain& a) { return h->norm(a); };
  drv.inner = [=](const TensorTrain& a, const TensorTrain& b) { return h->inner(a, b); };
  drv.slices = [=, &c](const TensorTrain& psi, const fs::path& dir, std::size_t k,
                       std::vector<std::string>& files) {
    const std::string name = "slice_" + tag(k) + ".csv";
    write_slice(density_slice2d(psi, grid, c.slice_p, c.slice_q, fixed), dir / name);
    files.push_back(name);
    if (c.slice_reduced) {
      const std::string rname = "reduced_" + tag(k) + ".csv";
      write_slice(reduced_density2d(psi, grid, c.slice_p, c.slice_q), dir / rname);
      files.push_back(rname);
    }
  };
  drv.save = [](const TensorTrain& a, const std::string& p) { tt_save(a, p); };
  drv.load = [](const std::string& p) { return tt_load(p); };
  drv.compatible = [](const TensorTrain& a, const TensorTrain& b) { return a.dims() == b.dims(); };
  drv.extension = ".ttc";
  drv.bounds = h->bounds();
  return simulate(c, opts, psi0, drv, std::move(warnings));
}

SimulationResult run_ft(const RunConfig& c, const RunOptions& opts) {
  const std::vector<Basis> bases = c.bases();
  const GaussianParams gp = c.gaussian();
  std::vector<std::string> warnings;
  const FunctionTrain psi0 = initial_gaussian(gp, bases, &warnings);
  auto h = std::make_shared<FtHamiltonian>(c.hamiltonian(), bases, c.round_tol, c.rmax);
  const GridSpec grid = c.grid();

  Driver<FunctionTrain> drv;
  const ChebyshevPlan plan = make_plan(c, c.tau, c.n_terms);
  drv.step = [=](const FunctionTrain& psi, std::size_t* rank) {
    RunReport rep;
    FunctionTrain out = chebyshev_propagate(psi, *h, plan, &rep);
    *rank = std::max(rep.max_rank, out.max_rank());
    return out;
  };
  drv.norm = [=](const FunctionTrain& a) { return h->norm(a); };
  drv.inner = [=](const FunctionTrain& a, const FunctionTrain& b) { return h->inner(a, b); };
  drv.slices = [=, &c](const FunctionTrain& psi, const fs::path& dir, std::size_t k,
                       std::vector<std::string>& files) {
    const auto xp = grid.axes[c.slice_p].nodes();
    const auto xq = grid.axes[c.slice_q].nodes();
    const std::string name = "slice_" + tag(k) + ".csv";
    write_slice(density_slice2d(psi, c.slice_p, c.slice_q, xp, xq, gp.x0), dir / name);
    files.push_back(name);
  };
  drv.save = [](const FunctionTrain& a, const std::string& p) { ft_save(a, p); };
  drv.load = [](const std::string& p) { return ft_load(p); };
  drv.compatible = [](const FunctionTrain& a, const FunctionTrain& b) {
    if (a.order() != b.order()) return false;
    for (std::size_t j = 0; j < a.order(); ++j) {
      if (a.basis(j).a != b.basis(j).a || a.basis(j).b != b.basis(j).b) return false;
    }
    return true;
  };
  drv.extension = ".ftc";
  drv.bounds = h->bounds();
  return simulate(c, opts, psi0, drv, std::move(warnings));
}

AnalyticCoherentState oracle_for(const RunConfig& c) {
  if (c.model != ModelKind::harmonic) {
    throw_config("config key 'model': the analytic oracle needs model = harmonic");
  }
  try {
    return AnalyticCoherentState::from_gaussian(c.gaussian(), c.omega, c.mass);
  } catch (const Error& e) {
    throw_config(std::string("config key 'width': ") + e.what());
  }
}

}  // namespace

SimulationResult run_simulation(const RunConfig& c, const RunOptions& opts) {
  c.validate();
  return c.format == StateFormat::tt ? run_tt(c, opts) : run_ft(c, opts);
}

std::vector<ConvergencePoint> run_convergence_study(const RunConfig& c, const RunOptions& opts) {
  c.validate();
  if (c.scheme == RunScheme::soft) {
    throw_config("config key 'scheme': the convergence study needs a Chebyshev scheme");
  }
  const AnalyticCoherentState cs = oracle_for(c);
  const fs::path dir = output_dir(c, opts);
  std::vector<ConvergencePoint> points;
  for (double t : c.t_list) {
    for (std::size_t n : c.n_list) points.push_back({t, n, 0.0});
  }
  const HamiltonianSpec spec = c.hamiltonian();
  if (c.format == StateFormat::tt) {
    const GridSpec grid = c.grid();
    const TtHamiltonian h(spec, grid, c.round_tol, c.rmax);
    const TensorTrain psi0 = initial_gaussian(c.gaussian(), grid);
    parallel_for(points.size(), opts.jobs, [&](std::size_t i) {
      auto& p = points[i];
      ChebyshevPlan plan = make_plan(c, p.t_final, p.n_terms);
      plan.check_norm = false;
      const TensorTrain psi = chebyshev_propagate(psi0, h, plan);
      p.l2_error = l2_error(psi, coherent_state_tt(cs, p.t_final, grid), h.volume());
    });
  } else {
    const std::vector<Basis> bases = c.bases();
    const FtHamiltonian h(spec, bases, c.round_tol, c.rmax);
    const FunctionTrain psi0 = initial_gaussian(c.gaussian(), bases);
    parallel_for(points.size(), opts.jobs, [&](std::size_t i) {
      auto& p = points[i];
      ChebyshevPlan plan = make_plan(c, p.t_final, p.n_terms);
      plan.check_norm = false;
      const FunctionTrain psi = chebyshev_propagate(psi0, h, plan);
      p.l2_error = l2_error(psi, coherent_state_ft(cs, p.t_final, bases));
    });
  }
  std::string out = "t_final[au],n_terms,l2_error\n";
  for (const auto& p : points) {
    out += format_time(p.t_final) + ',' + std::to_string(p.n_terms) + ',' +
           format_double(p.l2_error) + '\n';
    if (opts.verbose) {
      std::cerr << "t = " << format_time(p.t_final) << "  N = " << p.n_terms
                << "  error = " << format_double(p.l2_error) << "\n";
    }
  }
  write_atomic(dir / "converge.csv", out);
  return points;
}

std::vector<SoftComparisonPoint> run_soft_comparison(const RunConfig& c, const RunOptions& opts) {
  c.validate();
  if (c.format != StateFormat::tt) throw_config("config key 'format': soft-compare needs tt");
  if (c.scheme == RunScheme::soft) {
    throw_config("config key 'scheme': soft-compare needs a Chebyshev scheme for the TTC side");
  }
  const AnalyticCoherentState cs = oracle_for(c);
  std::vector<std::size_t> steps;
  for (double dt : c.dt_list) {
    const double q = std::round(c.t_final / dt);
    if (q < 1 || std::abs(q * dt - c.t_final) > 1e-9 * std::max(1.0, c.t_final)) {
      throw_config("config key 'dt_list': every entry must divide t_final");
    }
    steps.push_back(static_cast<std::size_t>(q));
  }
  const fs::path dir = output_dir(c, opts);
  const GridSpec grid = c.grid();
  const TtHamiltonian h(c.hamiltonian(), grid, c.round_tol, c.rmax);
  const TensorTrain psi0 = initial_gaussian(c.gaussian(), grid);
  const TensorTrain exact = coherent_state_tt(cs, c.t_final, grid);
  const double vol = h.volume();
  const cplx s_exact = survival_amplitude(psi0, exact, vol);

  std::vector<SoftComparisonPoint> points(c.dt_list.size());
  parallel_for(points.size(), opts.jobs, [&](std::size_t i) {
    const double dt = c.dt_list[i];
    const ChebyshevPlan plan = make_plan(c, dt, c.n_terms);
    TensorTrain ttc = psi0;
    for (std::size_t s = 0; s < steps[i]; ++s) ttc = chebyshev_propagate(ttc, h, plan);
    const TensorTrain soft = soft_propagate(psi0, h, dt, steps[i]);
    auto& p = points[i];
    p.dt = dt;
    p.err_ttc = l2_error(ttc, exact, vol);
    p.err_soft = l2_error(soft, exact, vol);
    p.acorr_err_ttc = std::abs(survival_amplitude(psi0, ttc, vol) - s_exact) / std::abs(s_exact);
    p.acorr_err_soft = std::abs(survival_amplitude(psi0, soft, vol) - s_exact) / std::abs(s_exact);
  });
  std::string out = "dt[au],err_ttc,err_soft,acorr_err_ttc,acorr_err_soft\n";
  for (const auto& p : points) {
    out += format_double(p.dt) + ',' + format_double(p.err_ttc) + ',' + format_double(p.err_soft) +
           ',' + format_double(p.acorr_err_ttc) + ',' + format_double(p.acorr_err_soft) + '\n';
    if (opts.verbose) {
      std::cerr << "dt = " << format_double(p.dt) << "  ttc " << format_double(p.err_ttc)
                << "  soft " << format_double(p.err_soft) << "\n";
    }
  }
  write_atomic(dir / "soft_compare.csv", out);
  return points;
}

void write_bessel_csv(double x, std::size_t n, const std::string& path) {
  const BesselTable table = bessel_j_sequence(n, x);
  std::string out = "k,J_k\n";
  for (std::size_t k = 0; k < table.values.size(); ++k) {
    out += std::to_string(k) + ',' + format_double(table.values[k]) + '\n';
  }
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw_io("cannot create directory for " + path);
  }
  write_atomic(p, out);
}

}  // namespace fttc
