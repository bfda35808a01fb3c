#include "fttc/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fttc/error.hpp"
#include "fttc/fft.hpp"

namespace fttc {

namespace {

constexpr std::size_t kTrimRun = 5;
constexpr double kDriftLimit = 0.5;
constexpr double kBlowupFactor = 1e3;

TensorTrain combine(const TensorTrain& a, cplx wa, const TensorTrain& b, cplx wb) {
  const TtTerm terms[] = {{wa, &a}, {wb, &b}};
  return tt_lincomb(terms);
}

FunctionTrain combine(const FunctionTrain& a, cplx wa, const FunctionTrain& b, cplx wb) {
  const FtTerm terms[] = {{wa, &a}, {wb, &b}};
  return ft_lincomb(terms);
}

TensorTrain combine3(const TensorTrain& a, cplx wa, const TensorTrain& b, cplx wb,
                     const TensorTrain& c, cplx wc) {
  const TtTerm terms[] = {{wa, &a}, {wb, &b}, {wc, &c}};
  return tt_lincomb(terms);
}

FunctionTrain combine3(const FunctionTrain& a, cplx wa, const FunctionTrain& b, cplx wb,
                       const FunctionTrain& c, cplx wc) {
  const FtTerm terms[] = {{wa, &a}, {wb, &b}, {wc, &c}};
  return ft_lincomb(terms);
}

TensorTrain scaled(const TensorTrain& a, cplx s) { return tt_scale(a, s); }
FunctionTrain scaled(const FunctionTrain& a, cplx s) { return ft_scale(a, s); }

cplx neg_i_pow(std::size_t k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

struct Setup {
  SpectralBounds bounds;
  double t_minus;
  double t_plus;
  BesselTable bessel;
  std::size_t terms;
};

template <class Ham>
Setup prepare(const typename Ham::State& psi0, const Ham& h, const ChebyshevPlan& plan) {
  plan.validate();
  (void)psi0;
  const SpectralBounds b = plan.bounds ? *plan.bounds : h.bounds();
  if (!(b.e_max > b.e_min) || !std::isfinite(b.e_min) || !std::isfinite(b.e_max)) {
    throw_invalid("chebyshev: spectral bounds require finite E_max > E_min");
  }
  const double tm = b.t_minus(plan.t);
  const std::size_t terms = effective_terms(plan, tm);
  // Extra orders so the trimming test can look ahead.
  BesselTable table = bessel_j_sequence(terms + kTrimRun, tm);
  return {b, tm, b.t_plus(plan.t), std::move(table), terms};
}

void note_rank(RunReport* report, std::size_t rank) {
  if (!report) return;
  report->ranks.push_back(rank);
  report->max_rank = std::max(report->max_rank, rank);
}

void check_drift(double norm, double norm0, const char* where) {
  if (!std::isfinite(norm) || std::abs(norm - norm0) > kDriftLimit * norm0) {
    throw Error(ErrorKind::divergence,
                std::string(where) + ": norm drifted from " + std::to_string(norm0) + " to " +
                    std::to_string(norm) + "; spectral bounds probably do not bracket H");
  }
}

void check_blowup(double norm, double limit, const char* where) {
  if (!std::isfinite(norm) || norm > limit) {
    throw Error(ErrorKind::divergence,
                std::string(where) + ": Chebyshev vector grew without bound; spectral bounds "
                                     "probably do not bracket H");
  }
}

}  // namespace

void ChebyshevPlan::validate() const {
  if (n_terms < 1) throw_invalid("ChebyshevPlan: need at least one term");
  if (!(t >= 0.0) || !std::isfinite(t)) throw_invalid("ChebyshevPlan: t must be finite and >= 0");
  if (!(round_tol >= 0.0)) throw_invalid("ChebyshevPlan: round_tol must be >= 0");
  if (rmax < 1) throw_invalid("ChebyshevPlan: rmax must be >= 1");
}

std::size_t effective_terms(const ChebyshevPlan& plan, double t_minus) {
  if (!plan.auto_trim) return plan.n_terms;
  const BesselTable table = bessel_j_sequence(plan.n_terms + kTrimRun, t_minus);
  std::size_t run = 0;
  for (std::size_t k = 0; k < table.values.size(); ++k) {
    run = std::abs(table.values[k]) < kBesselNegligible ? run + 1 : 0;
    if (run == kTrimRun) return std::clamp<std::size_t>(k + 1 - kTrimRun, 1, plan.n_terms);
  }
  return plan.n_terms;
}

template <class Ham>
typename Ham::State chebyshev_propagate_recurrence(const typename Ham::State& psi0,
                                                   const Ham& h, const ChebyshevPlan& plan,
                                                   RunReport* report) {
  using State = typename Ham::State;
  const Setup s = prepare(psi0, h, plan);
  const double tol = plan.round_tol;
  const std::size_t rmax = plan.rmax;
  const double norm0 = h.norm(psi0);
  const auto& J = s.bessel.values;
  std::size_t roundings = 0;

  State acc = h.round(scaled(psi0, J[0]), tol, rmax);
  ++roundings;
  std::size_t used = 1;
  std::size_t live = 2;
  note_rank(report, acc.max_rank());
  if (s.terms > 1) {
    State prev = psi0;
    State cur = h.apply_h0(psi0, s.bounds, tol, rmax);
    ++roundings;
    acc = h.round(combine(acc, 1.0, cur, 2.0 * neg_i_pow(1) * J[1]), tol, rmax);
    ++roundings;
    used = 2;
    live = 4;
    note_rank(report, std::max(cur.max_rank(), acc.max_rank()));
    for (std::size_t k = 2; k < s.terms; ++k) {
      State hx = h.apply_h0(cur, s.bounds, tol, rmax);
      State next = h.round(combine(hx, 2.0, prev, -1.0), tol, rmax);
      roundings += 2;
      check_blowup(h.norm(next), kBlowupFactor * norm0, "chebyshev recurrence");
      acc = h.round(combine(acc, 1.0, next, 2.0 * neg_i_pow(k) * J[k]), tol, rmax);
      ++roundings;
      prev = std::move(cur);
      cur = std::move(next);
      used = k + 1;
      note_rank(report, std::max(cur.max_rank(), acc.max_rank()));
    }
  }
  State out = scaled(acc, std::polar(1.0, -s.t_plus));
  if (plan.check_norm) check_drift(h.norm(out), norm0, "chebyshev recurrence");
  if (report) {
    report->terms_used = used;
    report->live_peak = std::max(report->live_peak, live);
    report->roundings += roundings;
  }
  return out;
}

template <class Ham>
typename Ham::State chebyshev_propagate_clenshaw(const typename Ham::State& psi0,
                                                 const Ham& h, const ChebyshevPlan& plan,
                                                 RunReport* report) {
  using State = typename Ham::State;
  const Setup s = prepare(psi0, h, plan);
  const double tol = plan.round_tol;
  const std::size_t rmax = plan.rmax;
  const double norm0 = h.norm(psi0);
  const auto& J = s.bessel.values;
  std::size_t roundings = 0;
  std::size_t live = 0;
  std::size_t peak = 0;
  const double n = static_cast<double>(s.terms + 1);
  const double blowup = kBlowupFactor * n * n * norm0;

  // b1 = B_{r+1}, b2 = B_{r+2}; empty means zero.
  std::optional<State> b1;
  std::optional<State> b2;
  for (std::size_t r = s.terms; r-- > 0;) {
    const cplx c = neg_i_pow(r) * J[r];
    State br = [&] {
      if (!b1) return h.round(scaled(psi0, c), tol, rmax);
      State hx = h.apply_h0(*b1, s.bounds, tol, rmax);
      ++roundings;
      if (!b2) return h.round(combine(hx, 2.0, psi0, c), tol, rmax);
      return h.round(combine3(hx, 2.0, *b2, -1.0, psi0, c), tol, rmax);
    }();
    ++roundings;
    ++live;
    peak = std::max(peak, live);
    check_blowup(h.norm(br), blowup, "chebyshev clenshaw");
    note_rank(report, br.max_rank());
    if (r == 0) {
      // B_0 - B_2; B_1 is no longer needed.
      b1.reset();
      State out = b2 ? h.round(combine(br, 1.0, *b2, -1.0), tol, rmax) : std::move(br);
      if (b2) ++roundings;
      out = scaled(out, std::polar(1.0, -s.t_plus));
      if (plan.check_norm) check_drift(h.norm(out), norm0, "chebyshev clenshaw");
      if (report) {
        report->terms_used = s.terms;
        report->live_peak = std::max(report->live_peak, peak);
        report->roundings += roundings;
      }
      return out;
    }
    if (b2) --live;
    b2 = std::move(b1);
    b1 = std::move(br);
  }
  throw_numerical("chebyshev clenshaw: no terms evaluated");
}

template <class Ham>
typename Ham::State chebyshev_propagate(const typename Ham::State& psi0, const Ham& h,
                                        const ChebyshevPlan& plan, RunReport* report) {
  return plan.scheme == Scheme::clenshaw ? chebyshev_propagate_clenshaw(psi0, h, plan, report)
                                         : chebyshev_propagate_recurrence(psi0, h, plan, report);
}

#define FTTC_INSTANTIATE(H)                                                                  \
  template H::State chebyshev_propagate_recurrence<H>(const H::State&, const H&,            \
                                                      const ChebyshevPlan&, RunReport*);    \
  template H::State chebyshev_propagate_clenshaw<H>(const H::State&, const H&,              \
                                                    const ChebyshevPlan&, RunReport*);      \
  template H::State chebyshev_propagate<H>(const H::State&, const H&, const ChebyshevPlan&, \
                                           RunReport*);

FTTC_INSTANTIATE(TtHamiltonian)
FTTC_INSTANTIATE(FtHamiltonian)
#undef FTTC_INSTANTIATE

// ---- split operator ---------------------------------------------------------------

SoftPropagator::SoftPropagator(const TtHamiltonian& h, double dt)
    : h_(&h), dt_(dt), half_phase_(TensorTrain::zeros(std::vector<std::size_t>{1})) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw_invalid("soft: dt must be positive");
  const HamiltonianSpec& spec = h.spec();
  const GridSpec& grid = h.grid();
  const auto c = spec.onebody();
  const auto poly = [&](double x) {
    return c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])));
  };
  if (spec.coupling() == 0.0) {
    std::vector<std::vector<cplx>> factors;
    for (const auto& ax : grid.axes) {
      std::vector<cplx> f;
      for (double x : ax.nodes()) f.push_back(std::polar(1.0, -0.5 * dt * poly(x)));
      factors.push_back(std::move(f));
    }
    half_phase_ = tt_from_rank1(factors);
  } else {
    double vmax = 0.0;
    double xprev = 0.0;
    for (std::size_t j = 0; j < grid.order(); ++j) {
      double fmax = 0.0;
      double xmax = 0.0;
      for (double x : grid.axes[j].nodes()) {
        fmax = std::max(fmax, std::abs(poly(x)));
        xmax = std::max(xmax, std::abs(x));
      }
      vmax += fmax;
      if (j > 0) vmax += std::abs(spec.coupling()) * xmax * xprev;
      xprev = xmax;
    }
    const TensorTrain arg = tt_scale(h.potential(), cplx(0.0, -0.5 * dt));
    half_phase_ = tt_hadamard_exp(arg, h.tol(), h.rmax(), 0.5 * dt * vmax);
  }
  for (const auto& ax : grid.axes) {
    std::vector<cplx> ph;
    for (double p : ax.momenta()) ph.push_back(std::polar(1.0, -dt * p * p / (2.0 * spec.mass)));
    kinetic_phase_.push_back(std::move(ph));
  }
}

TensorTrain SoftPropagator::step(const TensorTrain& psi) const {
  const double tol = h_->tol();
  const std::size_t rmax = h_->rmax();
  TensorTrain x = tt_round(tt_hadamard(half_phase_, psi), tol, rmax);
  for (std::size_t j = 0; j < x.order(); ++j) {
    const Fft& fft = Fft::plan(h_->grid().axes[j].n);
    const auto& ph = kinetic_phase_[j];
    x = tt_mode_apply(x, j, [&](std::span<cplx> v) {
      fft.forward(v);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] *= ph[k];
      fft.inverse(v);
    });
  }
  return tt_round(tt_hadamard(half_phase_, x), tol, rmax);
}

TensorTrain SoftPropagator::run(const TensorTrain& psi0, std::size_t steps,
                                RunReport* report) const {
  if (steps < 1) throw_invalid("soft: need at least one step");
  if (psi0.dims() != h_->grid().dims()) throw_invalid("soft: state does not match the grid");
  const double norm0 = h_->norm(psi0);
  TensorTrain psi = psi0;
  for (std::size_t s = 0; s < steps; ++s) {
    psi = step(psi);
    note_rank(report, psi.max_rank());
  }
  check_drift(h_->norm(psi), norm0, "soft");
  if (report) {
    report->terms_used = steps;
    report->live_peak = std::max<std::size_t>(report->live_peak, 2);
    report->roundings += 2 * steps;
  }
  return psi;
}

TensorTrain soft_propagate(const TensorTrain& psi0, const TtHamiltonian& h, double dt,
                           std::size_t steps, RunReport* report) {
  return SoftPropagator(h, dt).run(psi0, steps, report);
}

}  // namespace fttc
