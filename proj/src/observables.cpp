#include "fttc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "fttc/error.hpp"
#include "linalg.hpp"

namespace fttc {

using linalg::Mat;

// ---- Gaussian ----------------------------------------------------------------

GaussianParams GaussianParams::uniform(std::size_t d, double width, double x0, double p0) {
  return {width, std::vector<double>(d, x0), std::vector<double>(d, p0)};
}

void GaussianParams::validate() const {
  if (!(width > 0.0) || !std::isfinite(width)) throw_invalid("gaussian: width must be positive");
  if (x0.empty()) throw_invalid("gaussian: need at least one coordinate");
  if (p0.size() != x0.size()) throw_invalid("gaussian: x0 and p0 lengths differ");
}

cplx GaussianParams::factor(std::size_t i, double x) const {
  const double u = x - x0[i];
  const double amp = std::pow(width / std::numbers::pi, 0.25) * std::exp(-0.5 * width * u * u);
  return std::polar(amp, p0[i] * u);
}

std::vector<std::string> gaussian_boundary_warnings(const GaussianParams& g,
                                                    std::span<const double> lower,
                                                    std::span<const double> upper) {
  g.validate();
  if (lower.size() != g.dim() || upper.size() != g.dim()) {
    throw_invalid("gaussian: domain does not match the dimension");
  }
  std::vector<std::string> out;
  const double margin = 3.0 / std::sqrt(g.width);
  for (std::size_t i = 0; i < g.dim(); ++i) {
    if (g.x0[i] - lower[i] < margin || upper[i] - g.x0[i] < margin) {
      out.push_back("coordinate " + std::to_string(i) + ": centre " + std::to_string(g.x0[i]) +
                    " lies within " + std::to_string(margin) + " of the boundary");
    }
  }
  return out;
}

TensorTrain initial_gaussian(const GaussianParams& g, const GridSpec& grid,
                             std::vector<std::string>* warnings) {
  g.validate();
  grid.validate();
  if (grid.order() != g.dim()) throw_invalid("initial_gaussian: grid dimension mismatch");
  std::vector<double> lo, hi;
  std::vector<std::vector<cplx>> factors;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    const GridAxis& ax = grid.axes[i];
    lo.push_back(ax.x_min);
    hi.push_back(ax.x_max);
    std::vector<cplx> f;
    for (double x : ax.nodes()) f.push_back(g.factor(i, x));
    factors.push_back(std::move(f));
  }
  if (warnings) *warnings = gaussian_boundary_warnings(g, lo, hi);
  return tt_from_rank1(factors);
}

FunctionTrain initial_gaussian(const GaussianParams& g, const std::vector<Basis>& bases,
                               std::vector<std::string>* warnings) {
  g.validate();
  if (bases.size() != g.dim()) throw_invalid("initial_gaussian: basis dimension mismatch");
  std::vector<double> lo, hi;
  std::vector<std::function<cplx(double)>> factors;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    lo.push_back(bases[i].a);
    hi.push_back(bases[i].b);
    factors.emplace_back([&g, i](double x) { return g.factor(i, x); });
  }
  if (warnings) *warnings = gaussian_boundary_warnings(g, lo, hi);
  return ft_from_rank1(bases, factors);
}

// ---- coherent state ---------------------------------------------------------------

AnalyticCoherentState AnalyticCoherentState::from_gaussian(const GaussianParams& g,
                                                           double omega, double mass) {
  g.validate();
  AnalyticCoherentState cs{omega, mass, {}};
  cs.validate();
  const double mw = mass * omega;
  if (std::abs(g.width - mw) > 1e-12 * mw) {
    throw_invalid("coherent state: Gaussian width must equal m * omega");
  }
  for (std::size_t i = 0; i < g.dim(); ++i) {
    cs.alpha0.emplace_back(std::sqrt(0.5 * mw) * g.x0[i], g.p0[i] / std::sqrt(2.0 * mw));
  }
  return cs;
}

void AnalyticCoherentState::validate() const {
  if (!(omega > 0.0)) throw_invalid("coherent state: omega must be positive");
  if (!(mass > 0.0)) throw_invalid("coherent state: mass must be positive");
}

cplx AnalyticCoherentState::alpha(std::size_t i, double t) const {
  return std::polar(1.0, -omega * t) * alpha0.at(i);
}

double AnalyticCoherentState::center(std::size_t i, double t) const {
  return std::sqrt(2.0 / (mass * omega)) * alpha(i, t).real();
}

cplx AnalyticCoherentState::factor(std::size_t i, double t, double x) const {
  const double mw = mass * omega;
  const cplx a0 = alpha0.at(i);
  const cplx at = alpha(i, t);
  const cplx shift = std::sqrt(mw) * x - at / std::numbers::sqrt2;
  const cplx expo = -0.5 * std::norm(a0) + 0.5 * mw * x * x - shift * shift;
  const double phase = -0.5 * omega * t - a0.real() * a0.imag();
  return std::pow(mw / std::numbers::pi, 0.25) * std::exp(expo) * std::polar(1.0, phase);
}

cplx coherent_state_analytic(const AnalyticCoherentState& cs, double t,
                             std::span<const double> x) {
  cs.validate();
  if (x.size() != cs.dim()) throw_invalid("coherent state: point has wrong dimension");
  cplx v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) v *= cs.factor(i, t, x[i]);
  return v;
}

TensorTrain coherent_state_tt(const AnalyticCoherentState& cs, double t, const GridSpec& grid) {
  cs.validate();
  grid.validate();
  if (grid.order() != cs.dim()) throw_invalid("coherent state: grid dimension mismatch");
  std::vector<std::vector<cplx>> factors;
  for (std::size_t i = 0; i < cs.dim(); ++i) {
    std::vector<cplx> f;
    for (double x : grid.axes[i].nodes()) f.push_back(cs.factor(i, t, x));
    factors.push_back(std::move(f));
  }
  return tt_from_rank1(factors);
}

FunctionTrain coherent_state_ft(const AnalyticCoherentState& cs, double t,
                                const std::vector<Basis>& bases) {
  cs.validate();
  if (bases.size() != cs.dim()) throw_invalid("coherent state: basis dimension mismatch");
  std::vector<std::function<cplx(double)>> factors;
  for (std::size_t i = 0; i < cs.dim(); ++i) {
    factors.emplace_back([&cs, i, t](double x) { return cs.factor(i, t, x); });
  }
  return ft_from_rank1(bases, factors);
}

// ---- overlaps -------------------------------------------------------------------

cplx survival_amplitude(const TensorTrain& psi0, const TensorTrain& psit, double volume) {
  if (psi0.dims() != psit.dims()) throw_invalid("survival_amplitude: format mismatch");
  return tt_inner(psi0, psit, volume);
}

cplx survival_amplitude(const FunctionTrain& psi0, const FunctionTrain& psit) {
  return ft_inner(psi0, psit);
}

namespace {

double combine_l2(double aa, double bb, cplx ab) {
  return std::sqrt(std::max(0.0, aa + bb - 2.0 * ab.real()));
}

}  // namespace

double l2_error(const TensorTrain& a, const TensorTrain& b, double volume) {
  if (a.dims() != b.dims()) throw_invalid("l2_error: format mismatch");
  const double na = tt_norm(a, volume);
  const double nb = tt_norm(b, volume);
  const double e = combine_l2(na * na, nb * nb, tt_inner(a, b, volume));
  if (e > kL2CancellationRatio * (na + nb)) return e;
  return tt_norm(tt_round(tt_add(a, tt_scale(b, -1.0)), 0.0), volume);
}

double l2_error(const FunctionTrain& a, const FunctionTrain& b) {
  const double na = ft_norm(a);
  const double nb = ft_norm(b);
  const double e = combine_l2(na * na, nb * nb, ft_inner(a, b));
  if (e > kL2CancellationRatio * (na + nb)) return e;
  return ft_norm(ft_round(ft_add(a, ft_scale(b, -1.0)), 0.0));
}

// ---- slices --------------------------------------------------------------------------

std::size_t nearest_node(const GridAxis& axis, double x) {
  const double k = std::round((x - axis.x_min) / axis.dx());
  if (!(k > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(k), axis.n - 1);
}

Slice2d density_slice2d(const TensorTrain& psi, const GridSpec& grid, std::size_t p,
                        std::size_t q, std::span<const std::size_t> fixed) {
  if (grid.dims() != psi.dims()) throw_invalid("density_slice2d: state does not match the grid");
  if (p == q || p >= psi.order() || q >= psi.order()) {
    throw_invalid("density_slice2d: invalid kept dimensions");
  }
  const bool swap = p > q;
  const std::size_t lo = swap ? q : p;
  const std::size_t hi = swap ? p : q;
  const std::vector<cplx> raw = tt_slice2d(psi, lo, hi, fixed);
  Slice2d s{p, q, grid.axes[p].nodes(), grid.axes[q].nodes(), {}};
  const std::size_t np = s.axis_p.size();
  const std::size_t nq = s.axis_q.size();
  s.values.resize(np * nq);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < nq; ++j)
      s.values[i * nq + j] = std::norm(swap ? raw[j * np + i] : raw[i * nq + j]);
  return s;
}

Slice2d density_slice2d(const FunctionTrain& psi, std::size_t p, std::size_t q,
                        std::span<const double> axis_p, std::span<const double> axis_q,
                        std::span<const double> fixed) {
  const std::size_t d = psi.order();
  if (p == q || p >= d || q >= d) throw_invalid("density_slice2d: invalid kept dimensions");
  if (fixed.size() != d) throw_invalid("density_slice2d: fixed coordinate list has wrong length");
  Slice2d s{p, q, {axis_p.begin(), axis_p.end()}, {axis_q.begin(), axis_q.end()}, {}};
  std::vector<double> x(fixed.begin(), fixed.end());
  for (double xp : axis_p) {
    x[p] = xp;
    for (double xq : axis_q) {
      x[q] = xq;
      s.values.push_back(std::norm(ft_eval(psi, x)));
    }
  }
  return s;
}

namespace {

/// sum_k w A[k]^H E A[k]
Mat transfer(const TtCore& c, const Mat& env, double w) {
  Mat out = Mat::Zero(static_cast<Eigen::Index>(c.right()), static_cast<Eigen::Index>(c.right()));
  for (std::size_t k = 0; k < c.mode(); ++k) {
    const auto a = linalg::slice(c, k);
    out.noalias() += w * (a.adjoint() * env * a);
  }
  return out;
}

}  // namespace

Slice2d reduced_density2d(const TensorTrain& psi, const GridSpec& grid, std::size_t p,
                          std::size_t q) {
  if (grid.dims() != psi.dims()) {
    throw_invalid("reduced_density2d: state does not match the grid");
  }
  const std::size_t d = psi.order();
  if (p == q || p >= d || q >= d) throw_invalid("reduced_density2d: invalid kept dimensions");
  const std::size_t lo = std::min(p, q);
  const std::size_t hi = std::max(p, q);

  Mat left = Mat::Ones(1, 1);
  for (std::size_t j = 0; j < lo; ++j) left = transfer(psi.core(j), left, grid.axes[j].dx());
  // Right environment, contracted from the last core inwards.
  Mat right = Mat::Ones(1, 1);
  for (std::size_t j = d; j-- > hi + 1;) {
    const TtCore& c = psi.core(j);
    Mat next = Mat::Zero(static_cast<Eigen::Index>(c.left()), static_cast<Eigen::Index>(c.left()));
    for (std::size_t k = 0; k < c.mode(); ++k) {
      const auto a = linalg::slice(c, k);
      next.noalias() += grid.axes[j].dx() * (a * right * a.adjoint());
    }
    right = std::move(next);
  }

  const TtCore& cl = psi.core(lo);
  const TtCore& ch = psi.core(hi);
  std::vector<double> raw(cl.mode() * ch.mode());
  for (std::size_t a = 0; a < cl.mode(); ++a) {
    const auto sa = linalg::slice(cl, a);
    Mat env = sa.adjoint() * left * sa;
    for (std::size_t j = lo + 1; j < hi; ++j) env = transfer(psi.core(j), env, grid.axes[j].dx());
    for (std::size_t b = 0; b < ch.mode(); ++b) {
      const auto sb = linalg::slice(ch, b);
      raw[a * ch.mode() + b] = (sb.adjoint() * env * sb * right).trace().real();
    }
  }
  Slice2d s{p, q, grid.axes[p].nodes(), grid.axes[q].nodes(), {}};
  const std::size_t np = s.axis_p.size();
  const std::size_t nq = s.axis_q.size();
  s.values.resize(np * nq);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < nq; ++j)
      s.values[i * nq + j] = p < q ? raw[i * nq + j] : raw[j * np + i];
  return s;
}

}  // namespace fttc
