#include "fttc/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Eigenvalues>

#include "fttc/error.hpp"
#include "fttc/fft.hpp"
#include "linalg.hpp"
#include "tt_detail.hpp"

namespace fttc {

namespace {

using RealMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double eval_poly(const std::array<double, 5>& c, double x) {
  double s = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) s = s * x + c[i];
  return s;
}

std::size_t poly_degree(const std::array<double, 5>& c) {
  std::size_t deg = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0.0) deg = i;
  return deg;
}

/// min and max of the polynomial over [a, b] from endpoints and real critical points.
std::pair<double, double> poly_range(const std::array<double, 5>& c, double a, double b) {
  std::vector<double> candidates{a, b};
  const std::size_t deg = poly_degree(c);
  if (deg >= 2) {
    // Roots of the derivative via its companion matrix.
    const auto m = static_cast<Eigen::Index>(deg - 1);
    const double lead = static_cast<double>(deg) * c[deg];
    // First row holds -(coefficients of x^{m-1} .. x^0) / lead.
    Eigen::MatrixXd fixed = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto power = static_cast<std::size_t>(m - 1 - j);
      fixed(0, j) = -static_cast<double>(power + 1) * c[power + 1] / lead;
    }
    for (Eigen::Index i = 1; i < m; ++i) fixed(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(fixed);
    for (Eigen::Index i = 0; i < m; ++i) {
      const std::complex<double> r = es.eigenvalues()(i);
      if (std::abs(r.imag()) <= 1e-12 * (1.0 + std::abs(r.real())) && r.real() >= a &&
          r.real() <= b) {
        candidates.push_back(r.real());
      }
    }
  }
  double lo = eval_poly(c, candidates.front());
  double hi = lo;
  for (double x : candidates) {
    const double v = eval_poly(c, x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

SpectralBounds make_bounds(double e_min, double e_max) {
  if (!(e_max > e_min)) throw_invalid("spectral bounds require E_max > E_min");
  return {e_min, e_max};
}

void check_bounds(const SpectralBounds& b) {
  if (!(b.e_max > b.e_min) || !std::isfinite(b.e_min) || !std::isfinite(b.e_max)) {
    throw_invalid("spectral bounds require finite E_max > E_min");
  }
}

}  // namespace

// ---- HamiltonianSpec -----------------------------------------------------------

void HamiltonianSpec::validate() const {
  if (!(mass > 0.0)) throw Error(ErrorKind::config, "mass must be positive");
  if (const auto* dna = std::get_if<DnaModel>(&model)) {
    if (!(dna->alpha_scale > 0.0)) throw Error(ErrorKind::config, "alpha_scale must be positive");
    if (!std::isfinite(dna->beta)) throw Error(ErrorKind::config, "beta must be finite");
  } else if (const auto* ho = std::get_if<HarmonicModel>(&model)) {
    if (!(ho->omega >= 0.0)) throw Error(ErrorKind::config, "omega must be non-negative");
  }
}

std::array<double, 5> HamiltonianSpec::onebody() const {
  if (const auto* dna = std::get_if<DnaModel>(&model)) {
    const double a = dna->alpha_scale;
    return {0.0, 0.429 * a, -1.126 * a, -0.143 * a, 0.563 * a};
  }
  const auto& ho = std::get<HarmonicModel>(model);
  return {0.0, 0.0, 0.5 * mass * ho.omega * ho.omega, 0.0, 0.0};
}

double HamiltonianSpec::coupling() const {
  if (const auto* dna = std::get_if<DnaModel>(&model)) return dna->alpha_scale * dna->beta;
  return 0.0;
}

double HamiltonianSpec::potential(std::span<const double> x) const {
  const auto c = onebody();
  const double k = coupling();
  double v = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    v += eval_poly(c, x[j]);
    if (j > 0) v += k * x[j] * x[j - 1];
  }
  return v;
}

// ---- potentials and bounds -----------------------------------------------------------

TensorTrain build_potential(const HamiltonianSpec& spec, const GridSpec& grid) {
  spec.validate();
  grid.validate();
  const auto c = spec.onebody();
  std::vector<std::vector<double>> f, x;
  for (const auto& ax : grid.axes) {
    x.push_back(ax.nodes());
    std::vector<double> fj;
    for (double xi : x.back()) fj.push_back(eval_poly(c, xi));
    f.push_back(std::move(fj));
  }
  return tt_sum_nn(f, spec.coupling(), x);
}

FunctionTrain build_potential(const HamiltonianSpec& spec, const std::vector<Basis>& bases) {
  spec.validate();
  if (bases.empty()) throw_invalid("build_potential: no dimensions");
  const auto c = spec.onebody();
  const std::size_t p = poly_degree(c) + 1;
  std::vector<Basis> out;
  std::vector<std::vector<cplx>> f, x, ones;
  for (const Basis& b : bases) {
    b.validate();
    const Basis bp = b.with_degree(p);
    out.push_back(bp);
    f.push_back(basis_project(bp, [&](double t) { return cplx(eval_poly(c, t)); }));
    x.push_back(basis_project(bp, [](double t) { return cplx(t); }));
    std::vector<cplx> one(p, 0.0);
    one[0] = std::sqrt(bp.length());
    ones.push_back(std::move(one));
  }
  return FunctionTrain(std::move(out), detail::sum_nn_train(f, spec.coupling(), x, ones));
}

SpectralBounds spectral_bounds(const HamiltonianSpec& spec, const GridSpec& grid) {
  spec.validate();
  grid.validate();
  const auto c = spec.onebody();
  double vmin = 0.0, vmax = 0.0, kin = 0.0, xb = 0.0;
  for (const auto& ax : grid.axes) {
    double lo = eval_poly(c, ax.node(0)), hi = lo;
    for (double xi : ax.nodes()) {
      lo = std::min(lo, eval_poly(c, xi));
      hi = std::max(hi, eval_poly(c, xi));
    }
    vmin += lo;
    vmax += hi;
    kin += std::numbers::pi * std::numbers::pi / (2.0 * spec.mass * ax.dx() * ax.dx());
    xb = std::max({xb, std::abs(ax.x_min), std::abs(ax.x_max)});
  }
  const double corr =
      static_cast<double>(grid.order() - 1) * std::abs(spec.coupling()) * xb * xb;
  return make_bounds(vmin - corr, vmax + corr + kin);
}

SpectralBounds spectral_bounds(const HamiltonianSpec& spec, const std::vector<Basis>& bases) {
  spec.validate();
  if (bases.empty()) throw_invalid("spectral_bounds: no dimensions");
  const auto c = spec.onebody();
  double vmin = 0.0, vmax = 0.0, kin = 0.0, xb = 0.0;
  for (const Basis& b : bases) {
    b.validate();
    const auto [lo, hi] = poly_range(c, b.a, b.b);
    vmin += lo;
    vmax += hi;
    const double dx = b.length() / static_cast<double>(b.p);
    kin += std::numbers::pi * std::numbers::pi / (2.0 * spec.mass * dx * dx);
    xb = std::max({xb, std::abs(b.a), std::abs(b.b)});
  }
  const double corr =
      static_cast<double>(bases.size() - 1) * std::abs(spec.coupling()) * xb * xb;
  return make_bounds(vmin - corr, vmax + corr + kin);
}

// ---- kinetic energy -------------------------------------------------------------------

TensorTrain apply_kinetic(const TensorTrain& psi, const HamiltonianSpec& spec,
                          const GridSpec& grid, double tol, std::size_t rmax) {
  spec.validate();
  grid.validate();
  if (psi.dims() != grid.dims()) throw_invalid("apply_kinetic: state does not match the grid");
  std::optional<TensorTrain> acc;
  for (std::size_t j = 0; j < grid.order(); ++j) {
    const Fft& fft = Fft::plan(grid.axes[j].n);
    std::vector<double> t = grid.axes[j].momenta();
    for (double& p : t) p = p * p / (2.0 * spec.mass);
    TensorTrain term = tt_mode_apply(psi, j, [&](std::span<cplx> v) { fft.forward(v); });
    term = tt_mode_apply(term, j, [&](std::span<cplx> v) {
      for (std::size_t k = 0; k < v.size(); ++k) v[k] *= t[k];
    });
    term = tt_mode_apply(term, j, [&](std::span<cplx> v) { fft.inverse(v); });
    acc = acc ? tt_round(tt_add(*acc, term), tol, rmax) : std::move(term);
  }
  return std::move(*acc);
}

FunctionTrain apply_kinetic(const FunctionTrain& psi, const HamiltonianSpec& spec, double tol,
                            std::size_t rmax) {
  spec.validate();
  return ft_laplacian(psi, spec.mass, tol, rmax);
}

// ---- TtHamiltonian ----------------------------------------------------------------------

TtHamiltonian::TtHamiltonian(HamiltonianSpec spec, GridSpec grid, double tol, std::size_t rmax)
    : spec_(std::move(spec)),
      grid_(std::move(grid)),
      tol_(tol),
      rmax_(rmax),
      bounds_(spectral_bounds(spec_, grid_)),
      potential_(build_potential(spec_, grid_)) {
  const auto c = spec_.onebody();
  for (const auto& ax : grid_.axes) {
    nodes_.push_back(ax.nodes());
    std::vector<double> f;
    for (double x : nodes_.back()) f.push_back(eval_poly(c, x));
    onebody_.push_back(std::move(f));
    std::vector<double> t = ax.momenta();
    for (double& p : t) p = p * p / (2.0 * spec_.mass);
    kinetic_.push_back(std::move(t));
  }
}

void TtHamiltonian::set_bounds(const SpectralBounds& b) {
  check_bounds(b);
  bounds_ = b;
}

TensorTrain TtHamiltonian::apply(const TensorTrain& psi, cplx shift, cplx scale, double tol,
                                 std::size_t rmax) const {
  if (psi.dims() != grid_.dims()) throw_invalid("Hamiltonian: state does not match the grid");
  std::vector<detail::ModeOperators> ops(grid_.order());
  for (std::size_t j = 0; j < grid_.order(); ++j) {
    const std::size_t n = grid_.axes[j].n;
    const Fft& fft = Fft::plan(n);
    const auto& t = kinetic_[j];
    const auto& f = onebody_[j];
    const auto& x = nodes_[j];
    ops[j].n_out = n;
    ops[j].local = [&fft, &t, &f](std::span<const cplx> in, std::span<cplx> out) {
      std::copy(in.begin(), in.end(), out.begin());
      fft.forward(out);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] *= t[k];
      fft.inverse(out);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += f[k] * in[k];
    };
    ops[j].coord = [&x](std::span<const cplx> in, std::span<cplx> out) {
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = x[k] * in[k];
    };
    ops[j].identity = [](std::span<const cplx> in, std::span<cplx> out) {
      std::copy(in.begin(), in.end(), out.begin());
    };
  }
  return tt_round(detail::local_sum_apply(psi, ops, spec_.coupling(), shift, scale), tol, rmax);
}

TensorTrain TtHamiltonian::apply_h(const TensorTrain& psi) const {
  return apply(psi, 0.0, 1.0, tol_, rmax_);
}

TensorTrain TtHamiltonian::apply_h0(const TensorTrain& psi) const {
  return apply_h0(psi, bounds_, tol_, rmax_);
}

TensorTrain TtHamiltonian::apply_h0(const TensorTrain& psi, const SpectralBounds& b, double tol,
                                    std::size_t rmax) const {
  check_bounds(b);
  return apply(psi, b.center(), 1.0 / b.half_width(), tol, rmax);
}

TensorTrain TtHamiltonian::round(const TensorTrain& a, double tol, std::size_t rmax) const {
  return tt_round(a, tol, rmax);
}

cplx TtHamiltonian::inner(const TensorTrain& a, const TensorTrain& b) const {
  return tt_inner(a, b, volume());
}

double TtHamiltonian::norm(const TensorTrain& a) const { return tt_norm(a, volume()); }

// ---- FtHamiltonian ----------------------------------------------------------------------

struct FtHamiltonian::ModeMatrices {
  RealMat local;  // filtered stiffness / (2m) + Galerkin product with f
  RealMat coord;  // Galerkin product with x
  std::size_t kept = 0;
};

FtHamiltonian::FtHamiltonian(HamiltonianSpec spec, std::vector<Basis> bases, double tol,
                             std::size_t rmax)
    : spec_(std::move(spec)),
      bases_(std::move(bases)),
      tol_(tol),
      rmax_(rmax),
      bounds_(spectral_bounds(spec_, bases_)),
      potential_(build_potential(spec_, bases_)),
      modes_(std::make_shared<std::vector<ModeMatrices>>()) {
  const auto c = spec_.onebody();
  const std::size_t fdeg = poly_degree(c);
  for (const Basis& b : bases_) {
    const auto p = static_cast<Eigen::Index>(b.p);
    ModeMatrices m;
    // K = D1^T D1 / (2m) is the weak form of -d2/dx2 / (2m); eigenmodes above the
    // equivalent-grid cutoff are dropped so the spectrum stays inside the bounds.
    const auto d1v = basis_diff_matrix(b, 1);
    const Eigen::Map<const RealMat> d1(d1v.data(), p, p);
    const RealMat k = d1.transpose() * d1 / (2.0 * spec_.mass);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    if (es.info() != Eigen::Success) throw_numerical("FtHamiltonian: stiffness eigensolver failed");
    const double dx = b.length() / static_cast<double>(b.p);
    const double cutoff = std::numbers::pi * std::numbers::pi / (2.0 * spec_.mass * dx * dx);
    m.local = RealMat::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
      const double lam = es.eigenvalues()(i);
      if (lam > cutoff) continue;
      m.local += lam * es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
      ++m.kept;
    }
    const auto fc = basis_project(b.with_degree(fdeg + 1),
                                  [&](double x) { return cplx(eval_poly(c, x)); });
    const auto xc = basis_project(b.with_degree(2), [](double x) { return cplx(x); });
    const auto mf = basis_product_matrix(b, fc, b.p);
    const auto mx = basis_product_matrix(b, xc, b.p);
    m.coord = RealMat::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        const auto idx = static_cast<std::size_t>(i * p + j);
        m.local(i, j) += mf[idx].real();
        m.coord(i, j) = mx[idx].real();
      }
    }
    m.local = 0.5 * (m.local + m.local.transpose()).eval();
    m.coord = 0.5 * (m.coord + m.coord.transpose()).eval();
    modes_->push_back(std::move(m));
  }
}

void FtHamiltonian::set_bounds(const SpectralBounds& b) {
  check_bounds(b);
  bounds_ = b;
}

std::size_t FtHamiltonian::kinetic_modes(std::size_t dim) const { return modes_->at(dim).kept; }

FunctionTrain FtHamiltonian::apply(const FunctionTrain& psi, cplx shift, cplx scale, double tol,
                                   std::size_t rmax) const {
  if (psi.order() != bases_.size()) throw_invalid("Hamiltonian: state has wrong dimension");
  std::vector<detail::ModeOperators> ops(bases_.size());
  std::vector<TtCore> cores;
  for (std::size_t j = 0; j < bases_.size(); ++j) {
    if (!psi.basis(j).same_domain(bases_[j])) {
      throw_invalid("Hamiltonian: state domain mismatch in dimension " + std::to_string(j));
    }
    const std::size_t p = bases_[j].p;
    auto matvec = [p](const RealMat& m) {
      return [&m, p](std::span<const cplx> in, std::span<cplx> out) {
        for (std::size_t k = 0; k < p; ++k) {
          cplx s = 0.0;
          const double* row = m.data() + k * p;
          for (std::size_t l = 0; l < p; ++l) s += row[l] * in[l];
          out[k] = s;
        }
      };
    };
    ops[j].n_out = p;
    ops[j].local = matvec((*modes_)[j].local);
    ops[j].coord = matvec((*modes_)[j].coord);
    ops[j].identity = [](std::span<const cplx> in, std::span<cplx> out) {
      std::copy(in.begin(), in.end(), out.begin());
    };
  }
  // Work at the Hamiltonian's degree: pad trimmed states, project richer ones.
  std::vector<std::size_t> degrees;
  bool same = true;
  for (std::size_t j = 0; j < bases_.size(); ++j) {
    degrees.push_back(bases_[j].p);
    same = same && psi.basis(j).p == bases_[j].p;
  }
  std::optional<FunctionTrain> resized;
  if (!same) resized = ft_resize_degree(psi, degrees);
  const FunctionTrain* in = resized ? &*resized : &psi;
  TensorTrain coeffs = detail::local_sum_apply(in->coeffs(), ops, spec_.coupling(), shift, scale);
  return round(FunctionTrain(bases_, std::move(coeffs)), tol, rmax);
}

FunctionTrain FtHamiltonian::apply_h(const FunctionTrain& psi) const {
  return apply(psi, 0.0, 1.0, tol_, rmax_);
}

FunctionTrain FtHamiltonian::apply_h0(const FunctionTrain& psi) const {
  return apply_h0(psi, bounds_, tol_, rmax_);
}

FunctionTrain FtHamiltonian::apply_h0(const FunctionTrain& psi, const SpectralBounds& b,
                                      double tol, std::size_t rmax) const {
  check_bounds(b);
  return apply(psi, b.center(), 1.0 / b.half_width(), tol, rmax);
}

FunctionTrain FtHamiltonian::round(const FunctionTrain& a, double tol, std::size_t rmax) const {
  return ft_trim_degree(ft_round(a, tol, rmax));
}

cplx FtHamiltonian::inner(const FunctionTrain& a, const FunctionTrain& b) const {
  return ft_inner(a, b);
}

double FtHamiltonian::norm(const FunctionTrain& a) const { return ft_norm(a); }

}  // namespace fttc
