#include "fttc/dense_reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

#include "fttc/bessel.hpp"
#include "fttc/error.hpp"
#include "fttc/fft.hpp"

namespace fttc {

namespace {

std::size_t checked_size(const GridSpec& grid, std::size_t max_order) {
  grid.validate();
  if (grid.order() > max_order) {
    throw_invalid("dense reference supports at most " + std::to_string(max_order) +
                  " dimensions");
  }
  std::size_t total = 1;
  for (const auto& ax : grid.axes) {
    total *= ax.n;
    if (total > kDenseMaxPoints) throw_invalid("dense reference: grid exceeds the memory guard");
  }
  return total;
}

/// Apply `op` in place to every fiber along axis j.
void for_each_fiber(std::vector<cplx>& v, const GridSpec& grid, std::size_t j,
                    const std::function<void(std::span<cplx>)>& op) {
  const std::size_t n = grid.axes[j].n;
  std::size_t inner = 1;
  for (std::size_t k = j + 1; k < grid.order(); ++k) inner *= grid.axes[k].n;
  const std::size_t outer = v.size() / (n * inner);
  std::vector<cplx> fiber(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      for (std::size_t k = 0; k < n; ++k) fiber[k] = v[base + k * inner];
      op(fiber);
      for (std::size_t k = 0; k < n; ++k) v[base + k * inner] = fiber[k];
    }
  }
}

std::vector<double> kinetic_diag(const GridAxis& ax, double mass) {
  std::vector<double> t = ax.momenta();
  for (double& p : t) p = p * p / (2.0 * mass);
  return t;
}

std::vector<cplx> kinetic_apply(std::span<const cplx> psi, const HamiltonianSpec& spec,
                                const GridSpec& grid) {
  std::vector<cplx> out(psi.size(), 0.0);
  for (std::size_t j = 0; j < grid.order(); ++j) {
    std::vector<cplx> term(psi.begin(), psi.end());
    const Fft& fft = Fft::plan(grid.axes[j].n);
    const auto t = kinetic_diag(grid.axes[j], spec.mass);
    for_each_fiber(term, grid, j, [&](std::span<cplx> f) {
      fft.forward(f);
      for (std::size_t k = 0; k < f.size(); ++k) f[k] *= t[k];
      fft.inverse(f);
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += term[i];
  }
  return out;
}

cplx neg_i_pow(std::size_t k) {
  static const cplx table[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return table[k % 4];
}

std::vector<cplx> dense_chebyshev(std::span<const cplx> psi0, const HamiltonianSpec& spec,
                                  const GridSpec& grid, const DenseRequest& req, bool clenshaw) {
  if (req.n_terms < 1) throw_invalid("dense chebyshev: need at least one term");
  if (!(req.t >= 0.0)) throw_invalid("dense chebyshev: t must be >= 0");
  const SpectralBounds b = req.bounds ? *req.bounds : spectral_bounds(spec, grid);
  const double c = b.center();
  const double hw = b.half_width();
  const auto h0 = [&](std::span<const cplx> v) {
    std::vector<cplx> hv = dense_apply_h(v, spec, grid);
    for (std::size_t i = 0; i < hv.size(); ++i) hv[i] = (hv[i] - c * v[i]) / hw;
    return hv;
  };
  const std::size_t n = req.n_terms;
  const auto J = bessel_j_sequence(n, b.t_minus(req.t)).values;
  const std::size_t size = psi0.size();
  std::vector<cplx> acc(size, 0.0);
  if (clenshaw) {
    std::vector<cplx> b1(size, 0.0), b2(size, 0.0);
    for (std::size_t r = n; r-- > 0;) {
      std::vector<cplx> br = h0(b1);
      const cplx w = neg_i_pow(r) * J[r];
      for (std::size_t i = 0; i < size; ++i) br[i] = 2.0 * br[i] - b2[i] + w * psi0[i];
      if (r == 0) {
        for (std::size_t i = 0; i < size; ++i) acc[i] = br[i] - b2[i];
        break;
      }
      b2 = std::move(b1);
      b1 = std::move(br);
    }
  } else {
    std::vector<cplx> prev(psi0.begin(), psi0.end());
    for (std::size_t i = 0; i < size; ++i) acc[i] = J[0] * prev[i];
    if (n > 1) {
      std::vector<cplx> cur = h0(prev);
      for (std::size_t k = 1; k < n; ++k) {
        if (k > 1) {
          std::vector<cplx> next = h0(cur);
          for (std::size_t i = 0; i < size; ++i) next[i] = 2.0 * next[i] - prev[i];
          prev = std::move(cur);
          cur = std::move(next);
        }
        const cplx w = 2.0 * neg_i_pow(k) * J[k];
        for (std::size_t i = 0; i < size; ++i) acc[i] += w * cur[i];
      }
    }
  }
  const cplx phase = std::polar(1.0, -b.t_plus(req.t));
  for (auto& v : acc) v *= phase;
  return acc;
}

std::vector<cplx> dense_soft(std::span<const cplx> psi0, const HamiltonianSpec& spec,
                             const GridSpec& grid, const DenseRequest& req) {
  if (!(req.dt > 0.0)) throw_invalid("dense soft: dt must be positive");
  if (req.steps < 1) throw_invalid("dense soft: need at least one step");
  const std::vector<double> v = dense_potential(spec, grid);
  std::vector<cplx> half(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) half[i] = std::polar(1.0, -0.5 * req.dt * v[i]);
  std::vector<std::vector<cplx>> kphase;
  for (const auto& ax : grid.axes) {
    std::vector<cplx> ph;
    for (double t : kinetic_diag(ax, spec.mass)) ph.push_back(std::polar(1.0, -req.dt * t));
    kphase.push_back(std::move(ph));
  }
  std::vector<cplx> psi(psi0.begin(), psi0.end());
  for (std::size_t s = 0; s < req.steps; ++s) {
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= half[i];
    for (std::size_t j = 0; j < grid.order(); ++j) {
      const Fft& fft = Fft::plan(grid.axes[j].n);
      const auto& ph = kphase[j];
      for_each_fiber(psi, grid, j, [&](std::span<cplx> f) {
        fft.forward(f);
        for (std::size_t k = 0; k < f.size(); ++k) f[k] *= ph[k];
        fft.inverse(f);
      });
    }
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= half[i];
  }
  return psi;
}

}  // namespace

std::vector<double> dense_potential(const HamiltonianSpec& spec, const GridSpec& grid) {
  const std::size_t total = checked_size(grid, kDenseMaxOrder);
  std::vector<double> out(total);
  std::vector<std::vector<double>> nodes;
  for (const auto& ax : grid.axes) nodes.push_back(ax.nodes());
  std::vector<double> x(grid.order());
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t j = grid.order(); j-- > 0;) {
      x[j] = nodes[j][rest % grid.axes[j].n];
      rest /= grid.axes[j].n;
    }
    out[flat] = spec.potential(x);
  }
  return out;
}

std::vector<cplx> dense_apply_h(std::span<const cplx> psi, const HamiltonianSpec& spec,
                                const GridSpec& grid) {
  const std::size_t total = checked_size(grid, kDenseMaxOrder);
  if (psi.size() != total) throw_invalid("dense_apply_h: state does not match the grid");
  std::vector<cplx> out = kinetic_apply(psi, spec, grid);
  const std::vector<double> v = dense_potential(spec, grid);
  for (std::size_t i = 0; i < total; ++i) out[i] += v[i] * psi[i];
  return out;
}

std::vector<double> dense_hamiltonian(const HamiltonianSpec& spec, const GridSpec& grid) {
  const std::size_t total = checked_size(grid, kDenseMaxOrder);
  if (total > kDenseMaxMatrix) throw_invalid("dense_hamiltonian: matrix too large");
  std::vector<double> h(total * total);
  std::vector<cplx> unit(total, 0.0);
  for (std::size_t col = 0; col < total; ++col) {
    unit[col] = 1.0;
    const std::vector<cplx> hc = dense_apply_h(unit, spec, grid);
    unit[col] = 0.0;
    for (std::size_t row = 0; row < total; ++row) {
      if (std::abs(hc[row].imag()) > 1e-9 * (1.0 + std::abs(hc[row].real()))) {
        throw_numerical("dense_hamiltonian: matrix is not real");
      }
      h[row * total + col] = hc[row].real();
    }
  }
  return h;
}

DenseEigenPropagator::DenseEigenPropagator(const HamiltonianSpec& spec, const GridSpec& grid) {
  if (grid.order() > 2) throw_invalid("diagonalize supports at most 2 dimensions");
  const std::vector<double> h = dense_hamiltonian(spec, grid);
  size_ = grid.dims().empty() ? 0 : static_cast<std::size_t>(std::sqrt(h.size()) + 0.5);
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto n = static_cast<Eigen::Index>(size_);
  RowMat m = Eigen::Map<const RowMat>(h.data(), n, n);
  RowMat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<RowMat> es(sym);
  if (es.info() != Eigen::Success) throw_numerical("diagonalize: eigensolver failed");
  values_.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  RowMat vecs = es.eigenvectors();
  vectors_.assign(vecs.data(), vecs.data() + vecs.size());
}

std::vector<cplx> DenseEigenPropagator::propagate(std::span<const cplx> psi0, double t) const {
  if (psi0.size() != size_) throw_invalid("diagonalize: state does not match the grid");
  const auto n = static_cast<Eigen::Index>(size_);
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> v(vectors_.data(), n, n);
  Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(psi0.data(), n);
  Eigen::VectorXcd coef = v.transpose().cast<cplx>() * x;
  for (Eigen::Index k = 0; k < n; ++k) coef(k) *= std::polar(1.0, -values_[k] * t);
  Eigen::VectorXcd out = v.cast<cplx>() * coef;
  return {out.data(), out.data() + n};
}

std::vector<cplx> fullgrid_reference(std::span<const cplx> psi0, const HamiltonianSpec& spec,
                                     const GridSpec& grid, const DenseRequest& request) {
  spec.validate();
  const std::size_t total = checked_size(grid, kDenseMaxOrder);
  if (psi0.size() != total) throw_invalid("fullgrid_reference: state does not match the grid");
  switch (request.method) {
    case DenseMethod::chebyshev: return dense_chebyshev(psi0, spec, grid, request, false);
    case DenseMethod::clenshaw: return dense_chebyshev(psi0, spec, grid, request, true);
    case DenseMethod::soft: return dense_soft(psi0, spec, grid, request);
    case DenseMethod::diagonalize:
      return DenseEigenPropagator(spec, grid).propagate(psi0, request.t);
  }
  throw_invalid("fullgrid_reference: unknown method");
}

}  // namespace fttc
