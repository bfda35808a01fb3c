#pragma once

#include <array>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "fttc/function_train.hpp"
#include "fttc/tensor_train.hpp"

namespace fttc {

/// alpha_scale * (0.429 x - 1.126 x^2 - 0.143 x^3 + 0.563 x^4) per coordinate
/// plus alpha_scale * beta * x_j x_{j-1} between neighbours.
struct DnaModel {
  double alpha_scale = 0.1;
  double beta = -2.0;
};

/// m omega^2 x^2 / 2 per coordinate, no coupling.
struct HarmonicModel {
  double omega = 1.0;
};

using PotentialModel = std::variant<DnaModel, HarmonicModel>;

struct HamiltonianSpec {
  double mass = 1.0;
  PotentialModel model = DnaModel{};

  /// Throws unless mass > 0, alpha_scale > 0 (dna) and omega >= 0 (harmonic;
  /// omega = 0 is the free particle).
  void validate() const;
  /// Monomial coefficients c_0..c_4 of the one-body term.
  std::array<double, 5> onebody() const;
  /// Nearest-neighbour coupling constant (alpha_scale * beta, or 0).
  double coupling() const;
  /// V(x) by the closed formula.
  double potential(std::span<const double> x) const;
};

struct SpectralBounds {
  double e_min = 0.0;
  double e_max = 1.0;

  double center() const noexcept { return 0.5 * (e_max + e_min); }
  double half_width() const noexcept { return 0.5 * (e_max - e_min); }
  double t_plus(double t) const noexcept { return t * center(); }
  double t_minus(double t) const noexcept { return t * half_width(); }
};

TensorTrain build_potential(const HamiltonianSpec& spec, const GridSpec& grid);
/// Exact coefficients on the given domains; the degree of each returned basis
/// is 5 (dna) or 3 (harmonic) regardless of the degree passed in.
FunctionTrain build_potential(const HamiltonianSpec& spec, const std::vector<Basis>& bases);

SpectralBounds spectral_bounds(const HamiltonianSpec& spec, const GridSpec& grid);
SpectralBounds spectral_bounds(const HamiltonianSpec& spec, const std::vector<Basis>& bases);

/// T psi via per-mode FFT, p^2/(2m) and inverse FFT, accumulated over
/// dimensions in index order with a rounding after each addition.
TensorTrain apply_kinetic(const TensorTrain& psi, const HamiltonianSpec& spec,
                          const GridSpec& grid, double tol = kDefaultRoundTol,
                          std::size_t rmax = kUnboundedRank);
/// T psi via ft_laplacian.
FunctionTrain apply_kinetic(const FunctionTrain& psi, const HamiltonianSpec& spec,
                            double tol = kDefaultRoundTol,
                            std::size_t rmax = kUnboundedRank);

/// Grid Hamiltonian acting on discrete tensor trains.
class TtHamiltonian {
 public:
  using State = TensorTrain;

  TtHamiltonian(HamiltonianSpec spec, GridSpec grid, double tol = kDefaultRoundTol,
                std::size_t rmax = kDefaultMaxRank);

  const HamiltonianSpec& spec() const noexcept { return spec_; }
  const GridSpec& grid() const noexcept { return grid_; }
  const SpectralBounds& bounds() const noexcept { return bounds_; }
  /// Replace the automatically computed bounds. Throws unless e_max > e_min.
  void set_bounds(const SpectralBounds& b);
  double tol() const noexcept { return tol_; }
  std::size_t rmax() const noexcept { return rmax_; }
  const TensorTrain& potential() const noexcept { return potential_; }
  double volume() const { return grid_.volume_element(); }

  /// H psi, rounded.
  TensorTrain apply_h(const TensorTrain& psi) const;
  /// (2/(E_max - E_min)) (H - (E_max + E_min)/2) psi, rounded.
  TensorTrain apply_h0(const TensorTrain& psi) const;
  TensorTrain apply_h0(const TensorTrain& psi, const SpectralBounds& b, double tol,
                       std::size_t rmax) const;

  TensorTrain round(const TensorTrain& a) const { return round(a, tol_, rmax_); }
  TensorTrain round(const TensorTrain& a, double tol, std::size_t rmax) const;
  cplx inner(const TensorTrain& a, const TensorTrain& b) const;
  double norm(const TensorTrain& a) const;

 private:
  TensorTrain apply(const TensorTrain& psi, cplx shift, cplx scale, double tol,
                    std::size_t rmax) const;

  HamiltonianSpec spec_;
  GridSpec grid_;
  double tol_;
  std::size_t rmax_;
  SpectralBounds bounds_;
  TensorTrain potential_;
  std::vector<std::vector<double>> onebody_;  // f_j at the nodes
  std::vector<std::vector<double>> nodes_;
  std::vector<std::vector<double>> kinetic_;  // p^2/(2m), natural DFT order
};

/// Legendre-Galerkin Hamiltonian acting on function trains at the degrees of
/// `bases`. Each mode carries the weak-form kinetic matrix restricted to its
/// eigenmodes below pi^2 / (2 m dx^2), dx = (b - a) / p, and Galerkin products
/// with the potential terms. The operator is Hermitian in the coefficient inner
/// product and its spectrum lies inside spectral_bounds(spec, bases).
/// apply_kinetic(FunctionTrain) is the unfiltered strong form and differs from
/// this operator in the discarded modes.
class FtHamiltonian {
 public:
  using State = FunctionTrain;

  FtHamiltonian(HamiltonianSpec spec, std::vector<Basis> bases, double tol = kDefaultRoundTol,
                std::size_t rmax = kDefaultMaxRank);

  const HamiltonianSpec& spec() const noexcept { return spec_; }
  const std::vector<Basis>& bases() const noexcept { return bases_; }
  const SpectralBounds& bounds() const noexcept { return bounds_; }
  void set_bounds(const SpectralBounds& b);
  double tol() const noexcept { return tol_; }
  std::size_t rmax() const noexcept { return rmax_; }
  const FunctionTrain& potential() const noexcept { return potential_; }
  /// Number of kinetic eigenmodes kept in dimension `dim`.
  std::size_t kinetic_modes(std::size_t dim) const;

  FunctionTrain apply_h(const FunctionTrain& psi) const;
  FunctionTrain apply_h0(const FunctionTrain& psi) const;
  FunctionTrain apply_h0(const FunctionTrain& psi, const SpectralBounds& b, double tol,
                         std::size_t rmax) const;

  /// Rank rounding followed by coefficient tail trimming.
  FunctionTrain round(const FunctionTrain& a) const { return round(a, tol_, rmax_); }
  FunctionTrain round(const FunctionTrain& a, double tol, std::size_t rmax) const;
  cplx inner(const FunctionTrain& a, const FunctionTrain& b) const;
  double norm(const FunctionTrain& a) const;

 private:
  struct ModeMatrices;
  FunctionTrain apply(const FunctionTrain& psi, cplx shift, cplx scale, double tol,
                      std::size_t rmax) const;

  HamiltonianSpec spec_;
  std::vector<Basis> bases_;
  double tol_;
  std::size_t rmax_;
  SpectralBounds bounds_;
  FunctionTrain potential_;
  std::shared_ptr<std::vector<ModeMatrices>> modes_;
};

}  // namespace fttc
