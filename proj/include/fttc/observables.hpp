#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fttc/function_train.hpp"
#include "fttc/tensor_train.hpp"

namespace fttc {

/// Product Gaussian prod_i (w/pi)^{1/4} exp(-(w/2)(x_i - x0_i)^2 + i p0_i (x_i - x0_i)).
struct GaussianParams {
  double width = 1.0;
  std::vector<double> x0;
  std::vector<double> p0;

  std::size_t dim() const noexcept { return x0.size(); }
  /// Same width, x0 and p0 broadcast over `d` coordinates.
  static GaussianParams uniform(std::size_t d, double width, double x0, double p0);
  /// Throws unless width > 0 and x0, p0 are non-empty with equal length.
  void validate() const;
  /// One-dimensional factor for coordinate i.
  cplx factor(std::size_t i, double x) const;
};

/// Coordinates whose centre lies within 3/sqrt(w) of a domain boundary.
std::vector<std::string> gaussian_boundary_warnings(const GaussianParams& g,
                                                    std::span<const double> lower,
                                                    std::span<const double> upper);

TensorTrain initial_gaussian(const GaussianParams& g, const GridSpec& grid,
                             std::vector<std::string>* warnings = nullptr);
FunctionTrain initial_gaussian(const GaussianParams& g, const std::vector<Basis>& bases,
                               std::vector<std::string>* warnings = nullptr);

/// Harmonic-oscillator coherent state with per-coordinate displacement alpha0.
struct AnalyticCoherentState {
  double omega = 1.0;
  double mass = 1.0;
  std::vector<cplx> alpha0;

  std::size_t dim() const noexcept { return alpha0.size(); }
  /// alpha0_i = sqrt(m omega / 2) x0_i + i p0_i / sqrt(2 m omega); requires w = m omega.
  static AnalyticCoherentState from_gaussian(const GaussianParams& g, double omega,
                                             double mass);
  void validate() const;
  cplx alpha(std::size_t i, double t) const;
  /// Mean position of coordinate i at time t.
  double center(std::size_t i, double t) const;
  cplx factor(std::size_t i, double t, double x) const;
};

cplx coherent_state_analytic(const AnalyticCoherentState& cs, double t,
                             std::span<const double> x);

/// Rank-1 samples of the analytic state at the grid nodes.
TensorTrain coherent_state_tt(const AnalyticCoherentState& cs, double t, const GridSpec& grid);
/// Rank-1 projection of the analytic state on the bases.
FunctionTrain coherent_state_ft(const AnalyticCoherentState& cs, double t,
                                const std::vector<Basis>& bases);

/// <psi0|psit> including the volume element.
cplx survival_amplitude(const TensorTrain& psi0, const TensorTrain& psit, double volume);
/// <psi0|psit> by exact integration.
cplx survival_amplitude(const FunctionTrain& psi0, const FunctionTrain& psit);

/// Below this fraction of ||a|| + ||b|| the inner-product formula has lost
/// most of its digits and l2_error switches to the orthogonalized difference.
inline constexpr double kL2CancellationRatio = 1e-4;

/// sqrt(<a|a> + <b|b> - 2 Re <a|b>), clamped at 0. Small results are
/// recomputed as the norm of the orthogonalized train a - b.
double l2_error(const TensorTrain& a, const TensorTrain& b, double volume);
double l2_error(const FunctionTrain& a, const FunctionTrain& b);

/// |psi|^2 on a 2-D lattice, row index along axis p.
struct Slice2d {
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<double> axis_p;
  std::vector<double> axis_q;
  std::vector<double> values;  // axis_p.size() x axis_q.size(), row-major

  double at(std::size_t i, std::size_t j) const { return values[i * axis_q.size() + j]; }
};

/// Grid node index nearest to x on `axis`.
std::size_t nearest_node(const GridAxis& axis, double x);

/// `fixed` holds one grid index per mode; entries p and q are ignored.
Slice2d density_slice2d(const TensorTrain& psi, const GridSpec& grid, std::size_t p,
                        std::size_t q, std::span<const std::size_t> fixed);
/// `fixed` holds one coordinate per dimension; entries p and q are ignored.
Slice2d density_slice2d(const FunctionTrain& psi, std::size_t p, std::size_t q,
                        std::span<const double> axis_p, std::span<const double> axis_q,
                        std::span<const double> fixed);

/// Integral of |psi|^2 over every coordinate except p and q.
Slice2d reduced_density2d(const TensorTrain& psi, const GridSpec& grid, std::size_t p,
                          std::size_t q);

}  // namespace fttc
