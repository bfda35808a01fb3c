#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fttc/hamiltonian.hpp"
#include "fttc/tensor_train.hpp"

namespace fttc {

/// Full-grid propagators used as oracles. States are row-major arrays over the
/// grid (first coordinate slowest), matching tt_to_dense.

inline constexpr std::size_t kDenseMaxOrder = 3;
inline constexpr std::size_t kDenseMaxPoints = std::size_t{1} << 18;
/// Largest matrix side accepted by dense_hamiltonian.
inline constexpr std::size_t kDenseMaxMatrix = 4096;

enum class DenseMethod { chebyshev, clenshaw, soft, diagonalize };

struct DenseRequest {
  DenseMethod method = DenseMethod::diagonalize;
  double t = 0.0;               // chebyshev, clenshaw, diagonalize
  std::size_t n_terms = 0;      // chebyshev, clenshaw
  double dt = 0.0;              // soft
  std::size_t steps = 0;        // soft
  std::optional<SpectralBounds> bounds;
};

std::vector<double> dense_potential(const HamiltonianSpec& spec, const GridSpec& grid);

/// H psi with the spectral p^2/(2m) kinetic term applied by FFT along each axis.
std::vector<cplx> dense_apply_h(std::span<const cplx> psi, const HamiltonianSpec& spec,
                                const GridSpec& grid);

/// Real symmetric Hamiltonian matrix, row-major. Throws above kDenseMaxMatrix points.
std::vector<double> dense_hamiltonian(const HamiltonianSpec& spec, const GridSpec& grid);

/// Throws Error(invalid_argument) for d > 3 (d > 2 for diagonalize) or when the
/// grid exceeds the memory guard.
std::vector<cplx> fullgrid_reference(std::span<const cplx> psi0, const HamiltonianSpec& spec,
                                     const GridSpec& grid, const DenseRequest& request);

/// Cached eigendecomposition for repeated propagation of one system.
class DenseEigenPropagator {
 public:
  DenseEigenPropagator(const HamiltonianSpec& spec, const GridSpec& grid);

  std::vector<cplx> propagate(std::span<const cplx> psi0, double t) const;
  const std::vector<double>& eigenvalues() const noexcept { return values_; }

 private:
  std::size_t size_;
  std::vector<double> values_;
  std::vector<double> vectors_;  // column k is eigenvector k, row-major storage
};

}  // namespace fttc
