#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fttc/bessel.hpp"
#include "fttc/function_train.hpp"
#include "fttc/hamiltonian.hpp"
#include "fttc/tensor_train.hpp"

namespace fttc {

enum class Scheme { recurrence, clenshaw };

/// Magnitude below which a Bessel weight counts as negligible for auto_trim.
inline constexpr double kBesselNegligible = 1e-16;

struct ChebyshevPlan {
  double t = 0.0;
  std::size_t n_terms = 50;
  Scheme scheme = Scheme::recurrence;
  double round_tol = kDefaultRoundTol;
  std::size_t rmax = kDefaultMaxRank;
  /// Falls back to the Hamiltonian's own bounds when empty.
  std::optional<SpectralBounds> bounds;
  bool auto_trim = false;
  /// Throw Error(divergence) when the result's norm is off by more than half.
  /// Sweeps over deliberately truncated series turn this off.
  bool check_norm = true;

  /// Throws unless n_terms >= 1, t >= 0, round_tol >= 0 and rmax >= 1.
  void validate() const;
};

/// Counters filled in by a propagation call.
struct RunReport {
  std::size_t terms_used = 0;
  std::size_t max_rank = 0;
  /// Rank of the newest state tensor after each term (or step).
  std::vector<std::size_t> ranks;
  /// Largest number of state tensors held at once by the scheme.
  std::size_t live_peak = 0;
  std::size_t roundings = 0;
};

/// Number of Chebyshev terms actually evaluated for `plan` at argument t_minus.
std::size_t effective_terms(const ChebyshevPlan& plan, double t_minus);

/// e^{-i t+} sum_k (2 - delta_k0) (-i)^k J_k(t-) T_k(H0) psi0 via the
/// three-term recurrence, rounding after every H0 application and sum.
/// Throws Error(divergence) when a Chebyshev vector blows up or (with
/// plan.check_norm) the norm drifts by more than half of ||psi0||.
template <class Ham>
typename Ham::State chebyshev_propagate_recurrence(const typename Ham::State& psi0,
                                                   const Ham& h, const ChebyshevPlan& plan,
                                                   RunReport* report = nullptr);

/// Same series by the backward Clenshaw recurrence; holds at most three
/// B tensors at a time.
template <class Ham>
typename Ham::State chebyshev_propagate_clenshaw(const typename Ham::State& psi0,
                                                 const Ham& h, const ChebyshevPlan& plan,
                                                 RunReport* report = nullptr);

/// Dispatches on plan.scheme.
template <class Ham>
typename Ham::State chebyshev_propagate(const typename Ham::State& psi0, const Ham& h,
                                        const ChebyshevPlan& plan,
                                        RunReport* report = nullptr);

/// Strang split-operator stepper on the grid. The half-step potential phase
/// is built once at construction.
class SoftPropagator {
 public:
  SoftPropagator(const TtHamiltonian& h, double dt);

  double dt() const noexcept { return dt_; }
  const TensorTrain& half_phase() const noexcept { return half_phase_; }

  TensorTrain step(const TensorTrain& psi) const;
  TensorTrain run(const TensorTrain& psi0, std::size_t steps,
                  RunReport* report = nullptr) const;

 private:
  const TtHamiltonian* h_;
  double dt_;
  TensorTrain half_phase_;
  std::vector<std::vector<cplx>> kinetic_phase_;  // natural DFT order
};

TensorTrain soft_propagate(const TensorTrain& psi0, const TtHamiltonian& h, double dt,
                           std::size_t steps, RunReport* report = nullptr);

}  // namespace fttc
