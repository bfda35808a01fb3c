#pragma once

// Builders shared by the discrete and functional trains. Internal.

#include <functional>
#include <span>
#include <vector>

#include "fttc/tensor_train.hpp"

namespace fttc::detail {

/// Rank-3 nearest-neighbour sum train over arbitrary mode vectors. `ones[j]` is
/// the mode-j representation of the constant 1 (all-ones on a grid, a scaled
/// unit vector in an orthonormal polynomial basis).
TensorTrain sum_nn_train(std::span<const std::vector<cplx>> onebody, cplx coupling,
                         std::span<const std::vector<cplx>> coords,
                         std::span<const std::vector<cplx>> ones);

/// Linear map from a length-n_in fiber to a length-n_out fiber.
using FiberOp = std::function<void(std::span<const cplx>, std::span<cplx>)>;

struct ModeOperators {
  std::size_t n_out = 0;
  FiberOp local;     // one-body term acting on this mode
  FiberOp coord;     // coupling factor; unused when coupling == 0
  FiberOp identity;  // embedding of n_in into n_out
};

/// scale * (sum_j L_j + coupling * sum_j X_{j-1} X_j - shift) psi as an exact
/// block train. Interior ranks grow by 3 (2 when coupling == 0).
TensorTrain local_sum_apply(const TensorTrain& psi,
                            std::span<const ModeOperators> ops, cplx coupling,
                            cplx shift, cplx scale);

/// Apply `op` to every fiber of one core.
TtCore apply_to_fibers(const TtCore& core, std::size_t n_out, const FiberOp& op);

}  // namespace fttc::detail
