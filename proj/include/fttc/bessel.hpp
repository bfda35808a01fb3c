#pragma once

#include <cstddef>
#include <vector>

namespace fttc {

/// J_0(x) .. J_{N-1}(x).
struct BesselTable {
  std::size_t n = 0;
  double x = 0.0;
  std::vector<double> values;
};

/// Miller downward recurrence normalized by J_0 + 2 sum_k J_2k = 1.
/// Requires n >= 1 and x >= 0.
BesselTable bessel_j_sequence(std::size_t n, double x);

/// Start order used by bessel_j_sequence.
std::size_t bessel_start_order(std::size_t n, double x);

}  // namespace fttc
