#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace fttc::testing {

/// J_0(x) .. J_{n-1}(x) from the ascending power series in 700-bit floats.
/// Cancellation costs about x / ln 10 digits, so this is good up to x of a few hundred.
inline std::vector<double> bessel_power_series(std::size_t n, double x) {
  using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<700>>;
  std::vector<double> out(n, 0.0);
  const Big half = Big(x) / 2;
  const Big q = half * half;
  Big lead = 1;  // (x/2)^k / k!
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) lead = lead * half / Big(k);
    Big term = lead;
    Big sum = term;
    for (std::size_t m = 1;; ++m) {
      term = -term * q / (Big(m) * Big(m + k));
      sum += term;
      if (m > static_cast<std::size_t>(x) && abs(term) < 1e-40 * (abs(sum) + 1e-300)) break;
      if (m > 100000) break;
    }
    out[k] = static_cast<double>(sum);
  }
  return out;
}

}  // namespace fttc::testing
