#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fttc {

/// Iterative radix-2 FFT with precomputed twiddles and bit-reversal table.
///
/// forward: X_k = sum_j x_j exp(-2 pi i jk/n); inverse includes the 1/n factor.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  void forward(std::span<std::complex<double>> x) const;
  void inverse(std::span<std::complex<double>> x) const;

  /// Shared plan for size n (thread-safe lookup).
  static const Fft& plan(std::size_t n);

 private:
  void transform(std::span<std::complex<double>> x, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;  // exp(-2 pi i k/n), k < n/2
};

}  // namespace fttc
