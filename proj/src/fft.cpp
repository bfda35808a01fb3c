#include "fttc/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "fttc/error.hpp"
#include "fttc/tensor_train.hpp"

namespace fttc {

Fft::Fft(std::size_t n) : n_(n), bitrev_(n), twiddle_(n / 2) {
  if (!is_power_of_two(n)) throw_invalid("FFT size must be a power of two");
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
    bitrev_[i] = r;
  }
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    twiddle_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void Fft::forward(std::span<std::complex<double>> x) const { transform(x, false); }

void Fft::inverse(std::span<std::complex<double>> x) const {
  transform(x, true);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : x) v *= scale;
}

void Fft::transform(std::span<std::complex<double>> x, bool inverse) const {
  if (x.size() != n_) throw_invalid("FFT input length does not match plan");
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bitrev_[i]) std::swap(x[i], x[bitrev_[i]]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = twiddle_[k * step];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = x[start + k];
        const std::complex<double> v = w * x[start + k + half];
        x[start + k] = u + v;
        x[start + k + half] = u - v;
      }
    }
  }
}

const Fft& Fft::plan(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<Fft>> plans;
  std::lock_guard lock(mutex);
  auto& slot = plans[n];
  if (!slot) slot = std::make_unique<Fft>(n);
  return *slot;
}

}  // namespace fttc
