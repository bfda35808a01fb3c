#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fttc {

using cplx = std::complex<double>;

/// Sentinel for "no rank cap" in rounding.
inline constexpr std::size_t kUnboundedRank =
    std::numeric_limits<std::size_t>::max();

inline constexpr double kDefaultRoundTol = 1e-10;
inline constexpr std::size_t kDefaultMaxRank = 256;

/// One 3-way TT core, stored row-major as (left, mode, right).
class TtCore {
 public:
  TtCore() = default;
  TtCore(std::size_t left, std::size_t mode, std::size_t right)
      : left_(left), mode_(mode), right_(right), data_(left * mode * right) {}
  TtCore(std::size_t left, std::size_t mode, std::size_t right,
         std::vector<cplx> data);

  std::size_t left() const noexcept { return left_; }
  std::size_t mode() const noexcept { return mode_; }
  std::size_t right() const noexcept { return right_; }
  std::size_t size() const noexcept { return data_.size(); }

  cplx& operator()(std::size_t i, std::size_t k, std::size_t j) {
    return data_[(i * mode_ + k) * right_ + j];
  }
  const cplx& operator()(std::size_t i, std::size_t k, std::size_t j) const {
    return data_[(i * mode_ + k) * right_ + j];
  }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

 private:
  std::size_t left_ = 0;
  std::size_t mode_ = 0;
  std::size_t right_ = 0;
  std::vector<cplx> data_;
};

/// Discrete tensor train: W[k1..kd] = W1[k1] W2[k2] ... Wd[kd].
///
/// Values are immutable once constructed; every operation below returns a new
/// train. The boundary ranks are always 1 and adjacent cores agree on their
/// shared bond. The zero train is stored as all-zero rank-1 cores.
class TensorTrain {
 public:
  /// Validates shapes and finiteness; throws fttc::Error otherwise.
  explicit TensorTrain(std::vector<TtCore> cores);

  static TensorTrain zeros(std::span<const std::size_t> dims);
  static TensorTrain ones(std::span<const std::size_t> dims);

  std::size_t order() const noexcept { return cores_.size(); }
  const TtCore& core(std::size_t k) const { return cores_.at(k); }
  std::span<const TtCore> cores() const noexcept { return cores_; }

  std::vector<std::size_t> dims() const;
  /// r_0 .. r_d.
  std::vector<std::size_t> ranks() const;
  std::size_t max_rank() const;
  /// Number of stored complex values.
  std::size_t storage() const;

  /// Move the cores out, e.g. to build a modified train.
  std::vector<TtCore> release() && { return std::move(cores_); }

 private:
  std::vector<TtCore> cores_;
};

/// Uniform periodic grid along one coordinate.
struct GridAxis {
  double x_min = -5.0;
  double x_max = 5.0;
  std::size_t n = 32;

  double dx() const { return (x_max - x_min) / static_cast<double>(n); }
  double dp() const;
  double node(std::size_t k) const { return x_min + static_cast<double>(k) * dx(); }
  std::vector<double> nodes() const;
  /// Momenta in natural DFT order: 0, dp, ..., (n/2-1) dp, -n/2 dp, ..., -dp.
  std::vector<double> momenta() const;
};

struct GridSpec {
  std::vector<GridAxis> axes;

  static GridSpec uniform(std::size_t d, double x_min, double x_max,
                          std::size_t n);

  std::size_t order() const noexcept { return axes.size(); }
  std::vector<std::size_t> dims() const;
  /// Product of the dx_j.
  double volume_element() const;
  /// Throws unless x_max > x_min and n is a power of two >= 2 on every axis.
  void validate() const;
};

bool is_power_of_two(std::size_t n) noexcept;

// ---- construction -------------------------------------------------------

TensorTrain tt_from_rank1(std::span<const std::vector<cplx>> factors);

/// Exact rank-3 train of sum_j f_j[k_j] + c * sum_{j>=1} x_j[k_j] x_{j-1}[k_{j-1}].
TensorTrain tt_sum_nn(std::span<const std::vector<double>> onebody,
                      double coupling,
                      std::span<const std::vector<double>> coords);

// ---- algebra ------------------------------------------------------------

TensorTrain tt_add(const TensorTrain& a, const TensorTrain& b);

struct TtTerm {
  cplx weight;
  const TensorTrain* train;
};

/// Sum_i weight_i * train_i as one block train (ranks add), no rounding.
TensorTrain tt_lincomb(std::span<const TtTerm> terms);

TensorTrain tt_hadamard(const TensorTrain& a, const TensorTrain& b);
TensorTrain tt_scale(const TensorTrain& a, cplx s);
TensorTrain tt_conj(const TensorTrain& a);

/// weight * sum_k conj(a[k]) b[k].
cplx tt_inner(const TensorTrain& a, const TensorTrain& b, double weight = 1.0);
double tt_norm(const TensorTrain& a, double weight = 1.0);

/// Right-to-left QR then left-to-right truncated SVD. With rmax unbinding the
/// result satisfies ||a - result||_F <= tol ||a||_F.
TensorTrain tt_round(const TensorTrain& a, double tol,
                     std::size_t rmax = kUnboundedRank);

cplx tt_eval(const TensorTrain& a, std::span<const std::size_t> index);

/// Dense n_p x n_q slice (row-major) with every other mode pinned to `fixed`
/// (entries of `fixed` at positions p and q are ignored).
std::vector<cplx> tt_slice2d(const TensorTrain& a, std::size_t p, std::size_t q,
                             std::span<const std::size_t> fixed);

/// In-place linear map on one length-n_j fiber.
using FiberMap = std::function<void(std::span<cplx>)>;

TensorTrain tt_mode_apply(const TensorTrain& a, std::size_t j,
                          const FiberMap& transform);

/// Elementwise exp by scaling and squaring. `bound` must dominate max|a|.
TensorTrain tt_hadamard_exp(const TensorTrain& a, double tol, std::size_t rmax,
                            double bound);

/// Full tensor in row-major order (first index slowest). Small trains only.
std::vector<cplx> tt_to_dense(const TensorTrain& a);

// ---- TTC1 checkpoint format ----------------------------------------------

inline constexpr std::uint8_t kTtcMagic[4] = {0x54, 0x54, 0x43, 0x31};

void tt_serialize(const TensorTrain& a, std::ostream& out);
TensorTrain tt_deserialize(std::istream& in);
std::vector<std::uint8_t> tt_serialize(const TensorTrain& a);
TensorTrain tt_deserialize(std::span<const std::uint8_t> bytes);

void tt_save(const TensorTrain& a, const std::string& path);
TensorTrain tt_load(const std::string& path);

}  // namespace fttc
