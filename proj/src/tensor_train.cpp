#include "fttc/tensor_train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <string>

#include "fttc/error.hpp"
#include "lapack.hpp"
#include "linalg.hpp"
#include "tt_detail.hpp"

namespace fttc {

using linalg::Mat;

TtCore::TtCore(std::size_t left, std::size_t mode, std::size_t right,
               std::vector<cplx> data)
    : left_(left), mode_(mode), right_(right), data_(std::move(data)) {
  if (data_.size() != left * mode * right) {
    throw_invalid("core data size does not match its shape");
  }
}

TensorTrain::TensorTrain(std::vector<TtCore> cores) : cores_(std::move(cores)) {
  if (cores_.empty()) throw_invalid("tensor train needs at least one core");
  if (cores_.front().left() != 1 || cores_.back().right() != 1) {
    throw_invalid("boundary ranks of a tensor train must be 1");
  }
  for (std::size_t k = 0; k < cores_.size(); ++k) {
    const TtCore& c = cores_[k];
    if (c.mode() == 0 || c.left() == 0 || c.right() == 0) {
      throw_invalid("core " + std::to_string(k) + " has an empty dimension");
    }
    if (k > 0 && cores_[k - 1].right() != c.left()) {
      throw_invalid("rank mismatch between cores " + std::to_string(k - 1) +
                    " and " + std::to_string(k));
    }
    for (const cplx& v : c.data()) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw_numerical("non-finite value in core " + std::to_string(k));
      }
    }
  }
}

TensorTrain TensorTrain::zeros(std::span<const std::size_t> dims) {
  std::vector<TtCore> cores;
  cores.reserve(dims.size());
  for (std::size_t n : dims) cores.emplace_back(1, n, 1);
  return TensorTrain(std::move(cores));
}

TensorTrain TensorTrain::ones(std::span<const std::size_t> dims) {
  std::vector<TtCore> cores;
  cores.reserve(dims.size());
  for (std::size_t n : dims) {
    TtCore c(1, n, 1);
    std::fill(c.data().begin(), c.data().end(), cplx{1.0, 0.0});
    cores.push_back(std::move(c));
  }
  return TensorTrain(std::move(cores));
}

std::vector<std::size_t> TensorTrain::dims() const {
  std::vector<std::size_t> out;
  out.reserve(cores_.size());
  for (const auto& c : cores_) out.push_back(c.mode());
  return out;
}

std::vector<std::size_t> TensorTrain::ranks() const {
  std::vector<std::size_t> out{1};
  for (const auto& c : cores_) out.push_back(c.right());
  return out;
}

std::size_t TensorTrain::max_rank() const {
  std::size_t r = 1;
  for (const auto& c : cores_) r = std::max(r, c.right());
  return r;
}

std::size_t TensorTrain::storage() const {
  std::size_t s = 0;
  for (const auto& c : cores_) s += c.size();
  return s;
}

// ---- grids ----------------------------------------------------------------

bool is_power_of_two(std::size_t n) noexcept { return n >= 1 && (n & (n - 1)) == 0; }

double GridAxis::dp() const { return 2.0 * std::numbers::pi / (x_max - x_min); }

std::vector<double> GridAxis::nodes() const {
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = node(k);
  return x;
}

std::vector<double> GridAxis::momenta() const {
  std::vector<double> p(n);
  const double step = dp();
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t k = 0; k < n; ++k) {
    auto idx = static_cast<std::ptrdiff_t>(k);
    if (idx >= half) idx -= static_cast<std::ptrdiff_t>(n);
    p[k] = static_cast<double>(idx) * step;
  }
  return p;
}

GridSpec GridSpec::uniform(std::size_t d, double x_min, double x_max, std::size_t n) {
  GridSpec g;
  g.axes.assign(d, GridAxis{x_min, x_max, n});
  return g;
}

std::vector<std::size_t> GridSpec::dims() const {
  std::vector<std::size_t> out;
  for (const auto& a : axes) out.push_back(a.n);
  return out;
}

double GridSpec::volume_element() const {
  double v = 1.0;
  for (const auto& a : axes) v *= a.dx();
  return v;
}

void GridSpec::validate() const {
  if (axes.empty()) throw_invalid("grid has no axes");
  for (std::size_t j = 0; j < axes.size(); ++j) {
    const auto& a = axes[j];
    if (!(a.x_max > a.x_min)) {
      throw_invalid("grid axis " + std::to_string(j) + ": x_max must exceed x_min");
    }
    if (a.n < 2 || !is_power_of_two(a.n)) {
      throw_invalid("grid axis " + std::to_string(j) +
                    ": point count must be a power of two >= 2");
    }
  }
}

// ---- construction -----------------------------------------------------------

TensorTrain tt_from_rank1(std::span<const std::vector<cplx>> factors) {
  if (factors.empty()) throw_invalid("tt_from_rank1: empty factor list");
  std::vector<TtCore> cores;
  cores.reserve(factors.size());
  for (std::size_t j = 0; j < factors.size(); ++j) {
    if (factors[j].empty()) {
      throw_invalid("tt_from_rank1: factor " + std::to_string(j) + " is empty");
    }
    cores.emplace_back(1, factors[j].size(), 1, factors[j]);
  }
  return TensorTrain(std::move(cores));
}

namespace detail {

TensorTrain sum_nn_train(std::span<const std::vector<cplx>> onebody, cplx coupling,
                         std::span<const std::vector<cplx>> coords,
                         std::span<const std::vector<cplx>> ones) {
  const std::size_t d = onebody.size();
  if (d == 0) throw_invalid("sum_nn: no dimensions");
  const bool coupled = coupling != cplx{0.0, 0.0};
  if ((coupled && coords.size() != d) || ones.size() != d) {
    throw_invalid("sum_nn: per-dimension vector counts differ");
  }
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t n = onebody[j].size();
    if (n == 0 || (coupled && coords[j].size() != n) || ones[j].size() != n) {
      throw_invalid("sum_nn: vectors of dimension " + std::to_string(j) +
                    " have mismatched lengths");
    }
  }
  if (d == 1) {
    return TensorTrain({TtCore(1, onebody[0].size(), 1, onebody[0])});
  }

  // Bond states: 0 = nothing applied yet, 1 = coordinate factor pending,
  // 2 = term complete. Without coupling state 1 is dropped.
  const std::size_t w = coupled ? 3 : 2;
  const std::size_t done = w - 1;
  std::vector<TtCore> cores;
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t n = onebody[j].size();
    const std::size_t left = j == 0 ? 1 : w;
    const std::size_t right = j + 1 == d ? 1 : w;
    TtCore c(left, n, right);
    auto put = [&](std::size_t from, std::size_t to, const std::vector<cplx>& v,
                   cplx s) {
      if (j == 0 && from != 0) return;
      if (j + 1 == d && to != done) return;
      const std::size_t row = j == 0 ? 0 : from;
      const std::size_t col = j + 1 == d ? 0 : to;
      for (std::size_t k = 0; k < n; ++k) c(row, k, col) += s * v[k];
    };
    put(0, 0, ones[j], 1.0);
    put(0, done, onebody[j], 1.0);
    put(done, done, ones[j], 1.0);
    if (coupled) {
      put(0, 1, coords[j], 1.0);
      put(1, done, coords[j], coupling);
    }
    cores.push_back(std::move(c));
  }
  return TensorTrain(std::move(cores));
}

TtCore apply_to_fibers(const TtCore& core, std::size_t n_out, const FiberOp& op) {
  TtCore out(core.left(), n_out, core.right());
  std::vector<cplx> in_fiber(core.mode());
  std::vector<cplx> out_fiber(n_out);
  for (std::size_t i = 0; i < core.left(); ++i) {
    for (std::size_t j = 0; j < core.right(); ++j) {
      for (std::size_t k = 0; k < core.mode(); ++k) in_fiber[k] = core(i, k, j);
      op(in_fiber, out_fiber);
      for (std::size_t k = 0; k < n_out; ++k) out(i, k, j) = out_fiber[k];
    }
  }
  return out;
}

TensorTrain local_sum_apply(const TensorTrain& psi, std::span<const ModeOperators> ops,
                            cplx coupling, cplx shift, cplx scale) {
  const std::size_t d = psi.order();
  if (ops.size() != d) throw_invalid("local_sum_apply: operator count mismatch");
  const bool coupled = coupling != cplx{0.0, 0.0} && d > 1;
  const std::size_t w = coupled ? 3 : 2;
  const std::size_t done = w - 1;

  std::vector<TtCore> cores;
  cores.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    const TtCore& in = psi.core(j);
    const ModeOperators& op = ops[j];
    const std::size_t n_out = op.n_out;
    const std::size_t rl = in.left();
    const std::size_t rr = in.right();

    TtCore local = apply_to_fibers(in, n_out, op.local);
    if (j == 0 && shift != cplx{0.0, 0.0}) {
      TtCore ident = apply_to_fibers(in, n_out, op.identity);
      auto dst = local.data();
      auto src = ident.data();
      for (std::size_t t = 0; t < dst.size(); ++t) dst[t] -= shift * src[t];
    }
    if (d == 1) {
      auto dst = local.data();
      for (auto& v : dst) v *= scale;
      cores.push_back(std::move(local));
      break;
    }
    TtCore ident = apply_to_fibers(in, n_out, op.identity);
    TtCore coord;
    if (coupled) coord = apply_to_fibers(in, n_out, op.coord);

    const std::size_t wl = j == 0 ? 1 : w;
    const std::size_t wr = j + 1 == d ? 1 : w;
    const cplx block_scale = j == 0 ? scale : cplx{1.0, 0.0};
    TtCore out(wl * rl, n_out, wr * rr);
    auto place = [&](std::size_t from, std::size_t to, const TtCore& blk, cplx s) {
      if (j == 0 && from != 0) return;
      if (j + 1 == d && to != done) return;
      const std::size_t bl = j == 0 ? 0 : from;
      const std::size_t br = j + 1 == d ? 0 : to;
      const cplx f = s * block_scale;
      for (std::size_t a = 0; a < rl; ++a)
        for (std::size_t k = 0; k < n_out; ++k)
          for (std::size_t b = 0; b < rr; ++b)
            out(bl * rl + a, k, br * rr + b) += f * blk(a, k, b);
    };
    place(0, 0, ident, 1.0);
    place(0, done, local, 1.0);
    place(done, done, ident, 1.0);
    if (coupled) {
      place(0, 1, coord, 1.0);
      place(1, done, coord, coupling);
    }
    cores.push_back(std::move(out));
  }
  return TensorTrain(std::move(cores));
}

}  // namespace detail

TensorTrain tt_sum_nn(std::span<const std::vector<double>> onebody, double coupling,
                      std::span<const std::vector<double>> coords) {
  if (onebody.empty()) throw_invalid("tt_sum_nn: d must be at least 1");
  auto to_complex = [](const std::vector<double>& v) {
    return std::vector<cplx>(v.begin(), v.end());
  };
  std::vector<std::vector<cplx>> f, x, ones;
  for (std::size_t j = 0; j < onebody.size(); ++j) {
    f.push_back(to_complex(onebody[j]));
    x.push_back(j < coords.size() ? to_complex(coords[j]) : std::vector<cplx>{});
    ones.emplace_back(onebody[j].size(), cplx{1.0, 0.0});
  }
  return detail::sum_nn_train(f, coupling, x, ones);
}

// ---- algebra --------------------------------------------------------------------

namespace {

void require_same_dims(const TensorTrain& a, const TensorTrain& b, const char* op) {
  if (a.dims() != b.dims()) throw_invalid(std::string(op) + ": dimension mismatch");
}

}  // namespace

TensorTrain tt_lincomb(std::span<const TtTerm> terms) {
  if (terms.empty()) throw_invalid("tt_lincomb: no terms");
  const TensorTrain& first = *terms.front().train;
  for (const auto& t : terms) require_same_dims(first, *t.train, "tt_lincomb");
  const std::size_t d = first.order();

  if (d == 1) {
    TtCore c(1, first.core(0).mode(), 1);
    for (const auto& t : terms) {
      auto src = t.train->core(0).data();
      for (std::size_t k = 0; k < src.size(); ++k) c.data()[k] += t.weight * src[k];
    }
    return TensorTrain({std::move(c)});
  }

  std::vector<TtCore> cores;
  cores.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t left = 0, right = 0;
    for (const auto& t : terms) {
      left += t.train->core(j).left();
      right += t.train->core(j).right();
    }
    if (j == 0) left = 1;
    if (j + 1 == d) right = 1;
    const std::size_t n = first.core(j).mode();
    TtCore c(left, n, right);
    std::size_t off_l = 0, off_r = 0;
    for (const auto& t : terms) {
      const TtCore& src = t.train->core(j);
      const cplx s = j == 0 ? t.weight : cplx{1.0, 0.0};
      const std::size_t ol = j == 0 ? 0 : off_l;
      const std::size_t orr = j + 1 == d ? 0 : off_r;
      for (std::size_t a = 0; a < src.left(); ++a)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t b = 0; b < src.right(); ++b)
            c(ol + a, k, orr + b) = s * src(a, k, b);
      off_l += src.left();
      off_r += src.right();
    }
    cores.push_back(std::move(c));
  }
  return TensorTrain(std::move(cores));
}

TensorTrain tt_add(const TensorTrain& a, const TensorTrain& b) {
  require_same_dims(a, b, "tt_add");
  const TtTerm terms[] = {{1.0, &a}, {1.0, &b}};
  return tt_lincomb(terms);
}

TensorTrain tt_hadamard(const TensorTrain& a, const TensorTrain& b) {
  require_same_dims(a, b, "tt_hadamard");
  std::vector<TtCore> cores;
  cores.reserve(a.order());
  for (std::size_t j = 0; j < a.order(); ++j) {
    const TtCore& x = a.core(j);
    const TtCore& y = b.core(j);
    TtCore c(x.left() * y.left(), x.mode(), x.right() * y.right());
    for (std::size_t i = 0; i < x.left(); ++i)
      for (std::size_t i2 = 0; i2 < y.left(); ++i2)
        for (std::size_t k = 0; k < x.mode(); ++k)
          for (std::size_t jj = 0; jj < x.right(); ++jj) {
            const cplx xv = x(i, k, jj);
            for (std::size_t j2 = 0; j2 < y.right(); ++j2)
              c(i * y.left() + i2, k, jj * y.right() + j2) = xv * y(i2, k, j2);
          }
    cores.push_back(std::move(c));
  }
  return TensorTrain(std::move(cores));
}

TensorTrain tt_scale(const TensorTrain& a, cplx s) {
  std::vector<TtCore> cores(a.cores().begin(), a.cores().end());
  for (auto& v : cores.front().data()) v *= s;
  return TensorTrain(std::move(cores));
}

TensorTrain tt_conj(const TensorTrain& a) {
  std::vector<TtCore> cores(a.cores().begin(), a.cores().end());
  for (auto& c : cores)
    for (auto& v : c.data()) v = std::conj(v);
  return TensorTrain(std::move(cores));
}

cplx tt_inner(const TensorTrain& a, const TensorTrain& b, double weight) {
  require_same_dims(a, b, "tt_inner");
  Mat v = Mat::Ones(1, 1);
  for (std::size_t j = 0; j < a.order(); ++j) {
    const TtCore& x = a.core(j);
    const TtCore& y = b.core(j);
    // t = v * Y (right unfolding), reshaped to (rl_a*n) x rr_b.
    Mat t = v * linalg::right_unfolding(y);
    Eigen::Map<const Mat> t_left(t.data(), static_cast<Eigen::Index>(x.left() * x.mode()),
                                 static_cast<Eigen::Index>(y.right()));
    v = linalg::left_unfolding(x).adjoint() * t_left;
  }
  return weight * v(0, 0);
}

double tt_norm(const TensorTrain& a, double weight) {
  const cplx s = tt_inner(a, a, weight);
  // Rounding in the contraction is bounded relative to prod_k ||W_k||_F^2, which
  // dominates |Re| when the train is a near-cancelling sum.
  double scale = weight;
  for (const TtCore& c : a.cores()) scale *= linalg::left_unfolding(c).squaredNorm();
  const double slack = 1e-12 * std::abs(s.real()) +
                       16.0 * static_cast<double>(a.order()) *
                           std::numeric_limits<double>::epsilon() * scale;
  if (std::abs(s.imag()) > slack) {
    throw_numerical("tt_norm: inner product has a significant imaginary part");
  }
  if (s.real() < -slack) throw_numerical("tt_norm: negative squared norm");
  return std::sqrt(std::max(s.real(), 0.0));
}

TensorTrain tt_round(const TensorTrain& a, double tol, std::size_t rmax) {
  if (!(tol >= 0.0) || tol >= 1.0) throw_invalid("tt_round: tol must lie in [0, 1)");
  if (rmax == 0) throw_invalid("tt_round: rmax must be positive");
  const std::size_t d = a.order();
  if (d == 1) return a;

  std::vector<TtCore> cores(a.cores().begin(), a.cores().end());

  // Right-to-left orthogonalization: W_k = L Q with orthonormal rows in Q.
  Mat l, q;
  for (std::size_t k = d - 1; k >= 1; --k) {
    TtCore& c = cores[k];
    const std::size_t n = c.mode();
    const std::size_t rr = c.right();
    linalg::lq_rows(linalg::right_unfolding(c), l, q);
    c = linalg::core_from_right_unfolding(q, n, rr);
    TtCore& prev = cores[k - 1];
    Mat merged = linalg::left_unfolding(prev) * l;
    prev = linalg::core_from_left_unfolding(merged, prev.left(), prev.mode());
  }

  const double norm = linalg::left_unfolding(cores[0]).norm();
  if (norm == 0.0) return TensorTrain::zeros(a.dims());
  const double delta = tol * norm / std::sqrt(static_cast<double>(d - 1));

  Mat u, vh;
  std::vector<double> s;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    TtCore& c = cores[k];
    linalg::svd_thin(linalg::left_unfolding(c), u, s, vh);
    const auto full = static_cast<Eigen::Index>(s.size());
    // Smallest rank whose discarded tail stays within delta.
    Eigen::Index rho = full;
    double tail = 0.0;
    while (rho > 1) {
      const double next = tail + s[rho - 1] * s[rho - 1];
      if (std::sqrt(next) > delta) break;
      tail = next;
      --rho;
    }
    rho = std::min<Eigen::Index>(rho, static_cast<Eigen::Index>(
                                          std::min<std::size_t>(rmax, s.size())));
    Mat sv = Eigen::Map<const Eigen::VectorXd>(s.data(), rho).cast<cplx>().asDiagonal() *
             vh.topRows(rho);
    const std::size_t left = c.left();
    const std::size_t mode = c.mode();
    c = linalg::core_from_left_unfolding(u.leftCols(rho), left, mode);
    TtCore& next = cores[k + 1];
    Mat merged = sv * linalg::right_unfolding(next);
    next = linalg::core_from_right_unfolding(merged, next.mode(), next.right());
  }
  return TensorTrain(std::move(cores));
}

cplx tt_eval(const TensorTrain& a, std::span<const std::size_t> index) {
  if (index.size() != a.order()) throw_invalid("tt_eval: index has wrong length");
  Mat v = Mat::Ones(1, 1);
  for (std::size_t j = 0; j < a.order(); ++j) {
    const TtCore& c = a.core(j);
    if (index[j] >= c.mode()) {
      throw_invalid("tt_eval: index out of range in dimension " + std::to_string(j));
    }
    v = v * linalg::slice(c, index[j]);
  }
  return v(0, 0);
}

std::vector<cplx> tt_slice2d(const TensorTrain& a, std::size_t p, std::size_t q,
                             std::span<const std::size_t> fixed) {
  const std::size_t d = a.order();
  if (p == q) throw_invalid("tt_slice2d: kept dimensions must differ");
  if (p > q) throw_invalid("tt_slice2d: require p < q");
  if (q >= d) throw_invalid("tt_slice2d: kept dimension out of range");
  if (fixed.size() != d) throw_invalid("tt_slice2d: fixed index list has wrong length");
  for (std::size_t j = 0; j < d; ++j) {
    if (j != p && j != q && fixed[j] >= a.core(j).mode()) {
      throw_invalid("tt_slice2d: fixed index out of range in dimension " +
                    std::to_string(j));
    }
  }
  Mat left = Mat::Ones(1, 1);
  for (std::size_t j = 0; j < p; ++j) left = left * linalg::slice(a.core(j), fixed[j]);
  Mat middle = Mat::Identity(static_cast<Eigen::Index>(a.core(p).right()),
                             static_cast<Eigen::Index>(a.core(p).right()));
  for (std::size_t j = p + 1; j < q; ++j) middle = middle * linalg::slice(a.core(j), fixed[j]);
  Mat right = Mat::Ones(1, 1);
  for (std::size_t j = d; j-- > q + 1;) right = linalg::slice(a.core(j), fixed[j]) * right;

  const TtCore& cp = a.core(p);
  const TtCore& cq = a.core(q);
  const auto np = static_cast<Eigen::Index>(cp.mode());
  const auto nq = static_cast<Eigen::Index>(cq.mode());
  Mat rows(np, middle.cols());
  for (Eigen::Index i = 0; i < np; ++i) {
    rows.row(i) = (left * linalg::slice(cp, static_cast<std::size_t>(i)) * middle).row(0);
  }
  Mat cols(middle.cols(), nq);
  for (Eigen::Index j = 0; j < nq; ++j) {
    cols.col(j) = (linalg::slice(cq, static_cast<std::size_t>(j)) * right).col(0);
  }
  Mat out = rows * cols;
  return {out.data(), out.data() + out.size()};
}

TensorTrain tt_mode_apply(const TensorTrain& a, std::size_t j, const FiberMap& transform) {
  if (j >= a.order()) throw_invalid("tt_mode_apply: dimension index out of range");
  std::vector<TtCore> cores(a.cores().begin(), a.cores().end());
  const std::size_t n = cores[j].mode();
  cores[j] = detail::apply_to_fibers(
      a.core(j), n, [&](std::span<const cplx> in, std::span<cplx> out) {
        std::copy(in.begin(), in.end(), out.begin());
        transform(out);
        if (out.size() != n) throw_invalid("tt_mode_apply: transform changed length");
      });
  return TensorTrain(std::move(cores));
}

TensorTrain tt_hadamard_exp(const TensorTrain& a, double tol, std::size_t rmax,
                            double bound) {
  const auto dims = a.dims();
  const TensorTrain ones = TensorTrain::ones(dims);
  if (!(bound > 0.0)) {
    if (tt_norm(a) == 0.0) return ones;
    throw_invalid("tt_hadamard_exp: bound must be positive for a nonzero argument");
  }
  const int halvings = std::max(0, static_cast<int>(std::ceil(std::log2(bound))) + 4);
  const TensorTrain s = tt_scale(a, std::ldexp(1.0, -halvings));

  // Horner form of the degree-8 Taylor polynomial.
  TensorTrain p = tt_round(tt_add(ones, tt_scale(s, 1.0 / 8.0)), tol, rmax);
  for (int k = 7; k >= 1; --k) {
    p = tt_round(tt_add(ones, tt_scale(tt_hadamard(s, p), 1.0 / k)), tol, rmax);
  }
  for (int i = 0; i < halvings; ++i) p = tt_round(tt_hadamard(p, p), tol, rmax);
  return p;
}

std::vector<cplx> tt_to_dense(const TensorTrain& a) {
  // Sweep left to right keeping a (prod n) x r matrix.
  Mat acc = Mat::Ones(1, 1);
  for (const TtCore& c : a.cores()) {
    Mat next(acc.rows() * static_cast<Eigen::Index>(c.mode()),
             static_cast<Eigen::Index>(c.right()));
    Mat prod = acc * linalg::right_unfolding(c);  // rows x (n r)
    for (Eigen::Index row = 0; row < acc.rows(); ++row)
      for (std::size_t k = 0; k < c.mode(); ++k)
        for (std::size_t j = 0; j < c.right(); ++j)
          next(row * static_cast<Eigen::Index>(c.mode()) + static_cast<Eigen::Index>(k),
               static_cast<Eigen::Index>(j)) =
              prod(row, static_cast<Eigen::Index>(k * c.right() + j));
    acc = std::move(next);
  }
  return {acc.data(), acc.data() + acc.size()};
}

}  // namespace fttc
