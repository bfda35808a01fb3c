#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <cstring>
#include <sstream>

#include "fttc/error.hpp"
#include "fttc/fft.hpp"
#include "fttc/tensor_train.hpp"
#include "test_util.hpp"

using namespace fttc;
using fttc::testing::dense_diff;
using fttc::testing::dense_norm;
using fttc::testing::random_tt;
using fttc::testing::unravel;

namespace {

double dna_f(double x, double alpha) {
  return alpha * (0.429 * x - 1.126 * x * x - 0.143 * x * x * x + 0.563 * x * x * x * x);
}

std::vector<cplx> dense_pointwise(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                  bool multiply) {
  std::vector<cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = multiply ? a[i] * b[i] : a[i] + b[i];
  return out;
}

}  // namespace

TEST_CASE("tt_from_rank1 evaluates products of factors") {
  const std::vector<std::vector<cplx>> ones{{1, 1}, {1, 1}};
  TensorTrain a = tt_from_rank1(ones);
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t idx[] = {i / 2, i % 2};
    CHECK(tt_eval(a, idx) == cplx(1.0));
  }
  const std::vector<std::vector<cplx>> f{{1, 2}, {3, 4}};
  TensorTrain b = tt_from_rank1(f);
  const std::size_t i11[] = {1, 1};
  const std::size_t i01[] = {0, 1};
  CHECK(tt_eval(b, i11) == cplx(8.0));
  CHECK(tt_eval(b, i01) == cplx(4.0));
  CHECK(b.max_rank() == 1);

  CHECK_THROWS_AS(tt_from_rank1(std::vector<std::vector<cplx>>{}), Error);
  CHECK_THROWS_AS(tt_from_rank1(std::vector<std::vector<cplx>>{{1.0}, {}}), Error);
}

TEST_CASE("50-dimensional Gaussian product is normalized on the grid") {
  const GridAxis ax{-5.0, 5.0, 32};
  std::vector<cplx> g(ax.n);
  for (std::size_t k = 0; k < ax.n; ++k) {
    const double x = ax.node(k) - 1.0;
    g[k] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  }
  std::vector<std::vector<cplx>> factors(50, g);
  TensorTrain psi = tt_from_rank1(factors);
  const double vol = std::pow(ax.dx(), 50);
  CHECK(std::abs(tt_norm(psi, vol) * tt_norm(psi, vol) - 1.0) < 1e-3);
}

TEST_CASE("tt_sum_nn builds the nearest-neighbour sum exactly") {
  SUBCASE("single dimension") {
    const std::vector<std::vector<double>> f{{1.0, 2.0, 3.0}};
    TensorTrain a = tt_sum_nn(f, 5.0, f);
    CHECK(a.max_rank() == 1);
    const std::size_t i[] = {2};
    CHECK(tt_eval(a, i) == cplx(3.0));
  }
  SUBCASE("pure coupling") {
    const std::vector<std::vector<double>> f(3, {0.0, 0.0});
    const std::vector<std::vector<double>> x(3, {0.0, 1.0});
    TensorTrain a = tt_sum_nn(f, 1.0, x);
    CHECK(a.max_rank() <= 3);
    const std::size_t i[] = {1, 1, 1};
    CHECK(std::abs(tt_eval(a, i) - 2.0) < 1e-15);
  }
  SUBCASE("DNA potential, d = 4") {
    const GridAxis ax{-5.0, 5.0, 32};
    const double alpha = 0.1, beta = -2.0;
    std::vector<std::vector<double>> f(4), x(4, ax.nodes());
    for (auto& v : f) {
      for (double xi : ax.nodes()) v.push_back(dna_f(xi, alpha));
    }
    TensorTrain v = tt_sum_nn(f, alpha * beta, x);
    CHECK(v.max_rank() <= 3);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, 31);
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
      std::size_t idx[4];
      for (auto& i : idx) i = pick(rng);
      double ref = 0.0;
      for (int j = 0; j < 4; ++j) ref += dna_f(ax.node(idx[j]), alpha);
      for (int j = 1; j < 4; ++j) ref += alpha * beta * ax.node(idx[j]) * ax.node(idx[j - 1]);
      const double err = std::abs(tt_eval(v, idx) - ref) / std::max(std::abs(ref), 1.0);
      worst = std::max(worst, err);
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("tt_add") {
  std::mt19937_64 rng(1);
  TensorTrain a = random_tt(rng, {8, 8, 8}, 2);
  TensorTrain b = random_tt(rng, {8, 8, 8}, 3);
  TensorTrain s = tt_add(a, b);
  CHECK(s.ranks() == std::vector<std::size_t>{1, 5, 5, 1});
  auto ref = dense_pointwise(tt_to_dense(a), tt_to_dense(b), false);
  CHECK(dense_diff(tt_to_dense(s), ref) < 1e-13 * dense_norm(ref));

  TensorTrain z = tt_add(a, tt_scale(a, -1.0));
  for (const auto& v : tt_to_dense(z)) CHECK(std::abs(v) < 1e-13);

  const std::vector<std::vector<cplx>> f{{1, 2}, {3, 4}};
  TensorTrain r1 = tt_from_rank1(f);
  CHECK(tt_add(r1, r1).ranks() == std::vector<std::size_t>{1, 2, 1});

  TensorTrain other = random_tt(rng, {8, 4, 8}, 2);
  CHECK_THROWS_AS(tt_add(a, other), Error);
}

TEST_CASE("tt_lincomb matches weighted dense sum") {
  std::mt19937_64 rng(11);
  TensorTrain a = random_tt(rng, {4, 5, 3}, 2);
  TensorTrain b = random_tt(rng, {4, 5, 3}, 3);
  TensorTrain c = random_tt(rng, {4, 5, 3}, 1);
  const TtTerm terms[] = {{2.0, &a}, {cplx(0, -1), &b}, {-0.5, &c}};
  TensorTrain s = tt_lincomb(terms);
  auto da = tt_to_dense(a), db = tt_to_dense(b), dc = tt_to_dense(c);
  std::vector<cplx> ref(da.size());
  for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = 2.0 * da[i] - cplx(0, 1) * db[i] - 0.5 * dc[i];
  CHECK(dense_diff(tt_to_dense(s), ref) < 1e-13 * dense_norm(ref));
}

TEST_CASE("tt_hadamard") {
  std::mt19937_64 rng(2);
  TensorTrain a = random_tt(rng, {8, 8, 8}, 2);
  TensorTrain b = random_tt(rng, {8, 8, 8}, 3);
  TensorTrain p = tt_hadamard(a, b);
  CHECK(p.ranks() == std::vector<std::size_t>{1, 6, 6, 1});
  auto ref = dense_pointwise(tt_to_dense(a), tt_to_dense(b), true);
  CHECK(dense_diff(tt_to_dense(p), ref) < 1e-13 * dense_norm(ref));

  const std::vector<std::size_t> dims{8, 8, 8};
  TensorTrain same = tt_hadamard(a, TensorTrain::ones(dims));
  CHECK(dense_diff(tt_to_dense(same), tt_to_dense(a)) < 1e-14 * dense_norm(tt_to_dense(a)));
}

TEST_CASE("tt_scale") {
  std::mt19937_64 rng(3);
  TensorTrain a = random_tt(rng, {3, 4, 5}, 2);
  auto da = tt_to_dense(a);
  CHECK(tt_to_dense(tt_scale(a, 1.0)) == da);
  for (const auto& v : tt_to_dense(tt_scale(a, 0.0))) CHECK(v == cplx(0.0));
  auto rot = tt_to_dense(tt_scale(a, cplx(0, -1)));
  for (std::size_t i = 0; i < da.size(); ++i) {
    CHECK(std::abs(rot[i] - cplx(0, -1) * da[i]) <= 1e-14 * std::abs(da[i]) + 1e-300);
  }
  CHECK(tt_scale(a, 3.0).ranks() == a.ranks());
}

TEST_CASE("tt_inner and tt_norm") {
  const std::vector<std::size_t> d2{2, 2};
  TensorTrain ones = TensorTrain::ones(d2);
  CHECK(std::abs(tt_inner(ones, ones) - 4.0) < 1e-15);
  CHECK(std::abs(tt_norm(ones) - 2.0) < 1e-15);
  CHECK(tt_norm(TensorTrain::zeros(d2)) == 0.0);

  std::mt19937_64 rng(4);
  TensorTrain a = random_tt(rng, {5, 6, 7}, 3);
  TensorTrain b = random_tt(rng, {5, 6, 7}, 2);
  CHECK(std::abs(tt_inner(a, b) - std::conj(tt_inner(b, a))) < 1e-12 * std::abs(tt_inner(a, b)));
  const cplx aa = tt_inner(a, a);
  CHECK(aa.real() > 0.0);
  CHECK(std::abs(aa.imag()) < 1e-12 * aa.real());
  const double ref = dense_norm(tt_to_dense(a));
  CHECK(std::abs(tt_norm(a) - ref) < 1e-12 * ref);

  auto da = tt_to_dense(a), db = tt_to_dense(b);
  cplx dense_inner = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) dense_inner += std::conj(da[i]) * db[i];
  CHECK(std::abs(tt_inner(a, b, 0.5) - 0.5 * dense_inner) < 1e-12 * std::abs(dense_inner));
}

TEST_CASE("discrete Gaussian is normalized with the volume element, d = 2") {
  const GridAxis ax{-5.0, 5.0, 32};
  std::vector<cplx> g(ax.n);
  for (std::size_t k = 0; k < ax.n; ++k) {
    const double x = ax.node(k) - 1.0;
    g[k] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  }
  const std::vector<std::vector<cplx>> f{g, g};
  TensorTrain psi = tt_from_rank1(f);
  CHECK(std::abs(tt_inner(psi, psi, ax.dx() * ax.dx()) - 1.0) < 1e-6);
}

TEST_CASE("tt_round") {
  std::mt19937_64 rng(5);
  SUBCASE("lossless at tol 0") {
    TensorTrain a = random_tt(rng, {4, 5, 6, 3}, 4);
    TensorTrain r = tt_round(a, 0.0);
    const auto ra = a.ranks(), rr = r.ranks();
    for (std::size_t k = 0; k < ra.size(); ++k) CHECK(rr[k] <= ra[k]);
    const auto da = tt_to_dense(a);
    CHECK(dense_diff(tt_to_dense(r), da) < 1e-13 * dense_norm(da));
  }
  SUBCASE("redundancy is removed") {
    TensorTrain a = random_tt(rng, {6, 6, 6, 6}, 2);
    TensorTrain r = tt_round(tt_add(a, a), 1e-12);
    CHECK(r.max_rank() <= 2);
  }
  SUBCASE("error bound over random trains") {
    for (int trial = 0; trial < 100; ++trial) {
      TensorTrain a = random_tt(rng, {8, 8, 8, 8}, 1 + trial % 6);
      TensorTrain b = random_tt(rng, {8, 8, 8, 8}, 2);
      TensorTrain s = tt_add(a, tt_scale(b, 1e-6 * (trial % 3)));
      const double tol = trial % 2 == 0 ? 1e-6 : 1e-3;
      TensorTrain r = tt_round(s, tol);
      const auto ds = tt_to_dense(s);
      CHECK(dense_diff(tt_to_dense(r), ds) <= tol * dense_norm(ds) * (1 + 1e-10));
    }
  }
  SUBCASE("rank cap") {
    TensorTrain a = random_tt(rng, {8, 8, 8}, 6);
    CHECK(tt_round(a, 0.0, 3).max_rank() <= 3);
  }
  SUBCASE("zero and single-core trains") {
    const std::vector<std::size_t> dims{3, 3};
    TensorTrain z = tt_round(tt_add(TensorTrain::zeros(dims), TensorTrain::zeros(dims)), 1e-8);
    CHECK(z.max_rank() == 1);
    CHECK(tt_norm(z) == 0.0);
    TensorTrain one = random_tt(rng, {7}, 1);
    CHECK(tt_to_dense(tt_round(one, 0.1)) == tt_to_dense(one));
  }
  SUBCASE("argument checks") {
    TensorTrain a = random_tt(rng, {3, 3}, 2);
    CHECK_THROWS_AS(tt_round(a, 1.0), Error);
    CHECK_THROWS_AS(tt_round(a, -1e-3), Error);
    CHECK_THROWS_AS(tt_round(a, 1e-3, 0), Error);
  }
}

TEST_CASE("tt_eval") {
  const std::vector<std::size_t> dims{3, 4};
  TensorTrain ones = TensorTrain::ones(dims);
  const std::size_t i[] = {2, 3};
  CHECK(tt_eval(ones, i) == cplx(1.0));
  const std::size_t bad[] = {3, 0};
  CHECK_THROWS_AS(tt_eval(ones, bad), Error);
  const std::size_t short_idx[] = {0};
  CHECK_THROWS_AS(tt_eval(ones, short_idx), Error);

  std::mt19937_64 rng(6);
  TensorTrain a = random_tt(rng, {3, 4, 5}, 3);
  const auto da = tt_to_dense(a);
  for (std::size_t flat = 0; flat < da.size(); ++flat) {
    const auto idx = unravel(flat, a.dims());
    CHECK(std::abs(tt_eval(a, idx) - da[flat]) < 1e-13 * (1 + std::abs(da[flat])));
  }
}

TEST_CASE("tt_slice2d") {
  std::mt19937_64 rng(8);
  SUBCASE("d = 2 is the dense matrix") {
    TensorTrain a = random_tt(rng, {5, 6}, 3);
    const std::size_t fixed[] = {0, 0};
    auto s = tt_slice2d(a, 0, 1, fixed);
    auto da = tt_to_dense(a);
    CHECK(dense_diff(s, da) < 1e-13 * dense_norm(da));
  }
  SUBCASE("rank-1 slice is an outer product") {
    const std::vector<std::vector<cplx>> f{{1, 2}, {3, 4, 5}, {2, -1}};
    TensorTrain a = tt_from_rank1(f);
    const std::size_t fixed[] = {0, 0, 1};
    auto s = tt_slice2d(a, 0, 1, fixed);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(s[i * 3 + j] == f[0][i] * f[1][j] * f[2][1]);
  }
  SUBCASE("d = 4 with fixed interior indices") {
    TensorTrain a = random_tt(rng, {8, 8, 8, 8}, 3);
    const std::size_t fixed[] = {2, 0, 5, 0};
    auto s = tt_slice2d(a, 1, 3, fixed);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) {
        const std::size_t idx[] = {2, i, 5, j};
        const cplx ref = tt_eval(a, idx);
        CHECK(std::abs(s[i * 8 + j] - ref) < 1e-13 * (1 + std::abs(ref)));
      }
  }
  SUBCASE("errors") {
    TensorTrain a = random_tt(rng, {4, 4, 4}, 2);
    const std::size_t fixed[] = {0, 0, 0};
    CHECK_THROWS_AS(tt_slice2d(a, 1, 1, fixed), Error);
    const std::size_t bad[] = {0, 9, 0};
    CHECK_THROWS_AS(tt_slice2d(a, 0, 2, bad), Error);
  }
}

TEST_CASE("tt_mode_apply") {
  std::mt19937_64 rng(9);
  TensorTrain a = random_tt(rng, {8, 16, 8}, 3);
  const auto da = tt_to_dense(a);
  TensorTrain same = tt_mode_apply(a, 1, [](std::span<cplx>) {});
  CHECK(tt_to_dense(same) == da);

  const std::vector<std::vector<cplx>> f{{1, 2}, {3, 4}};
  TensorTrain r1 = tt_from_rank1(f);
  TensorTrain doubled = tt_mode_apply(r1, 0, [](std::span<cplx> v) {
    for (auto& x : v) x *= 2.0;
  });
  const std::size_t i[] = {1, 1};
  CHECK(tt_eval(doubled, i) == cplx(16.0));

  const Fft& fft = Fft::plan(16);
  TensorTrain rt = tt_mode_apply(tt_mode_apply(a, 1, [&](std::span<cplx> v) { fft.forward(v); }),
                                 1, [&](std::span<cplx> v) { fft.inverse(v); });
  CHECK(rt.ranks() == a.ranks());
  CHECK(dense_diff(tt_to_dense(rt), da) < 1e-12 * dense_norm(da));
  CHECK_THROWS_AS(tt_mode_apply(a, 3, [](std::span<cplx>) {}), Error);
}

TEST_CASE("Fft matches the naive DFT") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  for (std::size_t n : {1u, 2u, 4u, 32u, 64u}) {
    std::vector<cplx> x(n);
    for (auto& v : x) v = {g(rng), g(rng)};
    std::vector<cplx> y = x;
    Fft::plan(n).forward(y);
    for (std::size_t k = 0; k < n; ++k) {
      cplx ref = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        ref += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(j * k) / double(n));
      }
      CHECK(std::abs(y[k] - ref) < 1e-12 * std::sqrt(double(n)) * 10);
    }
  }
  CHECK_THROWS(Fft(12));
}

TEST_CASE("tt_hadamard_exp") {
  const std::vector<std::size_t> dims{5, 6};
  TensorTrain e0 = tt_hadamard_exp(TensorTrain::zeros(dims), 1e-12, 64, 0.0);
  for (const auto& v : tt_to_dense(e0)) CHECK(std::abs(v - 1.0) < 1e-15);

  SUBCASE("real rank-1 argument") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<cplx>> f(2, std::vector<cplx>(8));
    for (auto& v : f)
      for (auto& x : v) x = u(rng);
    TensorTrain a = tt_from_rank1(f);
    TensorTrain e = tt_hadamard_exp(a, 1e-14, 64, 1.0);
    const auto da = tt_to_dense(a);
    const auto de = tt_to_dense(e);
    for (std::size_t i = 0; i < da.size(); ++i) CHECK(std::abs(de[i] - std::exp(da[i])) < 1e-10);
  }
  SUBCASE("coupled DNA phase, d = 2") {
    const GridAxis ax{-5.0, 5.0, 32};
    const double alpha = 0.1, beta = -2.0, dt = 0.01;
    std::vector<std::vector<double>> f(2), x(2, ax.nodes());
    double vmax = 0.0;
    for (auto& v : f)
      for (double xi : ax.nodes()) {
        v.push_back(dna_f(xi, alpha));
        vmax = std::max(vmax, std::abs(v.back()));
      }
    TensorTrain v = tt_sum_nn(f, alpha * beta, x);
    const double bound = (2 * vmax + std::abs(alpha * beta) * 25.0) * dt / 2;
    TensorTrain e = tt_hadamard_exp(tt_scale(v, cplx(0, -dt / 2)), 1e-14, 64, bound);
    const auto dv = tt_to_dense(v);
    const auto de = tt_to_dense(e);
    for (std::size_t i = 0; i < dv.size(); ++i) {
      CHECK(std::abs(de[i] - std::exp(cplx(0, -dt / 2) * dv[i])) < 1e-8);
      CHECK(std::abs(std::abs(de[i]) - 1.0) < 1e-8);
    }
  }
  CHECK_THROWS_AS(tt_hadamard_exp(TensorTrain::ones(dims), 1e-10, 8, 0.0), Error);
}

TEST_CASE("TTC1 serialization") {
  std::mt19937_64 rng(13);
  TensorTrain a = random_tt(rng, {3, 5, 4}, 3);
  auto bytes = tt_serialize(a);
  TensorTrain b = tt_deserialize(bytes);
  CHECK(b.ranks() == a.ranks());
  for (std::size_t k = 0; k < a.order(); ++k) {
    const auto x = a.core(k).data();
    const auto y = b.core(k).data();
    CHECK(std::memcmp(x.data(), y.data(), x.size_bytes()) == 0);
  }

  SUBCASE("rejects corrupt streams") {
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(tt_deserialize(bad), Error);
    auto cut = std::vector<std::uint8_t>(bytes.begin(), bytes.end() - 5);
    CHECK_THROWS_AS(tt_deserialize(cut), Error);
    auto ranks = bytes;
    ranks[8 + 3 * 8 + 8] = 2;  // r_1: 3 -> 2 breaks the stream length
    CHECK_THROWS_AS(tt_deserialize(ranks), Error);
    auto boundary = bytes;
    boundary[8 + 3 * 8] = 2;  // r_0 = 2
    CHECK_THROWS_AS(tt_deserialize(boundary), Error);
  }

  SUBCASE("size of a 50-dimensional rank-1 state") {
    std::vector<std::vector<cplx>> f(50, std::vector<cplx>(32, 0.5));
    TensorTrain psi = tt_from_rank1(f);
    const std::size_t header = 4 + 4 + 50 * 8 + 51 * 8;
    CHECK(tt_serialize(psi).size() == header + 50 * 16 * 32);
  }

  SUBCASE("little-endian header") {
    CHECK(bytes[0] == 0x54);
    CHECK(bytes[3] == 0x31);
    CHECK(bytes[4] == 3);
    CHECK(bytes[5] == 0);
    CHECK(bytes[8] == 3);
  }
}
