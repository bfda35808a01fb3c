#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fttc/dense_reference.hpp"
#include "fttc/error.hpp"
#include "fttc/fft.hpp"
#include "fttc/observables.hpp"
#include "fttc/propagators.hpp"
#include "test_util.hpp"

using namespace fttc;
using fttc::testing::dense_diff;
using fttc::testing::dense_norm;

namespace {

constexpr double kPi = std::numbers::pi;

/// Coherent-state autocorrelation per coordinate: e^{-i w t/2} exp(|a|^2 (e^{-i w t} - 1)).
cplx coherent_overlap(cplx alpha0, double omega, double t) {
  const cplx rot = std::polar(1.0, -omega * t);
  return std::polar(1.0, -0.5 * omega * t) * std::exp(std::norm(alpha0) * (rot - 1.0));
}

}  // namespace

TEST_CASE("initial Gaussian normalization") {
  const GridSpec g1 = GridSpec::uniform(1, -5.0, 5.0, 32);
  const TensorTrain psi = initial_gaussian(GaussianParams::uniform(1, 1.0, 0.0, 0.0), g1);
  CHECK(std::abs(tt_norm(psi, g1.volume_element()) - 1.0) <= 1e-6);

  const GridSpec g50 = GridSpec::uniform(50, -5.0, 5.0, 32);
  std::vector<std::string> warnings;
  const TensorTrain psi50 =
      initial_gaussian(GaussianParams::uniform(50, 1.0, 1.0, 0.0), g50, &warnings);
  CHECK(psi50.max_rank() == 1);
  CHECK(std::abs(tt_norm(psi50, g50.volume_element()) - 1.0) <= 1e-3);
  CHECK(warnings.empty());

  const std::vector<Basis> bases(3, Basis{-5.0, 5.0, 32});
  const FunctionTrain f = initial_gaussian(GaussianParams::uniform(3, 1.0, 1.0, 0.5), bases);
  CHECK(f.coeffs().max_rank() == 1);
  CHECK(std::abs(ft_norm(f) - 1.0) <= 1e-6);
}

TEST_CASE("initial Gaussian momentum peak") {
  const GridSpec grid = GridSpec::uniform(1, -8.0, 8.0, 64);
  const double dp = grid.axes[0].dp();
  const double p0 = 5.3 * dp;
  const TensorTrain psi = initial_gaussian(GaussianParams::uniform(1, 1.0, 0.5, p0), grid);
  std::vector<cplx> v = tt_to_dense(psi);
  Fft::plan(64).forward(v);
  const auto p = grid.axes[0].momenta();
  std::size_t best = 0;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (std::abs(v[k]) > std::abs(v[best])) best = k;
  CHECK(p[best] == doctest::Approx(5.0 * dp));
}

TEST_CASE("Gaussian parameter validation and boundary warnings") {
  CHECK_THROWS_AS(GaussianParams::uniform(2, 0.0, 1.0, 0.0).validate(), Error);
  GaussianParams bad{1.0, {1.0, 2.0}, {0.0}};
  CHECK_THROWS_AS(bad.validate(), Error);
  const GaussianParams edge{1.0, {4.5, 0.0}, {0.0, 0.0}};
  const double lo[] = {-5.0, -5.0};
  const double hi[] = {5.0, 5.0};
  const auto w = gaussian_boundary_warnings(edge, lo, hi);
  REQUIRE(w.size() == 1);
  CHECK(w[0].find('0') != std::string::npos);
  const GridSpec grid = GridSpec::uniform(3, -5.0, 5.0, 16);
  CHECK_THROWS_AS(initial_gaussian(GaussianParams::uniform(2, 1.0, 0.0, 0.0), grid), Error);
}

TEST_CASE("coherent state at t = 0 and after one period") {
  const GaussianParams gp{1.7, {0.8, -0.4}, {0.3, 1.1}};
  const double omega = 1.7;
  const auto cs = AnalyticCoherentState::from_gaussian(gp, omega, 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  double worst0 = 0.0, worst_period = 0.0;
  for (int s = 0; s < 100; ++s) {
    const double x[] = {u(rng), u(rng)};
    const cplx g = gp.factor(0, x[0]) * gp.factor(1, x[1]);
    worst0 = std::max(worst0, std::abs(coherent_state_analytic(cs, 0.0, x) - g));
    const double t = u(rng) + 4.0;
    worst_period = std::max(worst_period, std::abs(coherent_state_analytic(cs, t + 2 * kPi / omega, x) -
                                                   coherent_state_analytic(cs, t, x)));
  }
  CHECK(worst0 <= 1e-12);
  CHECK(worst_period <= 1e-12);
  CHECK_THROWS_AS(AnalyticCoherentState::from_gaussian(gp, 1.0, 1.0), Error);
}

TEST_CASE("coherent state solves the Schroedinger equation") {
  const double omega = 1.3, mass = 0.8;
  const GaussianParams gp{mass * omega, {0.7}, {-0.9}};
  const auto cs = AnalyticCoherentState::from_gaussian(gp, omega, mass);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), ut(0.0, 10.0);
  const double h = 1e-4;
  double worst = 0.0;
  for (int s = 0; s < 50; ++s) {
    const double x = ux(rng), t = ut(rng);
    auto psi = [&](double xx, double tt) {
      const double a[] = {xx};
      return coherent_state_analytic(cs, tt, a);
    };
    const cplx dt = (psi(x, t + h) - psi(x, t - h)) / (2 * h);
    const cplx d2 = (psi(x + h, t) - 2.0 * psi(x, t) + psi(x - h, t)) / (h * h);
    const cplx hpsi = -0.5 / mass * d2 + 0.5 * mass * omega * omega * x * x * psi(x, t);
    worst = std::max(worst, std::abs(cplx(0, 1) * dt - hpsi));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("coherent state centre follows the dense split-operator path") {
  const GridSpec grid = GridSpec::uniform(1, -8.0, 8.0, 128);
  const HamiltonianSpec spec{1.0, HarmonicModel{1.0}};
  const GaussianParams gp = GaussianParams::uniform(1, 1.0, 1.5, 0.0);
  const auto cs = AnalyticCoherentState::from_gaussian(gp, 1.0, 1.0);
  const auto psi0 = tt_to_dense(initial_gaussian(gp, grid));
  const auto nodes = grid.axes[0].nodes();
  for (double t : {0.5, 1.7}) {
    DenseRequest r;
    r.method = DenseMethod::soft;
    r.dt = 1e-4;
    r.steps = static_cast<std::size_t>(std::lround(t / r.dt));
    const auto v = fullgrid_reference(psi0, spec, grid, r);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      num += nodes[i] * std::norm(v[i]);
      den += std::norm(v[i]);
    }
    CHECK(std::abs(num / den - cs.center(0, t)) <= 1e-4);
    CHECK(cs.center(0, t) == doctest::Approx(std::sqrt(2.0) * cs.alpha(0, t).real()));
  }
}

TEST_CASE("survival amplitude") {
  const GridSpec grid = GridSpec::uniform(2, -7.0, 7.0, 32);
  const GaussianParams gp = GaussianParams::uniform(2, 1.0, 1.0, 0.4);
  const auto cs = AnalyticCoherentState::from_gaussian(gp, 1.0, 1.0);
  const TensorTrain psi0 = initial_gaussian(gp, grid);
  const double vol = grid.volume_element();
  const cplx s0 = survival_amplitude(psi0, psi0, vol);
  CHECK(std::abs(s0 - 1.0) <= 1e-6);
  CHECK(std::abs(s0.imag()) <= 1e-15);
  for (double t : {0.3, 1.0, 2.5}) {
    const cplx s = survival_amplitude(psi0, coherent_state_tt(cs, t, grid), vol);
    const cplx expect = coherent_overlap(cs.alpha0[0], 1.0, t) * coherent_overlap(cs.alpha0[1], 1.0, t);
    CHECK(std::abs(s - expect) <= 1e-6);
  }
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const TensorTrain a = fttc::testing::random_tt(rng, grid.dims(), 2);
    const TensorTrain b = fttc::testing::random_tt(rng, grid.dims(), 3);
    CHECK(std::abs(survival_amplitude(a, b, vol)) <=
          tt_norm(a, vol) * tt_norm(b, vol) * (1 + 1e-12));
  }
  const std::vector<Basis> bases(2, Basis{-7.0, 7.0, 48});
  const FunctionTrain f0 = initial_gaussian(gp, bases);
  CHECK(std::abs(survival_amplitude(f0, f0) - 1.0) <= 1e-6);
  const cplx sf = survival_amplitude(f0, coherent_state_ft(cs, 1.0, bases));
  CHECK(std::abs(sf - survival_amplitude(psi0, coherent_state_tt(cs, 1.0, grid), vol)) <= 1e-3);
  CHECK_THROWS_AS(survival_amplitude(psi0, initial_gaussian(gp, GridSpec::uniform(2, -7.0, 7.0, 16)), vol),
                  Error);
}

TEST_CASE("L2 error") {
  const GridSpec grid = GridSpec::uniform(2, -5.0, 5.0, 16);
  const double vol = grid.volume_element();
  std::mt19937_64 rng(17);
  const TensorTrain a = fttc::testing::random_tt(rng, grid.dims(), 3);
  CHECK(l2_error(a, a, vol) <= 1e-7 * tt_norm(a, vol));
  CHECK(l2_error(a, tt_scale(a, -1.0), vol) == doctest::Approx(2.0 * tt_norm(a, vol)).epsilon(1e-12));
  for (int trial = 0; trial < 10; ++trial) {
    const TensorTrain x = fttc::testing::random_tt(rng, grid.dims(), 2);
    const TensorTrain y = fttc::testing::random_tt(rng, grid.dims(), 3);
    const TensorTrain z = fttc::testing::random_tt(rng, grid.dims(), 2);
    const double dense = dense_diff(tt_to_dense(x), tt_to_dense(y)) * std::sqrt(vol);
    CHECK(std::abs(l2_error(x, y, vol) - dense) <= 1e-10 * dense);
    CHECK(l2_error(x, z, vol) <= l2_error(x, y, vol) + l2_error(y, z, vol) + 1e-10);
  }
  const std::vector<Basis> bases(2, Basis{-5.0, 5.0, 12});
  const FunctionTrain f(bases, fttc::testing::random_tt(rng, {12, 12}, 2));
  const FunctionTrain g(bases, fttc::testing::random_tt(rng, {12, 12}, 2));
  const double fg = l2_error(f, g);
  CHECK(fg == doctest::Approx(ft_norm(ft_add(f, ft_scale(g, -1.0)))).epsilon(1e-10));
}

TEST_CASE("density slices") {
  const GridSpec grid = GridSpec::uniform(4, -4.0, 4.0, 8);
  std::mt19937_64 rng(23);
  const TensorTrain psi = fttc::testing::random_tt(rng, grid.dims(), 3);
  const std::size_t fixed[] = {2, 0, 5, 7};
  for (auto [p, q] : {std::pair<std::size_t, std::size_t>{1, 3}, {3, 0}}) {
    const Slice2d s = density_slice2d(psi, grid, p, q, fixed);
    REQUIRE(s.axis_p.size() == 8);
    REQUIRE(s.axis_q.size() == 8);
    double worst = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) {
        std::vector<std::size_t> idx(fixed, fixed + 4);
        idx[p] = i;
        idx[q] = j;
        worst = std::max(worst, std::abs(s.at(i, j) - std::norm(tt_eval(psi, idx))));
      }
    }
    CHECK(worst <= 1e-12 * (1.0 + std::abs(s.at(0, 0))));
  }
  CHECK_THROWS_AS(density_slice2d(psi, grid, 1, 1, fixed), Error);
  CHECK_THROWS_AS(density_slice2d(psi, grid, 1, 4, fixed), Error);

  // Separable Gaussian: the slice peaks at the node nearest the centre.
  const GridSpec g3 = GridSpec::uniform(3, -5.0, 5.0, 32);
  const GaussianParams gp{1.0, {1.0, -0.6, 0.2}, {0.0, 0.0, 0.0}};
  const TensorTrain gauss = initial_gaussian(gp, g3);
  std::vector<std::size_t> fix3;
  for (std::size_t j = 0; j < 3; ++j) fix3.push_back(nearest_node(g3.axes[j], gp.x0[j]));
  const Slice2d s = density_slice2d(gauss, g3, 0, 1, fix3);
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 32; ++j)
      if (s.at(i, j) > s.at(bi, bj)) bi = i, bj = j;
  CHECK(bi == fix3[0]);
  CHECK(bj == fix3[1]);

  // Functional slice against pointwise evaluation.
  const std::vector<Basis> bases(3, Basis{-5.0, 5.0, 32});
  const FunctionTrain f = initial_gaussian(gp, bases);
  const double ap[] = {-1.0, 0.5, 1.0};
  const double aq[] = {0.0, -0.6};
  const double fixed_x[] = {0.0, 0.0, 0.2};
  const Slice2d fs = density_slice2d(f, 0, 1, ap, aq, fixed_x);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double x[] = {ap[i], aq[j], 0.2};
      CHECK(fs.at(i, j) == doctest::Approx(std::norm(ft_eval(f, x))).epsilon(1e-12));
    }
  }
}

TEST_CASE("reduced density matches the dense marginal") {
  const GridSpec grid = GridSpec::uniform(3, -3.0, 3.0, 8);
  std::mt19937_64 rng(31);
  const TensorTrain psi = fttc::testing::random_tt(rng, grid.dims(), 3);
  const auto dense = tt_to_dense(psi);
  const double dx = grid.axes[0].dx();
  for (auto [p, q] : {std::pair<std::size_t, std::size_t>{0, 2}, {1, 2}, {2, 0}}) {
    const Slice2d s = reduced_density2d(psi, grid, p, q);
    const std::size_t other = 3 - p - q;
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) {
        double m = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
          std::size_t idx[3];
          idx[p] = i;
          idx[q] = j;
          idx[other] = k;
          m += std::norm(dense[(idx[0] * 8 + idx[1]) * 8 + idx[2]]) * dx;
        }
        worst = std::max(worst, std::abs(s.at(i, j) - m));
        scale = std::max(scale, m);
      }
    }
    CHECK(worst <= 1e-8 * scale);
  }
}
