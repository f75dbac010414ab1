#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "tgp/errors.hpp"
#include "tgp/reference.hpp"
#include "tgp/spectra.hpp"

using namespace tgp;
using tgp::testing::Rng;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

ModelConfig elastic(int cells) {
  ModelConfig c;
  c.params.gamma = c.params.sigma = 0.0;
  c.cells = cells;
  return c;
}

}  // namespace

TEST_CASE("matrix and pencil eigenvalues") {
  MatrixXd r(2, 2);
  r << 0, -2, 2, 0;
  auto ev = matrix_eigenvalues(r);
  REQUIRE(ev.size() == 2);
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return a.imag() < b.imag(); });
  CHECK(std::abs(ev[0] - Complex(0, -2)) < 1e-14);
  CHECK(std::abs(ev[1] - Complex(0, 2)) < 1e-14);
  CHECK_THROWS_AS(matrix_eigenvalues(MatrixXd::Zero(2, 3)), ShapeError);

  Rng rng(1);
  const MatrixXd a = MatrixXd::NullaryExpr(5, 5, [&] { return rng.normal(); });
  const MatrixXd b = MatrixXd::NullaryExpr(5, 5, [&] { return rng.normal(); });
  const MatrixXd m = b * b.transpose() + MatrixXd::Identity(5, 5);
  const auto pencil = pencil_eigenvalues(a, m);
  const auto direct = matrix_eigenvalues(m.inverse() * a);
  CHECK(matched_distance(pencil, direct) < 1e-10);
  CHECK_THROWS_AS(pencil_eigenvalues(a, -m), SpectrumError);
}

TEST_CASE("undamped elastic core has an imaginary spectrum") {
  for (auto bcs : tgp::testing::kAllBoundarySets) {
    auto c = elastic(16);
    c.law_theta = Fourier{};
    c.law_xi = Fourier{};
    c.params.varpi1 = c.params.varpi2 = 0.0;
    c.bcs = bcs;
    const auto spec = eigenvalues(assemble(c));
    for (const auto& l : spec.eigenvalues) CHECK(std::abs(l.real()) <= 1e-10 * (1.0 + std::abs(l)));
    CHECK(std::abs(spec.abscissa) <= 1e-10);
  }
}

TEST_CASE("conjugate symmetry") {
  Rng rng(2);
  for (int trial = 0; trial < 4; ++trial) {
    const auto sys = assemble(tgp::testing::random_config(rng, tgp::testing::kAllLaws[trial], LawKind::GurtinPipkin,
                                                           tgp::testing::kAllBoundarySets[trial % 2], 8));
    const auto spec = eigenvalues(sys);
    std::vector<Complex> conj;
    for (const auto& l : spec.eigenvalues) conj.push_back(std::conj(l));
    double scale = 0.0;
    for (const auto& l : spec.eigenvalues) scale = std::max(scale, std::abs(l));
    CHECK(matched_distance(spec.eigenvalues, conj) <= 1e-10 * scale);
    CHECK(static_cast<Eigen::Index>(spec.eigenvalues.size()) == sys.dim());
    CHECK(spec.dim == sys.dim());
    CHECK(spec.leading().real() == spec.abscissa);
    CHECK(spec.leading().imag() >= 0.0);
  }
}

TEST_CASE("elastic eigenvalues converge to the Timoshenko dispersion relation") {
  auto c = elastic(0);
  c.params.rho1 = 1.3;
  c.params.b = 0.7;
  c.params.k = 2.0;
  double prev = 0.0;
  for (int n : {32, 64}) {
    c.cells = n;
    const auto spec = eigenvalues(assemble(c));
    std::vector<Complex> oracle;
    for (int j = 1; j <= 3; ++j) {
      for (double w : tgp::testing::timoshenko_frequencies(c.params, j)) oracle.push_back({0.0, w});
    }
    std::vector<Complex> upper;
    for (const auto& l : spec.eigenvalues) {
      if (l.imag() > 1e-8 && std::abs(l.real()) < 1e-8 * std::abs(l)) upper.push_back(l);
    }
    // Oracle frequencies are matched to the closest discrete eigenvalues.
    double err = 0.0;
    for (const auto& w : oracle) {
      double best = INFINITY;
      for (const auto& l : upper) best = std::min(best, std::abs(l - w) / std::abs(w));
      err = std::max(err, best);
    }
    CHECK(err < 1e-2);
    if (prev > 0.0) CHECK(std::log2(prev / err) > 1.8);
    prev = err;
  }
}

TEST_CASE("abscissa sign") {
  ModelConfig c = tgp::testing::gp_config(make_cattaneo(1.0), BoundarySet::MixedDN, 16);
  const double a = spectral_abscissa(assemble(c));
  CHECK(a < -1e-6);
  c.params.varpi1 = c.params.varpi2 = 0.0;
  c.law_theta = Fourier{};
  c.law_xi = Fourier{};
  CHECK(std::abs(spectral_abscissa(assemble(c))) <= 1e-10);
  c.params.varpi1 = c.params.varpi2 = 1.0;
  CHECK(spectral_abscissa(assemble(c)) < -1e-6);
}

TEST_CASE("dominant mode has unit energy") {
  const auto sys = assemble(tgp::testing::gp_config(PronyKernel({{1, 1}}), BoundarySet::MixedDN, 10));
  const auto spec = eigenvalues(sys);
  const VectorXd u = dominant_mode(sys, spec);
  CHECK(energy(sys, u) == doctest::Approx(1.0).epsilon(1e-12));
  // The generator acts on the mode's complex span: u and A u stay in a 2-d invariant plane.
  const VectorXd au = apply_generator(sys, u);
  const VectorXd aau = apply_generator(sys, au);
  const Complex l = spec.leading();
  const VectorXd resid = aau - 2.0 * l.real() * au + std::norm(l) * u;
  CHECK(resid.norm() <= 1e-8 * (aau.norm() + std::norm(l) * u.norm()));
}

TEST_CASE("resolvent norm") {
  Rng rng(3);
  const auto sys = assemble(tgp::testing::random_config(rng, LawKind::GurtinPipkin, LawKind::ColemanGurtin,
                                                         BoundarySet::FullDirichlet, 8));
  const auto spec = eigenvalues(sys);
  // lambda = 0 against an independent LU route.
  CHECK(resolvent_norm(sys, 0.0) ==
        doctest::Approx(tgp::testing::inverse_norm_direct(sys.gram_factor.solve(sys.generator), sys.gram))
            .epsilon(1e-8));
  double top = 0.0;
  for (const auto& l : spec.eigenvalues) top = std::max(top, std::abs(l.imag()));
  for (double lambda : {0.3, 1.0, 7.0, 40.0, 10 * top}) {
    const double n = resolvent_norm(sys, lambda);
    CHECK(std::isfinite(n));
    CHECK(n >= (1.0 - 1e-8) / distance_to_spectrum(spec.eigenvalues, lambda));
    // Resolvent identity bound at delta = 1e-4.
    const double delta = 1e-4;
    CHECK(std::abs(resolvent_norm(sys, lambda + delta) - n) <= n * n * delta * 1.01 + 1e-12 * n);
    CHECK(resolvent_norm(sys, -lambda) == doctest::Approx(n).epsilon(1e-10));
  }
  // Far tail behaves like 1 / lambda.
  const double far = 1e3 * top;
  CHECK(resolvent_norm(sys, far) * far == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("resolvent scan") {
  const auto sys = assemble(tgp::testing::gp_config(PronyKernel({{1, 1}}), BoundarySet::MixedDN, 12));
  const auto spec = eigenvalues(sys);
  const auto grid = default_resolvent_grid(spec);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(1e3));
  const auto scan = resolvent_scan(sys, grid, 2);
  REQUIRE(scan.norms.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::isfinite(scan.norms[i]));
    CHECK(scan.norms[i] >= (1.0 - 1e-8) / distance_to_spectrum(spec.eigenvalues, grid[i]));
  }
  CHECK(scan.sup_norm == *std::max_element(scan.norms.begin(), scan.norms.end()));
  CHECK(std::abs(scan.argmax - spec.leading().imag()) <= 0.1 * std::abs(spec.leading().imag()));
  // Same values whatever the worker count.
  const auto serial = resolvent_scan(sys, grid, 1);
  CHECK(serial.norms == scan.norms);
  CHECK_THROWS_AS(resolvent_scan(sys, {}), SpectrumError);

  ResolventGridOptions opts;
  opts.include_zero = false;
  opts.anchored_eigenvalues = 0;
  opts.log_points = 10;
  const auto plain = default_resolvent_grid(spec, opts);
  CHECK(plain.size() == 10);
  CHECK(plain.front() == doctest::Approx(1e-2));
}

TEST_CASE("spectral distances") {
  const std::vector<Complex> a{{-1, 2}, {-1, -2}};
  const std::vector<Complex> b{{-1, -2.1}, {-1.2, 2}, {5, 5}};
  CHECK(matched_distance(a, b) == doctest::Approx(0.2));
  CHECK(matched_distance({}, b) == 0.0);
  CHECK_THROWS_AS(matched_distance(b, a), ShapeError);
  CHECK(distance_to_spectrum(a, 2.0) == doctest::Approx(1.0));
  CHECK(distance_to_spectrum(a, 0.0) == doctest::Approx(std::sqrt(5.0)));
}
