#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "tgp/errors.hpp"
#include "tgp/spaces.hpp"

using namespace tgp;
using tgp::testing::Rng;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr SpaceFlavor kFlavors[] = {SpaceFlavor::Dirichlet, SpaceFlavor::NeumannZeroMean, SpaceFlavor::Free,
                                    SpaceFlavor::FreeZeroMean};

double smallest_generalized(const MatrixXd& k, const MatrixXd& m) {
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(k, m);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("mesh") {
  const Mesh m(2.0, 4);
  CHECK(m.h() == 0.5);
  CHECK(m.nodes() == 5);
  CHECK(m.node(4) == 2.0);
  CHECK(m.node_coordinates()(2) == 1.0);
  CHECK_THROWS_AS(Mesh(1.0, 1), MeshError);
  CHECK_THROWS_AS(Mesh(0.0, 4), MeshError);
  CHECK_THROWS_AS(Mesh(-1.0, 4), MeshError);
}

TEST_CASE("space dimensions") {
  const Mesh m(1.0, 8);
  CHECK(FieldSpace(m, SpaceFlavor::Dirichlet).dofs() == 7);
  CHECK(FieldSpace(m, SpaceFlavor::Free).dofs() == 9);
  CHECK(FieldSpace(m, SpaceFlavor::NeumannZeroMean).dofs() == 8);
  CHECK(FieldSpace(m, SpaceFlavor::FreeZeroMean).dofs() == 8);
  CHECK(is_zero_mean(SpaceFlavor::NeumannZeroMean));
  CHECK_FALSE(is_zero_mean(SpaceFlavor::Dirichlet));
  // Dirichlet basis vanishes at the endpoints.
  const auto& b = FieldSpace(m, SpaceFlavor::Dirichlet).basis();
  CHECK(b.row(0).norm() == 0.0);
  CHECK(b.row(8).norm() == 0.0);
}

TEST_CASE("mass matrix examples") {
  const Mesh m2(1.0, 2);
  const MatrixXd md = build_mass_matrix(FieldSpace(m2, SpaceFlavor::Dirichlet));
  REQUIRE(md.rows() == 1);
  CHECK(md(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const Mesh m(2.5, 10);
  const MatrixXd mf = build_mass_matrix(FieldSpace(m, SpaceFlavor::Free));
  CHECK(mf.sum() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(mf(3, 3) == doctest::Approx(4.0 * m.h() / 6.0));
  CHECK(mf(3, 4) == doctest::Approx(m.h() / 6.0));
  CHECK(mf(0, 0) == doctest::Approx(2.0 * m.h() / 6.0));

  // Exact on a linear function: int (a + c x)^2 over (0, L).
  const double a = 0.3, c = -1.7, len = m.length();
  VectorXd f(m.nodes());
  for (int j = 0; j < m.nodes(); ++j) f(j) = a + c * m.node(j);
  const double exact = (std::pow(a + c * len, 3) - std::pow(a, 3)) / (3.0 * c);
  CHECK(f.dot(mf * f) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("stiffness matrix examples") {
  const MatrixXd kd = build_stiffness_matrix(FieldSpace(Mesh(1.0, 2), SpaceFlavor::Dirichlet));
  REQUIRE(kd.rows() == 1);
  CHECK(kd(0, 0) == doctest::Approx(4.0));

  const Mesh m(1.0, 16);
  const MatrixXd kf = build_stiffness_matrix(FieldSpace(m, SpaceFlavor::Free));
  CHECK((kf * VectorXd::Ones(m.nodes())).norm() < 1e-12);

  // First Dirichlet eigenvalue approaches (pi/L)^2 at second order.
  const double exact = M_PI * M_PI / 4.0;
  double prev_err = 0.0;
  for (int n : {16, 32, 64}) {
    const FieldSpace s(Mesh(2.0, n), SpaceFlavor::Dirichlet);
    const double err = std::abs(smallest_generalized(build_stiffness_matrix(s), build_mass_matrix(s)) - exact);
    CHECK(err < 0.01 * exact);
    if (prev_err > 0.0) CHECK(std::log2(prev_err / err) > 1.8);
    prev_err = err;
  }
}

TEST_CASE("symmetry, definiteness and Poincare bound") {
  for (int n : {4, 17, 40}) {
    for (double len : {0.5, 1.0, 3.0}) {
      const Mesh m(len, n);
      for (auto flavor : kFlavors) {
        CAPTURE(n);
        CAPTURE(len);
        const FieldSpace s(m, flavor);
        const MatrixXd mm = build_mass_matrix(s);
        const MatrixXd kk = build_stiffness_matrix(s);
        CHECK((mm - mm.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * mm.cwiseAbs().maxCoeff());
        CHECK((kk - kk.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * kk.cwiseAbs().maxCoeff());
        CHECK(Eigen::LLT<MatrixXd>(mm).info() == Eigen::Success);
        if (flavor != SpaceFlavor::Free) {
          // Discrete Poincare: P1 eigenvalues sit above the continuous ones.
          const double bound = M_PI * M_PI / (len * len);
          CHECK(smallest_generalized(kk, mm) >= bound * (1.0 - 1e-12));
        }
      }
    }
  }
}

TEST_CASE("gradient coupling") {
  const Mesh m(2.0, 10);
  const FieldSpace free(m, SpaceFlavor::Free);
  const FieldSpace dir(m, SpaceFlavor::Dirichlet);
  // Ramp derivative against the constant 1.
  const double slope = 0.75;
  VectorXd ramp(m.nodes());
  for (int j = 0; j < m.nodes(); ++j) ramp(j) = slope * m.node(j) - 0.2;
  const MatrixXd gff = build_gradient_coupling(free, free);
  CHECK(VectorXd::Ones(m.nodes()).dot(gff * ramp) == doctest::Approx(slope * m.length()).epsilon(1e-14));

  const MatrixXd gdd = build_gradient_coupling(dir, dir);
  CHECK((gdd + gdd.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  // Free/free: G + G^T is the boundary term diag(-1, 0, ..., 0, 1).
  MatrixXd boundary = MatrixXd::Zero(m.nodes(), m.nodes());
  boundary(0, 0) = -1.0;
  boundary(m.nodes() - 1, m.nodes() - 1) = 1.0;
  CHECK((gff + gff.transpose() - boundary).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(build_gradient_coupling(free, FieldSpace(Mesh(2.0, 11), SpaceFlavor::Free)), ShapeError);
  CHECK_THROWS_AS(build_mass_matrix(free, FieldSpace(Mesh(1.0, 10), SpaceFlavor::Free)), ShapeError);
}

TEST_CASE("gradient coupling matches quadrature on random functions") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(2, 24);
    const double len = rng.uniform(0.3, 4.0);
    const Mesh m(len, n);
    const auto from = kFlavors[rng.integer(0, 3)];
    const auto to = kFlavors[rng.integer(0, 3)];
    const FieldSpace sf(m, from), st(m, to);
    const VectorXd u = rng.vector(sf.dofs()), v = rng.vector(st.dofs());
    const VectorXd un = sf.to_nodal(u), vn = st.to_nodal(v);
    const double assembled = v.dot(build_gradient_coupling(sf, st) * u);
    // Trapezoid on each cell separately (the integrand is linear per cell).
    double quad = 0.0;
    for (int e = 0; e < n; ++e) {
      quad += tgp::testing::trapezoid(
          [&](double x) {
            const double xm = std::clamp(x, m.node(e) + 1e-14 * len, m.node(e + 1) - 1e-14 * len);
            return tgp::testing::p1_slope(un, len, xm) * tgp::testing::p1_value(vn, len, x);
          },
          m.node(e), m.node(e + 1), 200);
    }
    CAPTURE(trial);
    CHECK(std::abs(assembled - quad) <= 1e-10 * (1.0 + std::abs(quad)));
    // Cross mass against the same oracle.
    const double mass = v.dot(build_mass_matrix(sf, st) * u);
    double mquad = 0.0;
    for (int e = 0; e < n; ++e) {
      mquad += tgp::testing::trapezoid(
          [&](double x) { return tgp::testing::p1_value(un, len, x) * tgp::testing::p1_value(vn, len, x); },
          m.node(e), m.node(e + 1), 2000);
    }
    CHECK(std::abs(mass - mquad) <= 1e-6 * (1.0 + std::abs(mquad)));
  }
}

TEST_CASE("zero-mean projector") {
  Rng rng(11);
  const Mesh m(1.7, 13);
  const MatrixXd mass = nodal_mass(m);
  for (auto flavor : {SpaceFlavor::NeumannZeroMean, SpaceFlavor::Free, SpaceFlavor::FreeZeroMean}) {
    const FieldSpace s(m, flavor);
    const MatrixXd p = zero_mean_projector(s);
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((p * VectorXd::Ones(m.nodes())).norm() < 1e-14);
    // Mass-symmetric: M P = P^T M.
    CHECK((mass * p - p.transpose() * mass).cwiseAbs().maxCoeff() < 1e-14);
    for (int t = 0; t < 10; ++t) {
      const VectorXd v = rng.vector(m.nodes());
      const VectorXd pv = p * v;
      CHECK(std::abs(VectorXd::Ones(m.nodes()).dot(mass * pv)) <= 1e-14 * (1.0 + v.norm()));
      CHECK((p * pv - pv).norm() <= 1e-14 * (1.0 + v.norm()));
    }
  }
  CHECK_THROWS_AS(zero_mean_projector(FieldSpace(m, SpaceFlavor::Dirichlet)), std::logic_error);
}

TEST_CASE("zero-mean basis functions have zero integral") {
  const Mesh m(1.0, 9);
  const FieldSpace s(m, SpaceFlavor::NeumannZeroMean);
  const VectorXd means = s.basis().transpose() * nodal_mass(m) * VectorXd::Ones(m.nodes());
  CHECK(means.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("nodal round trip") {
  Rng rng(3);
  const Mesh m(1.0, 12);
  for (auto flavor : kFlavors) {
    const FieldSpace s(m, flavor);
    const VectorXd c = rng.vector(s.dofs());
    CHECK((s.from_nodal(s.to_nodal(c)) - c).norm() < 1e-12);
    CHECK_THROWS_AS(s.to_nodal(VectorXd::Zero(s.dofs() + 1)), ShapeError);
    CHECK_THROWS_AS(s.from_nodal(VectorXd::Zero(m.nodes() + 1)), ShapeError);
  }
}

TEST_CASE("cell operators") {
  const Mesh m(2.0, 8);
  const MatrixXd cm = cell_mass(m);
  CHECK(cm.rows() == 8);
  CHECK(cm.diagonal().sum() == doctest::Approx(2.0));
  const FieldSpace free(m, SpaceFlavor::Free);
  const MatrixXd cg = cell_gradient(free);
  REQUIRE(cg.rows() == 8);
  REQUIRE(cg.cols() == 9);
  // int phi' over a cell equals the jump of phi across it.
  VectorXd v(9);
  for (int j = 0; j < 9; ++j) v(j) = j * j;
  const VectorXd jumps = cg * v;
  for (int e = 0; e < 8; ++e) CHECK(jumps(e) == doctest::Approx(v(e + 1) - v(e)));
}
