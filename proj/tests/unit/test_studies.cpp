#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "generators.hpp"
#include "tgp/config.hpp"
#include "tgp/errors.hpp"
#include "tgp/studies.hpp"

using namespace tgp;

namespace {

StudySpec small_sweep(int draws, int cells) {
  StudySpec s = parse_study("study.kind = sweep\nstudy.bcs = both\nlaw.theta.variant = gp\n"
                            "law.theta.kernel.terms = 1:1, 2:2\nlaw.xi.variant = gp\nlaw.xi.kernel.terms = 1:1, 2:2\n");
  s.sweep.draws = draws;
  s.base.cells = cells;
  s.seed = 77;
  return s;
}

std::vector<std::string> dumps(const std::vector<OutputRecord>& records) {
  std::vector<std::string> out;
  for (const auto& r : records) out.push_back(to_json(r, false).dump());
  return out;
}

}  // namespace

TEST_CASE("sweep draws") {
  StudySpec s = small_sweep(5, 8);
  const auto draws = sweep_draws(s);
  REQUIRE(draws.size() == 8);
  for (int i = 0; i < 5; ++i) {
    CHECK(draws[i].label == "draw");
    for (const auto& r : s.sweep.ranges) {
      const double v = param_value(draws[i].params, r.name);
      CHECK(v >= r.lo);
      CHECK(v <= r.hi);
    }
    CHECK(draws[i].params.rho3 == 1.0);
  }
  auto ratio = [](const PhysicalParams& p) { return p.rho1 * p.b / (p.rho2 * p.k); };
  CHECK(draws[5].label == "equal-wave-speed");
  CHECK(ratio(draws[5].params) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(draws[6].label == "separated-100");
  CHECK(ratio(draws[6].params) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(draws[7].label == "separated-0.01");
  CHECK(ratio(draws[7].params) == doctest::Approx(0.01).epsilon(1e-14));

  // Seeded: identical twice, different under another seed.
  const auto again = sweep_draws(s);
  CHECK(again[2].params == draws[2].params);
  s.seed = 78;
  CHECK_FALSE(sweep_draws(s)[2].params == draws[2].params);

  s.sweep.wave_speed_slices = false;
  s.sweep.diagnostic_zero_damping = true;
  const auto diag = sweep_draws(s);
  REQUIRE(diag.size() == 6);
  CHECK(diag.back().label == "zero-damping");
  CHECK(diag.back().params.varpi1 == 0.0);
}

TEST_CASE("sweep run, determinism and replay") {
  StudySpec s = small_sweep(3, 8);
  s.sweep.diagnostic_zero_damping = true;
  s.threads = 2;
  const auto a = run_parameter_sweep(s);
  REQUIRE(a.records.size() == 2 * 7);
  for (std::size_t i = 0; i + 2 < a.records.size(); ++i) {
    CAPTURE(i);
    CHECK_FALSE(a.records[i].failure);
    CHECK(a.abscissas[i] < -1e-6);
  }
  // The undamped diagnostic draw is flagged under both boundary sets.
  CHECK(a.records[12].failure);
  CHECK(a.records[13].failure);
  CHECK(any_failure(a.records));
  CHECK(a.records[12].results["label"] == "zero-damping");

  s.threads = 1;
  const auto b = run_parameter_sweep(s);
  CHECK(dumps(a.records) == dumps(b.records));

  // Every record reproduces its own result from the echo alone.
  for (std::size_t i : {std::size_t{3}, std::size_t{12}}) {
    const ModelConfig c = record_model(a.records[i]);
    CHECK(spectral_abscissa(assemble(c)) == a.abscissas[i]);
  }

  const Json j = to_json(a.records[0]);
  CHECK(j["study"] == "sweep");
  CHECK(j["status"] == "ok");
  CHECK(j["config"]["mesh.n"] == "8");
  CHECK(j["provenance"]["cells"] == 8);
  CHECK(j["provenance"]["modes_theta"] == 2);
  CHECK(j["provenance"].contains("timestamp"));
  CHECK_FALSE(to_json(a.records[0], false)["provenance"].contains("timestamp"));
  CHECK(to_json(a.records[12])["status"] == "FAILURE");
}

TEST_CASE("combination matrix") {
  StudySpec s = parse_study("study.kind = combo\nstudy.bcs = both\nmesh.n = 8\n");
  const auto c = run_combination_matrix(s);
  REQUIRE(c.records.size() == 32);
  REQUIRE(c.abscissa.size() == 2);
  for (std::size_t b = 0; b < 2; ++b) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) CHECK(c.abscissa[b][i][j] < -1e-6);
    }
    CHECK(c.fourier_crosscheck[b] <= 1e-8);
  }
  CHECK_FALSE(any_failure(c.records));
  CHECK(c.records[5].results["theta_law"] == "F");
  CHECK(c.records[5].results["xi_law"] == "F");
  CHECK(c.records[5].results.contains("direct_assembly_mismatch"));
  CHECK(c.records[1].results["theta_law"] == "GP");
  CHECK(c.records[1].results["xi_law"] == "F");
  CHECK(combo_law(s, LawKind::Cattaneo).kind() == LawKind::Cattaneo);
}

TEST_CASE("Cattaneo equivalence study") {
  StudySpec s = parse_study("study.kind = cattaneo-eq\nstudy.bcs = both\nmesh.n = 8\ncattaneo.tau = 0.1\n");
  const auto r = run_cattaneo_equivalence(s);
  REQUIRE(r.mismatch.size() == 2);
  for (double m : r.mismatch) CHECK(m <= 1e-8);
  CHECK_FALSE(any_failure(r.records));
  s.cattaneo.tau = 0.0;
  CHECK_THROWS_AS(run_cattaneo_equivalence(s), DomainError);
  s.cattaneo.tau = 1.0;
  s.cattaneo.varsigma = -2.0;
  CHECK_THROWS_AS(run_cattaneo_equivalence(s), DomainError);
}

TEST_CASE("limit kernels") {
  StudySpec s;
  s.limit.kernel = PronyKernel({{2, 1}, {1, 3}});
  const PronyKernel unit = normalize_unit_mass(s.limit.kernel);
  CHECK(limit_kernel(s, 1.0) == unit);
  CHECK(total_mass(limit_kernel(s, 0.125)) == doctest::Approx(1.0).epsilon(1e-12));
  s.limit.target = LawKind::ColemanGurtin;
  s.limit.ell = 0.25;
  const PronyKernel cg = limit_kernel(s, 0.5);
  CHECK(cg.size() == 4);
  CHECK(total_mass(cg) == doctest::Approx(1.0).epsilon(1e-12));
  for (double x : {0.0, 0.4, 2.0}) {
    CHECK(evaluate_mu(cg, x) ==
          doctest::Approx(0.75 * evaluate_mu(rescale(unit, 0.5), x) + 0.25 * evaluate_mu(unit, x)));
  }
  const ModelConfig target = limit_target(s, BoundarySet::FullDirichlet);
  CHECK(target.law_theta.kind() == LawKind::ColemanGurtin);
  CHECK(target.law_xi.memory_fraction() == 0.25);
  CHECK(target.bcs == BoundarySet::FullDirichlet);
}

TEST_CASE("tracked eigenvalues") {
  const std::vector<Complex> s{{-1, 0}, {-0.1, 3}, {-0.1, -3}, {-5, 0}, {-0.2, 1}, {-0.2, -1}};
  const auto t = smallest_eigenvalues(s, 3);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == Complex(-1, 0));
  CHECK(t[1] == Complex(-0.2, 1));
  CHECK(t[2] == Complex(-0.1, 3));
  CHECK(smallest_eigenvalues(s, 10).size() == 4);
  CHECK(tracked_distance(t, s) == 0.0);
  CHECK(tracked_distance({{-1, 0}}, {{-1.1, 0}}) == doctest::Approx(0.1));
}

TEST_CASE("singular limit study") {
  // Unit-mass kernel of relaxation time 0.1 on a beam of length 4.
  StudySpec s = parse_study("study.kind = limit\nparams.L = 4\nmesh.n = 12\nlimit.kernel.terms = 100:10\n");
  const auto r = run_singular_limit(s);
  REQUIRE(r.distance.size() == 7);
  CHECK(r.tracked.size() == 10);
  CHECK(r.decreasing_tail);
  CHECK(r.converged);
  CHECK(r.distance.back() < r.distance.front());
  CHECK_FALSE(any_failure(r.records));

  // A ladder stopping early cannot reach the threshold.
  s.limit.eps = {1.0, 0.5, 0.25};
  const auto early = run_singular_limit(s);
  CHECK_FALSE(early.converged);
  CHECK(early.records.back().failure);
}

TEST_CASE("single-model studies") {
  StudySpec s = parse_study("law.theta.variant = gp\nlaw.theta.kernel.terms = 1:1\nlaw.xi.variant = cattaneo\n"
                            "law.xi.tau = 0.5\nmesh.n = 8\nsimulate.t_final = 2\nsimulate.dt = 0.05\n");
  const auto sp = run_spectrum(s);
  CHECK_FALSE(sp.record.failure);
  CHECK(sp.record.results["abscissa"].get<double>() == sp.spectrum.abscissa);

  const auto sim = run_simulate(s);
  CHECK_FALSE(sim.record.failure);
  CHECK(sim.trajectory.energies.front() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sim.record.results["monotone"] == true);
  s.simulate.initial = StudySpec::Simulate::Initial::Random;
  const auto r1 = run_simulate(s);
  const auto r2 = run_simulate(s);
  CHECK(r1.trajectory.energies == r2.trajectory.energies);

  s.resolvent.log_points = 20;
  s.resolvent.anchored_eigenvalues = 2;
  s.resolvent.refine_points = 5;
  const auto res = run_resolvent(s);
  CHECK_FALSE(res.record.failure);
  CHECK(res.record.results["lower_bound_ratio"].get<double>() >= 1.0 - 1e-8);
  CHECK(res.scan.lambdas.size() == res.record.results["points"].get<std::size_t>());
}

TEST_CASE("parallel_for") {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  std::atomic<int> ran{0};
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [&](std::size_t i) {
                                 ++ran;
                                 if (i == 4) throw std::runtime_error("job failed");
                               }),
                  std::runtime_error);
  parallel_for(0, 2, [&](std::size_t) { FAIL("no jobs expected"); });
}
