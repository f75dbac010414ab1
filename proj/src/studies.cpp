#include "tgp/studies.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "tgp/errors.hpp"
#include "tgp/reference.hpp"

namespace tgp {

OutputRecord make_record(const std::string& study, std::size_t index, const ModelConfig& config) {
  OutputRecord r;
  r.study = study;
  r.index = index;
  r.config = echo_model(config);
  r.cells = config.cells;
  r.modes_theta = static_cast<int>(config.law_theta.mode_count());
  r.modes_xi = static_cast<int>(config.law_xi.mode_count());
  return r;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

ModelConfig with_bcs(ModelConfig c, BoundarySet bcs) {
  c.bcs = bcs;
  return c;
}

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

constexpr std::array<LawKind, 4> kComboOrder{LawKind::GurtinPipkin, LawKind::Fourier, LawKind::Cattaneo,
                                             LawKind::ColemanGurtin};

}  // namespace

Json to_json(const OutputRecord& r, bool with_timestamp) {
  Json config = Json::object();
  for (const auto& [k, v] : r.config) config[k] = v;
  Json prov = {{"code_version", TGP_VERSION},
               {"cells", r.cells},
               {"modes_theta", r.modes_theta},
               {"modes_xi", r.modes_xi},
               {"dim", r.dim}};
  if (with_timestamp) prov["timestamp"] = utc_timestamp();
  return Json{{"study", r.study},
              {"index", r.index},
              {"status", r.failure ? "FAILURE" : "ok"},
              {"config", config},
              {"results", r.results},
              {"provenance", prov}};
}

ModelConfig record_model(const OutputRecord& r) { return parse_model(format_flat(r.config)); }

bool any_failure(const std::vector<OutputRecord>& records) {
  return std::any_of(records.begin(), records.end(), [](const OutputRecord& r) { return r.failure; });
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Sweep

std::vector<SweepDraw> sweep_draws(const StudySpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::vector<SweepDraw> out;
  for (int d = 0; d < spec.sweep.draws; ++d) {
    PhysicalParams p = spec.base.params;
    for (const auto& r : spec.sweep.ranges) {
      const double lo = std::log(r.lo), hi = std::log(r.hi);
      param_ref(p, r.name) = std::exp(lo + (hi - lo) * unit_draw(rng));
    }
    out.push_back({p, "draw"});
  }
  const PhysicalParams anchor = out.empty() ? spec.base.params : out.front().params;
  if (spec.sweep.wave_speed_slices) {
    // rho2 is chosen so that rho1 b / (rho2 k) hits the requested ratio.
    for (const auto& [ratio, label] : {std::pair{1.0, "equal-wave-speed"}, std::pair{100.0, "separated-100"},
                                       std::pair{0.01, "separated-0.01"}}) {
      PhysicalParams p = anchor;
      p.rho2 = p.rho1 * p.b / (ratio * p.k);
      out.push_back({p, label});
    }
  }
  if (spec.sweep.diagnostic_zero_damping) {
    PhysicalParams p = anchor;
    p.varpi1 = 0.0;
    p.varpi2 = 0.0;
    out.push_back({p, "zero-damping"});
  }
  return out;
}

SweepResult run_parameter_sweep(const StudySpec& spec) {
  spec.validate();
  const auto draws = sweep_draws(spec);
  const std::size_t nb = spec.bcs_list.size();
  const std::size_t count = draws.size() * nb;
  SweepResult out;
  out.records.resize(count);
  out.abscissas.resize(count);
  parallel_for(count, spec.threads, [&](std::size_t i) {
    const auto& draw = draws[i / nb];
    ModelConfig c = with_bcs(spec.base, spec.bcs_list[i % nb]);
    c.params = draw.params;
    const SemidiscreteSystem sys = assemble(c);
    const SpectrumReport spectrum = eigenvalues(sys);
    OutputRecord r = make_record("sweep", i, c);
    r.dim = static_cast<long>(sys.dim());
    r.failure = !(spectrum.abscissa <= spec.sweep.threshold);
    r.results = {{"label", draw.label},
                 {"abscissa", spectrum.abscissa},
                 {"leading", complex_json(spectrum.leading())},
                 {"wave_speed_ratio", c.params.rho1 * c.params.b / (c.params.rho2 * c.params.k)},
                 {"threshold", spec.sweep.threshold}};
    out.abscissas[i] = spectrum.abscissa;
    out.records[i] = std::move(r);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Combination matrix

KernelSpec combo_law(const StudySpec& spec, LawKind kind) {
  switch (kind) {
    case LawKind::GurtinPipkin: return GurtinPipkin{spec.combo.kernel};
    case LawKind::Fourier: return Fourier{};
    case LawKind::Cattaneo: return Cattaneo{spec.combo.tau};
    case LawKind::ColemanGurtin: return ColemanGurtin{spec.combo.ell, spec.combo.kernel};
  }
  throw ConfigError("unknown law kind");
}

ComboResult run_combination_matrix(const StudySpec& spec) {
  spec.validate();
  ComboResult out;
  out.bcs = spec.bcs_list;
  const std::size_t nb = out.bcs.size();
  out.abscissa.resize(nb);
  out.fourier_crosscheck.assign(nb, 0.0);
  out.records.resize(16 * nb);
  parallel_for(16 * nb, spec.threads, [&](std::size_t n) {
    const std::size_t b = n / 16, i = (n % 16) / 4, j = n % 4;
    ModelConfig c = with_bcs(spec.base, out.bcs[b]);
    c.law_theta = combo_law(spec, kComboOrder[i]);
    c.law_xi = combo_law(spec, kComboOrder[j]);
    const SemidiscreteSystem sys = assemble(c);
    const SpectrumReport spectrum = eigenvalues(sys);
    OutputRecord r = make_record("combo", n, c);
    r.dim = static_cast<long>(sys.dim());
    r.failure = !(spectrum.abscissa <= spec.sweep.threshold);
    r.results = {{"theta_law", law_abbrev(kComboOrder[i])},
                 {"xi_law", law_abbrev(kComboOrder[j])},
                 {"abscissa", spectrum.abscissa},
                 {"leading", complex_json(spectrum.leading())}};
    if (kComboOrder[i] == LawKind::Fourier && kComboOrder[j] == LawKind::Fourier) {
      const PencilSystem direct = assemble_fourier_direct(c);
      const auto other = pencil_eigenvalues(direct.generator, direct.gram);
      double radius = 0.0;
      for (const auto& l : spectrum.eigenvalues) radius = std::max(radius, std::abs(l));
      double d = std::numeric_limits<double>::infinity();
      if (other.size() == spectrum.eigenvalues.size()) d = matched_distance(spectrum.eigenvalues, other) / radius;
      out.fourier_crosscheck[b] = d;
      r.results["direct_assembly_mismatch"] = d;
      if (!(d <= 1e-8)) r.failure = true;
    }
    out.abscissa[b][i][j] = spectrum.abscissa;
    out.records[n] = std::move(r);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Cattaneo equivalence

CattaneoComparison run_cattaneo_equivalence(const StudySpec& spec) {
  const double tau = spec.cattaneo.tau, varsigma = spec.cattaneo.varsigma;
  if (!(tau > 0.0) || !(varsigma > 0.0)) throw DomainError("Cattaneo relaxation times must be > 0");
  CattaneoComparison out;
  out.bcs = spec.bcs_list;
  out.mismatch.assign(out.bcs.size(), 0.0);
  out.records.resize(out.bcs.size());
  parallel_for(out.bcs.size(), spec.threads, [&](std::size_t b) {
    ModelConfig c = with_bcs(spec.base, out.bcs[b]);
    c.law_theta = GurtinPipkin{make_cattaneo(tau)};
    c.law_xi = GurtinPipkin{make_cattaneo(varsigma)};
    const SemidiscreteSystem sys = assemble(c);
    const auto memory = eigenvalues(sys).eigenvalues;

    const FluxSystem flux = assemble_cattaneo_flux(c, tau, varsigma);
    auto explicit_flux = pencil_eigenvalues(flux.pencil.generator, flux.pencil.gram);
    auto remove_nearest = [&](double target, int count) {
      for (int k = 0; k < count; ++k) {
        auto it = std::min_element(explicit_flux.begin(), explicit_flux.end(), [&](Complex x, Complex y) {
          return std::abs(x - target) < std::abs(y - target);
        });
        explicit_flux.erase(it);
      }
    };
    remove_nearest(-1.0 / tau, flux.decoupled_q);
    remove_nearest(-1.0 / varsigma, flux.decoupled_p);
    if (explicit_flux.size() != memory.size()) {
      throw AssemblyError("Cattaneo formulations disagree in reduced dimension: " +
                          std::to_string(memory.size()) + " vs " + std::to_string(explicit_flux.size()));
    }
    const double mismatch = matched_distance(memory, explicit_flux);
    OutputRecord r = make_record("cattaneo-eq", b, c);
    r.dim = static_cast<long>(sys.dim());
    r.failure = !(mismatch <= spec.cattaneo.threshold);
    r.results = {{"tau", tau},
                 {"varsigma", varsigma},
                 {"mismatch", mismatch},
                 {"flux_dim", static_cast<long>(flux.pencil.gram.rows())},
                 {"decoupled_flux_modes", flux.decoupled_q + flux.decoupled_p},
                 {"threshold", spec.cattaneo.threshold}};
    out.mismatch[b] = mismatch;
    out.records[b] = std::move(r);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Singular limit

PronyKernel limit_kernel(const StudySpec& spec, double eps) {
  const PronyKernel k = normalize_unit_mass(spec.limit.kernel);
  if (spec.limit.target == LawKind::Fourier) return rescale(k, eps);
  const double ell = spec.limit.ell;
  return combine(scale_weights(rescale(k, eps), 1.0 - ell), scale_weights(k, ell));
}

ModelConfig limit_target(const StudySpec& spec, BoundarySet bcs) {
  ModelConfig c = with_bcs(spec.base, bcs);
  if (spec.limit.target == LawKind::Fourier) {
    c.law_theta = Fourier{};
  } else {
    c.law_theta = ColemanGurtin{spec.limit.ell, normalize_unit_mass(spec.limit.kernel)};
  }
  c.law_xi = c.law_theta;
  return c;
}

std::vector<Complex> smallest_eigenvalues(const std::vector<Complex>& spectrum, int count) {
  std::vector<Complex> upper;
  for (const auto& l : spectrum) {
    if (l.imag() >= 0.0) upper.push_back(l);
  }
  std::sort(upper.begin(), upper.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  if (static_cast<int>(upper.size()) > count) upper.resize(static_cast<std::size_t>(count));
  return upper;
}

double tracked_distance(const std::vector<Complex>& tracked, const std::vector<Complex>& spectrum) {
  double worst = 0.0;
  for (const auto& t : tracked) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mu : spectrum) best = std::min(best, std::abs(mu - t));
    worst = std::max(worst, best / std::abs(t));
  }
  return worst;
}

LimitReport run_singular_limit(const StudySpec& spec) {
  spec.validate();
  const BoundarySet bcs = spec.bcs_list.front();
  const ModelConfig target = limit_target(spec, bcs);
  LimitReport out;
  out.tracked = smallest_eigenvalues(eigenvalues(assemble(target)).eigenvalues, spec.limit.tracked);
  out.eps = spec.limit.eps;
  out.distance.assign(out.eps.size(), 0.0);
  out.records.resize(out.eps.size());
  parallel_for(out.eps.size(), spec.threads, [&](std::size_t i) {
    ModelConfig c = with_bcs(spec.base, bcs);
    c.law_theta = GurtinPipkin{limit_kernel(spec, out.eps[i])};
    c.law_xi = c.law_theta;
    const SemidiscreteSystem sys = assemble(c);
    const SpectrumReport spectrum = eigenvalues(sys);
    out.distance[i] = tracked_distance(out.tracked, spectrum.eigenvalues);
    OutputRecord r = make_record("limit", i, c);
    r.dim = static_cast<long>(sys.dim());
    r.results = {{"eps", out.eps[i]},
                 {"target", law_tag(spec.limit.target)},
                 {"distance", out.distance[i]},
                 {"abscissa", spectrum.abscissa}};
    out.records[i] = std::move(r);
  });
  const std::size_t n = out.distance.size();
  out.decreasing_tail = n >= 3 && out.distance[n - 3] > out.distance[n - 2] && out.distance[n - 2] > out.distance[n - 1];
  out.converged = out.decreasing_tail && out.distance.back() <= spec.limit.threshold;
  if (!out.converged && !out.records.empty()) {
    out.records.back().failure = true;
  }
  for (auto& r : out.records) {
    r.results["decreasing_tail"] = out.decreasing_tail;
    r.results["threshold"] = spec.limit.threshold;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-model studies

SimulateResult run_simulate(const StudySpec& spec) {
  spec.validate();
  const ModelConfig c = with_bcs(spec.base, spec.bcs_list.front());
  const SemidiscreteSystem sys = assemble(c);
  const SpectrumReport spectrum = eigenvalues(sys);
  Eigen::VectorXd u0;
  if (spec.simulate.initial == StudySpec::Simulate::Initial::Dominant) {
    u0 = dominant_mode(sys, spectrum);
  } else {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal;
    u0.resize(sys.dim());
    for (Eigen::Index i = 0; i < u0.size(); ++i) u0(i) = normal(rng);
    u0 /= std::sqrt(energy(sys, u0));
  }
  SimulateOptions opts;
  opts.transient_fraction = spec.simulate.transient;
  SimulateResult out{simulate(sys, u0, spec.simulate.dt, spec.simulate.t_final, opts), make_record("simulate", 0, c)};
  const auto& tr = out.trajectory;
  out.record.dim = static_cast<long>(sys.dim());
  out.record.results = {{"dt", spec.simulate.dt},
                        {"t_final", spec.simulate.t_final},
                        {"initial", spec.simulate.initial == StudySpec::Simulate::Initial::Dominant ? "dominant" : "random"},
                        {"energy_initial", tr.energies.front()},
                        {"energy_final", tr.energies.back()},
                        {"fitted_rate", tr.fitted_rate()},
                        {"abscissa", spectrum.abscissa}};
  if (tr.fit) out.record.results["fit_residual"] = tr.fit->residual;
  bool monotone = true;
  for (std::size_t k = 1; k < tr.energies.size(); ++k) {
    if (tr.energies[k] > tr.energies[k - 1] + 1e-12 * tr.energies.front()) monotone = false;
  }
  out.record.results["monotone"] = monotone;
  out.record.failure = !monotone;
  return out;
}

SpectrumResult run_spectrum(const StudySpec& spec) {
  spec.validate();
  const ModelConfig c = with_bcs(spec.base, spec.bcs_list.front());
  const SemidiscreteSystem sys = assemble(c);
  SpectrumResult out{eigenvalues(sys), make_record("spectrum", 0, c)};
  out.record.dim = static_cast<long>(sys.dim());
  out.record.results = {{"abscissa", out.spectrum.abscissa},
                        {"leading", complex_json(out.spectrum.leading())},
                        {"count", out.spectrum.eigenvalues.size()}};
  out.record.failure = !(out.spectrum.abscissa <= 1e-10);
  return out;
}

ResolventResult run_resolvent(const StudySpec& spec) {
  spec.validate();
  const ModelConfig c = with_bcs(spec.base, spec.bcs_list.front());
  const SemidiscreteSystem sys = assemble(c);
  ResolventResult out;
  out.spectrum = eigenvalues(sys);
  out.scan = resolvent_scan(sys, default_resolvent_grid(out.spectrum, spec.resolvent), spec.threads);
  double min_ratio = std::numeric_limits<double>::infinity();
  bool finite = true, near_singular = false;
  for (std::size_t i = 0; i < out.scan.lambdas.size(); ++i) {
    finite = finite && std::isfinite(out.scan.norms[i]);
    near_singular = near_singular || out.scan.near_singular[i];
    min_ratio = std::min(min_ratio, out.scan.norms[i] * distance_to_spectrum(out.spectrum.eigenvalues, out.scan.lambdas[i]));
  }
  out.record = make_record("resolvent", 0, c);
  out.record.dim = static_cast<long>(sys.dim());
  const Complex lead = out.spectrum.leading();
  out.record.results = {{"points", out.scan.lambdas.size()},
                        {"sup_norm", out.scan.sup_norm},
                        {"argmax", out.scan.argmax},
                        {"leading", complex_json(lead)},
                        {"lower_bound_ratio", min_ratio},
                        {"near_singular", near_singular}};
  out.record.failure = !finite || near_singular || !(min_ratio >= 1.0 - 1e-8);
  return out;
}

}  // namespace tgp
