#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgp/config.hpp"
#include "tgp/dynamics.hpp"
#include "tgp/spectra.hpp"

namespace tgp {

using Json = nlohmann::ordered_json;

/// One self-describing result line: the flat model echo reproduces the
/// assembled system, `results` carries the scalars of the study cell.
struct OutputRecord {
  std::string study;
  std::size_t index = 0;
  bool failure = false;
  FlatConfig config;
  Json results = Json::object();
  int cells = 0;
  int modes_theta = 0;
  int modes_xi = 0;
  long dim = 0;
};

/// Builds a record with the provenance of `config`.
OutputRecord make_record(const std::string& study, std::size_t index, const ModelConfig& config);

/// Study records as JSON; the timestamp is the only non-deterministic field.
Json to_json(const OutputRecord& r, bool with_timestamp = true);

/// Re-creates the model of a record from its echo.
ModelConfig record_model(const OutputRecord& r);

bool any_failure(const std::vector<OutputRecord>& records);

// ---------------------------------------------------------------------------

struct SweepResult {
  std::vector<OutputRecord> records;
  std::vector<double> abscissas;  ///< one per record
};

/// Log-uniform draws over spec.sweep.ranges plus the forced wave-speed
/// slices (rho1 b = rho2 k, and ratios 100 and 1/100), each assembled under
/// every boundary set of the study. A record is a FAILURE when its abscissa
/// exceeds spec.sweep.threshold.
SweepResult run_parameter_sweep(const StudySpec& spec);

/// The parameter sets a sweep visits, in record order (before the
/// boundary-set expansion), with a label per set.
struct SweepDraw {
  PhysicalParams params;
  std::string label;  ///< "draw", "equal-wave-speed", "separated-100", "separated-0.01", "zero-damping"
};
std::vector<SweepDraw> sweep_draws(const StudySpec& spec);

struct ComboResult {
  std::vector<OutputRecord> records;
  /// abscissa[b][i][j] for boundary set b, theta law i, xi law j in the
  /// order GP, F, C, CG.
  std::vector<std::array<std::array<double, 4>, 4>> abscissa;
  std::vector<BoundarySet> bcs;
  /// Matched spectral distance between the (F, F) model and its
  /// independent assembly, relative to the spectral radius, per boundary set.
  std::vector<double> fourier_crosscheck;
};

/// Law of the given kind built from the combo settings of `spec`.
KernelSpec combo_law(const StudySpec& spec, LawKind kind);

ComboResult run_combination_matrix(const StudySpec& spec);

struct CattaneoComparison {
  std::vector<OutputRecord> records;
  std::vector<double> mismatch;  ///< per boundary set
  std::vector<BoundarySet> bcs;
};

/// Spectrum of GP(make_cattaneo(tau)) / GP(make_cattaneo(varsigma)) against
/// the explicit heat-flux system. The flux modes that decouple from the
/// temperature (eigenvalue exactly -1/tau or -1/varsigma) are removed before
/// matching. Throws DomainError for tau or varsigma <= 0 and AssemblyError
/// when the reduced dimensions disagree.
CattaneoComparison run_cattaneo_equivalence(const StudySpec& spec);

struct LimitReport {
  std::vector<OutputRecord> records;
  std::vector<double> eps;
  std::vector<double> distance;  ///< max relative distance of tracked eigenvalues
  std::vector<Complex> tracked;  ///< target eigenvalues followed along the ladder
  bool decreasing_tail = false;  ///< strictly decreasing over the last three rungs
  bool converged = false;        ///< decreasing_tail and final distance <= threshold
};

/// Memory kernel of the rescaled model at scale eps: rescale(k, eps) for the
/// Fourier target, (1 - ell) rescale(k, eps) + ell k for the
/// Coleman-Gurtin target. `k` is normalized to unit mass first.
PronyKernel limit_kernel(const StudySpec& spec, double eps);

/// Model the ladder converges to (Fourier or Coleman-Gurtin on both channels).
ModelConfig limit_target(const StudySpec& spec, BoundarySet bcs);

/// The `count` target eigenvalues with Im >= 0 of smallest modulus.
std::vector<Complex> smallest_eigenvalues(const std::vector<Complex>& spectrum, int count);

/// max_t min_mu |mu - t| / |t| over the tracked eigenvalues t.
double tracked_distance(const std::vector<Complex>& tracked, const std::vector<Complex>& spectrum);

/// Uses the first boundary set of the study.
LimitReport run_singular_limit(const StudySpec& spec);

// ---------------------------------------------------------------------------

struct SimulateResult {
  TrajectoryReport trajectory;
  OutputRecord record;
};

SimulateResult run_simulate(const StudySpec& spec);

struct SpectrumResult {
  SpectrumReport spectrum;
  OutputRecord record;
};

SpectrumResult run_spectrum(const StudySpec& spec);

struct ResolventResult {
  ResolventScan scan;
  SpectrumReport spectrum;
  OutputRecord record;
};

ResolventResult run_resolvent(const StudySpec& spec);

/// Runs `count` independent jobs on up to `threads` workers (0 = hardware
/// concurrency). The first exception thrown by a job is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

}  // namespace tgp
