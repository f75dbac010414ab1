#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tgp/assembly.hpp"
#include "tgp/kernels.hpp"
#include "tgp/spectra.hpp"

namespace tgp {

// Configuration files are flat `key = value` text with `#` comments.
//
// Model keys:
//   params.{rho1,rho2,rho3,rho4,k,b,gamma,sigma,varpi1,varpi2,L}   (default 1)
//   law.{theta,xi}.variant          gp | fourier | cattaneo | cg    (default fourier)
//   law.{theta,xi}.kernel.terms     "c:b, c:b, ..."                 (gp, cg)
//   law.{theta,xi}.kernel.unit_mass true | false                    (gp, cg)
//   law.{theta,xi}.tau              relaxation time                 (cattaneo)
//   law.{theta,xi}.ell              mixing weight in (0, 1)         (cg)
//   bcs                             mixed | dirichlet               (default mixed)
//   mesh.n                          cell count                      (default 32)
//
// Study keys are listed with StudySpec below. Every key present must be
// consumed; anything else is rejected with its name.

/// Ordered `key = value` pairs.
using FlatConfig = std::vector<std::pair<std::string, std::string>>;

/// Splits config text into pairs. Throws ConfigError on malformed lines or
/// duplicate keys.
FlatConfig parse_flat(std::string_view text);
/// Reads a config file; IoError when it cannot be opened.
FlatConfig read_flat(const std::string& path);
std::string format_flat(const FlatConfig& flat);

/// Shortest decimal that parses back to the same double.
std::string format_number(double v);
double parse_number(const std::string& key, const std::string& value);

std::string format_terms(const PronyKernel& k);
PronyKernel parse_terms(const std::string& key, const std::string& value, bool unit_mass);

/// Names accepted by param_ref: rho1..rho4, k, b, gamma, sigma, varpi1, varpi2, L.
const std::vector<std::string>& param_names();
double& param_ref(PhysicalParams& p, std::string_view name);
double param_value(const PhysicalParams& p, std::string_view name);

ModelConfig parse_model(std::string_view text);
/// Flat echo of every field of `config`; parse_model(format_flat(echo)) == config.
FlatConfig echo_model(const ModelConfig& config);

bool same_model(const ModelConfig& a, const ModelConfig& b);

// ---------------------------------------------------------------------------

enum class StudyKind { Simulate, Spectrum, Resolvent, Sweep, Combo, CattaneoEquivalence, SingularLimit };

/// "simulate", "spectrum", "resolvent", "sweep", "combo", "cattaneo-eq", "limit".
std::string study_tag(StudyKind kind);
StudyKind parse_study_tag(const std::string& tag);

struct ParamRange {
  std::string name;
  double lo = 0.1;
  double hi = 10.0;
};

/// Study keys (defaults in brackets):
///   study.kind, study.seed [1], study.output, study.plot [false], study.threads [0]
///   study.bcs                 mixed | dirichlet | both   [value of `bcs`]
///   simulate.dt [0.01], simulate.t_final [10], simulate.initial dominant|random [dominant],
///   simulate.transient [0.2]
///   resolvent.lambda_min [1e-2], resolvent.lambda_max [1e3], resolvent.points [120],
///   resolvent.anchors [6], resolvent.refine_points [41], resolvent.refine_halfwidth [4]
///   sweep.draws [50], sweep.range.<param> = lo, hi   [0.1, 10 for the eight varied
///   parameters], sweep.wave_speed_slices [true], sweep.diagnostic_zero_damping [false],
///   sweep.threshold [-1e-6]
///   combo.kernel.terms [1:1], combo.tau [1], combo.ell [0.5]
///   cattaneo.tau [1], cattaneo.varsigma [1], cattaneo.threshold [1e-8]
///   limit.eps [1, 0.5, ..., 1/64], limit.target fourier|cg [fourier], limit.ell [0.5],
///   limit.kernel.terms [1:1], limit.tracked [10], limit.threshold [1e-2]
struct StudySpec {
  StudyKind kind = StudyKind::Spectrum;
  ModelConfig base;
  std::vector<BoundarySet> bcs_list;
  std::uint64_t seed = 1;
  std::string output;
  bool plot = false;
  unsigned threads = 0;

  struct Simulate {
    enum class Initial { Dominant, Random };
    double dt = 1e-2;
    double t_final = 10.0;
    Initial initial = Initial::Dominant;
    double transient = 0.2;
  } simulate;

  ResolventGridOptions resolvent;

  struct Sweep {
    int draws = 50;
    std::vector<ParamRange> ranges;
    bool wave_speed_slices = true;
    bool diagnostic_zero_damping = false;
    double threshold = -1e-6;
  } sweep;

  struct Combo {
    PronyKernel kernel{{{1.0, 1.0}}};
    double tau = 1.0;
    double ell = 0.5;
  } combo;

  struct Cattaneo {
    double tau = 1.0;
    double varsigma = 1.0;
    double threshold = 1e-8;
  } cattaneo;

  struct Limit {
    std::vector<double> eps{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    LawKind target = LawKind::Fourier;
    double ell = 0.5;
    PronyKernel kernel{{{1.0, 1.0}}};
    int tracked = 10;
    double threshold = 1e-2;
  } limit;

  /// Throws ConfigError for empty ranges, a non-decreasing eps ladder, and
  /// similar inconsistencies.
  void validate() const;
};

std::vector<ParamRange> default_sweep_ranges();

StudySpec parse_study(std::string_view text);
StudySpec load_study(const std::string& path);

}  // namespace tgp
