#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "tgp/assembly.hpp"

namespace tgp {

using Complex = std::complex<double>;

struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  double abscissa = 0.0;
  Eigen::Index dim = 0;
  ModelConfig config;

  /// Eigenvalue attaining the abscissa (largest imaginary part on ties).
  Complex leading() const;
};

/// Eigenvalues of a dense real matrix (LAPACK dgeev).
std::vector<Complex> matrix_eigenvalues(const Eigen::MatrixXd& b);

/// Eigenvalues of the pencil A x = lambda M x for symmetric positive
/// definite M, via M = L L^T and the standard problem L^{-1} A L^{-T}.
std::vector<Complex> pencil_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m);

/// L^{-1} A L^{-T}: the generator written in an M-orthonormal basis, so that
/// Euclidean norms of this matrix are H-operator norms of the generator.
Eigen::MatrixXd metric_generator(const SemidiscreteSystem& sys);

SpectrumReport eigenvalues(const SemidiscreteSystem& sys);
double spectral_abscissa(const SemidiscreteSystem& sys);

/// Real state exciting the least-damped eigenmode: the real part of its
/// eigenvector, scaled to unit energy.
Eigen::VectorXd dominant_mode(const SemidiscreteSystem& sys, const SpectrumReport& spectrum);

/// || (i lambda - A)^{-1} || in the H metric, evaluated on a pre-transformed
/// generator so that scans pay the Cholesky transform once.
class ResolventEvaluator {
 public:
  explicit ResolventEvaluator(const SemidiscreteSystem& sys);

  struct Sample {
    double norm;
    bool near_singular;  ///< i lambda within relative 1e-12 of the spectrum
  };
  Sample operator()(double lambda) const;

 private:
  Eigen::MatrixXcd metric_;
  double scale_;
};

double resolvent_norm(const SemidiscreteSystem& sys, double lambda);

struct ResolventScan {
  std::vector<double> lambdas;
  std::vector<double> norms;
  std::vector<bool> near_singular;
  double sup_norm = 0.0;
  double argmax = 0.0;
};

/// Samples the resolvent norm on `grid`. Throws SpectrumError for an empty
/// grid (the supremum is undefined). Points are evaluated on `threads`
/// workers (0 = hardware concurrency).
ResolventScan resolvent_scan(const SemidiscreteSystem& sys, const std::vector<double>& grid,
                             unsigned threads = 0);

struct ResolventGridOptions {
  double lambda_min = 1e-2;
  double lambda_max = 1e3;
  int log_points = 120;
  int anchored_eigenvalues = 6;  ///< least-damped eigenvalues receiving refinement
  int refine_points = 41;
  double refine_halfwidth = 4.0;  ///< in units of |Re lambda| around Im lambda
  bool include_zero = true;
};

/// Log-spaced frequencies plus linear refinement around the imaginary parts
/// of the least-damped eigenvalues. The resolvent norm of a real pencil is
/// even in lambda, so only lambda >= 0 is sampled.
std::vector<double> default_resolvent_grid(const SpectrumReport& spectrum, const ResolventGridOptions& opts = {});

/// min_j |i lambda - mu_j|.
double distance_to_spectrum(const std::vector<Complex>& spectrum, double lambda);

/// Pairs each element of `a` with a distinct element of `b` (greedy by
/// increasing distance) and returns the largest pair distance.
/// Requires a.size() <= b.size(); surplus elements of `b` are ignored.
double matched_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

}  // namespace tgp
