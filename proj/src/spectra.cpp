#include "tgp/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/SVD>
#include <lapacke.h>

#include "tgp/errors.hpp"

namespace tgp {

Complex SpectrumReport::leading() const {
  if (eigenvalues.empty()) throw SpectrumError("empty spectrum");
  return *std::max_element(eigenvalues.begin(), eigenvalues.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

std::vector<Complex> matrix_eigenvalues(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols()) throw ShapeError("eigenvalues of a non-square matrix");
  const lapack_int n = static_cast<lapack_int>(b.rows());
  if (n == 0) return {};
  Eigen::MatrixXd work = b;  // dgeev overwrites its input
  std::vector<double> wr(n), wi(n);
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(), wi.data(),
                                        nullptr, 1, nullptr, 1);
  if (info != 0) throw SpectrumError("dgeev failed with info " + std::to_string(info));
  std::vector<Complex> out(n);
  for (lapack_int i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
  return out;
}

namespace {

Eigen::MatrixXd similarity_transform(const Eigen::LLT<Eigen::MatrixXd>& factor, const Eigen::MatrixXd& a) {
  const auto l = factor.matrixL();
  Eigen::MatrixXd tmp = l.solve(a);                          // L^{-1} A
  Eigen::MatrixXd out = l.solve(tmp.transpose()).transpose();  // (L^{-1} (L^{-1} A)^T)^T
  return out;
}

}  // namespace

std::vector<Complex> pencil_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> factor(m);
  if (factor.info() != Eigen::Success) throw SpectrumError("mass of the pencil is not positive definite");
  return matrix_eigenvalues(similarity_transform(factor, a));
}

Eigen::MatrixXd metric_generator(const SemidiscreteSystem& sys) {
  if (sys.gram_factor.info() != Eigen::Success) throw SpectrumError("energy Gram factor unavailable");
  return similarity_transform(sys.gram_factor, sys.generator);
}

SpectrumReport eigenvalues(const SemidiscreteSystem& sys) {
  SpectrumReport report;
  report.eigenvalues = matrix_eigenvalues(metric_generator(sys));
  report.dim = sys.dim();
  report.config = sys.config;
  report.abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& l : report.eigenvalues) report.abscissa = std::max(report.abscissa, l.real());
  return report;
}

double spectral_abscissa(const SemidiscreteSystem& sys) { return eigenvalues(sys).abscissa; }

Eigen::VectorXd dominant_mode(const SemidiscreteSystem& sys, const SpectrumReport& spectrum) {
  const Complex target = spectrum.leading();
  const Eigen::MatrixXd b = metric_generator(sys);
  const Eigen::Index n = b.rows();
  // Inverse iteration with a shift just off the eigenvalue.
  const Complex shift = target + Complex(1e-10, 1e-10) * (1.0 + std::abs(target));
  Eigen::MatrixXcd shifted = b.cast<Complex>();
  shifted.diagonal().array() -= shift;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
  Eigen::VectorXcd y = Eigen::VectorXcd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) += Complex(std::sin(1.0 + i), std::cos(3.0 * i));
  for (int it = 0; it < 4; ++it) {
    y = lu.solve(y);
    y /= y.norm();
  }
  Eigen::Index big = 0;
  y.cwiseAbs().maxCoeff(&big);
  y *= std::conj(y(big)) / std::abs(y(big));
  // x = L^{-T} y solves A x = lambda M x.
  const Eigen::VectorXd re = y.real();
  Eigen::VectorXd x = sys.gram_factor.matrixU().solve(re);
  const double e = energy(sys, x);
  return x / std::sqrt(e);
}

// ---------------------------------------------------------------------------

ResolventEvaluator::ResolventEvaluator(const SemidiscreteSystem& sys)
    : metric_(metric_generator(sys).cast<Complex>()), scale_(0.0) {
  scale_ = metric_.cwiseAbs().rowwise().sum().maxCoeff();
}

ResolventEvaluator::Sample ResolventEvaluator::operator()(double lambda) const {
  Eigen::MatrixXcd shifted = -metric_;
  shifted.diagonal().array() += Complex(0.0, lambda);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted);
  const double smin = svd.singularValues().minCoeff();
  const double floor = 1e-12 * std::max(scale_, std::abs(lambda));
  if (smin <= floor) {
    return {1.0 / std::max(smin, std::numeric_limits<double>::min()), true};
  }
  return {1.0 / smin, false};
}

double resolvent_norm(const SemidiscreteSystem& sys, double lambda) { return ResolventEvaluator(sys)(lambda).norm; }

ResolventScan resolvent_scan(const SemidiscreteSystem& sys, const std::vector<double>& grid, unsigned threads) {
  if (grid.empty()) throw SpectrumError("empty frequency grid: supremum undefined");
  const ResolventEvaluator eval(sys);
  ResolventScan scan;
  scan.lambdas = grid;
  scan.norms.assign(grid.size(), 0.0);
  std::vector<char> flags(grid.size(), 0);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      const auto s = eval(grid[i]);
      scan.norms[i] = s.norm;
      flags[i] = s.near_singular;
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  scan.near_singular.assign(flags.begin(), flags.end());
  const auto it = std::max_element(scan.norms.begin(), scan.norms.end());
  scan.sup_norm = *it;
  scan.argmax = grid[static_cast<std::size_t>(it - scan.norms.begin())];
  return scan;
}

std::vector<double> default_resolvent_grid(const SpectrumReport& spectrum, const ResolventGridOptions& opts) {
  std::vector<double> grid;
  if (opts.include_zero) grid.push_back(0.0);
  const double lo = std::log(opts.lambda_min);
  const double hi = std::log(opts.lambda_max);
  for (int i = 0; i < opts.log_points; ++i) {
    const double t = opts.log_points == 1 ? 0.0 : static_cast<double>(i) / (opts.log_points - 1);
    grid.push_back(std::exp(lo + t * (hi - lo)));
  }

  std::vector<Complex> upper;
  for (const auto& l : spectrum.eigenvalues) {
    if (l.imag() >= 0.0) upper.push_back(l);
  }
  std::sort(upper.begin(), upper.end(), [](Complex a, Complex b) { return a.real() > b.real(); });
  const int anchors = std::min<int>(opts.anchored_eigenvalues, static_cast<int>(upper.size()));
  for (int a = 0; a < anchors; ++a) {
    const double centre = upper[a].imag();
    const double width = opts.refine_halfwidth * std::max(std::abs(upper[a].real()), 1e-6 * (1.0 + centre));
    grid.push_back(centre);
    for (int i = 0; i < opts.refine_points; ++i) {
      const double t = opts.refine_points == 1 ? 0.0 : -1.0 + 2.0 * i / (opts.refine_points - 1);
      const double lambda = centre + t * width;
      if (lambda >= 0.0) grid.push_back(lambda);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double distance_to_spectrum(const std::vector<Complex>& spectrum, double lambda) {
  double best = std::numeric_limits<double>::infinity();
  const Complex z(0.0, lambda);
  for (const auto& mu : spectrum) best = std::min(best, std::abs(z - mu));
  return best;
}

double matched_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() > b.size()) throw ShapeError("matched_distance: first spectrum is larger than the second");
  struct Pair {
    double d;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) pairs.push_back({std::abs(a[i] - b[j]), i, j});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.d < y.d; });
  std::vector<char> used_a(a.size(), 0), used_b(b.size(), 0);
  std::size_t matched = 0;
  double worst = 0.0;
  for (const auto& p : pairs) {
    if (used_a[p.i] || used_b[p.j]) continue;
    used_a[p.i] = used_b[p.j] = 1;
    worst = std::max(worst, p.d);
    if (++matched == a.size()) break;
  }
  return worst;
}

}  // namespace tgp
