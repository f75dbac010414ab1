#include "tgp/reference.hpp"

#include <cmath>
#include <numbers>

#include "tgp/errors.hpp"
#include "tgp/spectra.hpp"

namespace tgp {

namespace {

struct ChannelCoefficients {
  double instantaneous = 0.0;  // varpi * (1 - ell)
  std::vector<double> rates;
  std::vector<double> flux;  // varpi * ell * c_i / b_i
};

ChannelCoefficients channel(const KernelSpec& law, double varpi) {
  ChannelCoefficients ch;
  ch.instantaneous = varpi * law.instantaneous_fraction();
  const PronyKernel kernel = law.memory_kernel();
  for (const auto& t : kernel.terms()) {
    ch.rates.push_back(t.rate);
    ch.flux.push_back(varpi * law.memory_fraction() * t.weight / t.rate);
  }
  return ch;
}

}  // namespace

Eigen::MatrixXd trig_mode_generator(const ModelConfig& config, int mode) {
  if (config.bcs != BoundarySet::MixedDN) throw DomainError("trig-spectral assembly requires mixed boundary conditions");
  if (mode < 1) throw DomainError("trig mode index must be >= 1");
  const PhysicalParams& p = config.params;
  p.validate();
  const ChannelCoefficients th = channel(config.law_theta, p.varpi1);
  const ChannelCoefficients xi = channel(config.law_xi, p.varpi2);
  const int mt = static_cast<int>(th.rates.size());
  const int mx = static_cast<int>(xi.rates.size());
  const double kappa = mode * std::numbers::pi / p.length;
  const double k2 = kappa * kappa;

  const int phi = 0, vphi = 1, psi = 2, vpsi = 3, theta = 4, eta = 5, x = 5 + mt, zeta = 6 + mt;
  const int n = 6 + mt + mx;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);

  g(phi, vphi) = 1.0;
  g(vphi, phi) = -p.k * k2 / p.rho1;
  g(vphi, psi) = -p.k * kappa / p.rho1;
  g(vphi, theta) = p.gamma * kappa / p.rho1;

  g(psi, vpsi) = 1.0;
  g(vpsi, phi) = -p.k * kappa / p.rho2;
  g(vpsi, psi) = -(p.b * k2 + p.k) / p.rho2;
  g(vpsi, theta) = p.gamma / p.rho2;
  g(vpsi, x) = -p.sigma * kappa / p.rho2;

  g(theta, theta) = -th.instantaneous * k2 / p.rho3;
  g(theta, vphi) = -p.gamma * kappa / p.rho3;
  g(theta, vpsi) = -p.gamma / p.rho3;
  for (int i = 0; i < mt; ++i) {
    g(theta, eta + i) = -th.flux[i] * k2 / p.rho3;
    g(eta + i, eta + i) = -th.rates[i];
    g(eta + i, theta) = 1.0;
  }

  g(x, x) = -xi.instantaneous * k2 / p.rho4;
  g(x, vpsi) = p.sigma * kappa / p.rho4;
  for (int i = 0; i < mx; ++i) {
    g(x, zeta + i) = -xi.flux[i] * k2 / p.rho4;
    g(zeta + i, zeta + i) = -xi.rates[i];
    g(zeta + i, x) = 1.0;
  }
  return g;
}

std::vector<std::complex<double>> trig_spectral_eigenvalues(const ModelConfig& config, int modes) {
  std::vector<std::complex<double>> all;
  for (int j = 1; j <= modes; ++j) {
    const auto ev = matrix_eigenvalues(trig_mode_generator(config, j));
    all.insert(all.end(), ev.begin(), ev.end());
  }
  return all;
}

double trig_spectral_abscissa(const ModelConfig& config, int modes) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& l : trig_spectral_eigenvalues(config, modes)) best = std::max(best, l.real());
  return best;
}

// ---------------------------------------------------------------------------

namespace {

using Local = Eigen::Matrix2d;

Eigen::MatrixXd assemble_local(int cells, const Local& local) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(cells + 1, cells + 1);
  for (int e = 0; e < cells; ++e) out.block<2, 2>(e, e) += local;
  return out;
}

/// Restriction (nodes x dofs) onto Dirichlet or zero-mean P1 functions.
Eigen::MatrixXd restriction(int cells, bool dirichlet, const Eigen::MatrixXd& nodal_mass) {
  const int nn = cells + 1;
  if (dirichlet) return Eigen::MatrixXd::Identity(nn, nn).middleCols(1, nn - 2);
  // Orthonormal complement of the mean functional m = M 1.
  const Eigen::VectorXd m = nodal_mass * Eigen::VectorXd::Ones(nn);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(nn, nn);
  return q.rightCols(nn - 1);
}

}  // namespace

PencilSystem assemble_fourier_direct(const ModelConfig& config) {
  if (config.law_theta.kind() != LawKind::Fourier || config.law_xi.kind() != LawKind::Fourier) {
    throw DomainError("direct Fourier assembly requires Fourier laws on both channels");
  }
  const PhysicalParams& p = config.params;
  p.validate();
  const int n = config.cells;
  const double h = p.length / n;
  if (n < 2) throw MeshError("mesh needs at least 2 cells");

  Local mass_local;
  mass_local << h / 3.0, h / 6.0, h / 6.0, h / 3.0;
  Local stiff_local;
  stiff_local << 1.0 / h, -1.0 / h, -1.0 / h, 1.0 / h;
  Local grad_local;  // (test, trial): int phi_trial' phi_test
  grad_local << -0.5, 0.5, -0.5, 0.5;

  const Eigen::MatrixXd mass = assemble_local(n, mass_local);
  const Eigen::MatrixXd stiff = assemble_local(n, stiff_local);
  const Eigen::MatrixXd grad = assemble_local(n, grad_local);

  const bool mixed = config.bcs == BoundarySet::MixedDN;
  const Eigen::MatrixXd r_phi = restriction(n, true, mass);
  const Eigen::MatrixXd r_psi = restriction(n, !mixed, mass);
  const Eigen::MatrixXd r_th = restriction(n, !mixed, mass);
  const Eigen::MatrixXd r_xi = restriction(n, true, mass);

  auto proj = [](const Eigen::MatrixXd& rt, const Eigen::MatrixXd& op, const Eigen::MatrixXd& rs) {
    return Eigen::MatrixXd(rt.transpose() * op * rs);
  };

  const Eigen::Index a = r_phi.cols(), b = r_psi.cols(), c = r_th.cols(), d = r_xi.cols();
  const Eigen::Index o_phi = 0, o_vphi = a, o_psi = 2 * a, o_vpsi = 2 * a + b, o_th = 2 * a + 2 * b,
                     o_xi = 2 * a + 2 * b + c, dim = 2 * a + 2 * b + c + d;

  // Elastic energy blocks.
  const Eigen::MatrixXd e_pp = p.k * proj(r_phi, stiff, r_phi);
  const Eigen::MatrixXd e_ps = p.k * proj(r_phi, grad.transpose(), r_psi);  // int phi' psi
  const Eigen::MatrixXd e_ss = p.k * proj(r_psi, mass, r_psi) + p.b * proj(r_psi, stiff, r_psi);

  PencilSystem sys;
  sys.gram = Eigen::MatrixXd::Zero(dim, dim);
  sys.generator = Eigen::MatrixXd::Zero(dim, dim);
  sys.dissipation = Eigen::MatrixXd::Zero(dim, dim);
  auto& M = sys.gram;
  auto& A = sys.generator;

  M.block(o_phi, o_phi, a, a) = e_pp;
  M.block(o_phi, o_psi, a, b) = e_ps;
  M.block(o_psi, o_phi, b, a) = e_ps.transpose();
  M.block(o_psi, o_psi, b, b) = e_ss;
  M.block(o_vphi, o_vphi, a, a) = p.rho1 * proj(r_phi, mass, r_phi);
  M.block(o_vpsi, o_vpsi, b, b) = p.rho2 * proj(r_psi, mass, r_psi);
  M.block(o_th, o_th, c, c) = p.rho3 * proj(r_th, mass, r_th);
  M.block(o_xi, o_xi, d, d) = p.rho4 * proj(r_xi, mass, r_xi);

  A.block(o_phi, o_vphi, a, a) = e_pp;
  A.block(o_phi, o_vpsi, a, b) = e_ps;
  A.block(o_psi, o_vphi, b, a) = e_ps.transpose();
  A.block(o_psi, o_vpsi, b, b) = e_ss;

  // Phi row: -k(phi_x + psi, v_x) - gamma (theta_x, v)
  A.block(o_vphi, o_phi, a, a) = -e_pp;
  A.block(o_vphi, o_psi, a, b) = -e_ps;
  A.block(o_vphi, o_th, a, c) = -p.gamma * proj(r_phi, grad, r_th);
  // Psi row: -b(psi_x, v_x) - k(phi_x + psi, v) + gamma(theta, v) - sigma(xi_x, v)
  A.block(o_vpsi, o_phi, b, a) = -e_ps.transpose();
  A.block(o_vpsi, o_psi, b, b) = -e_ss;
  A.block(o_vpsi, o_th, b, c) = p.gamma * proj(r_psi, mass, r_th);
  A.block(o_vpsi, o_xi, b, d) = -p.sigma * proj(r_psi, grad, r_xi);
  // theta row: -varpi1 (theta_x, w_x) - gamma (Phi_x + Psi, w)
  A.block(o_th, o_vphi, c, a) = -p.gamma * proj(r_th, grad, r_phi);
  A.block(o_th, o_vpsi, c, b) = -p.gamma * proj(r_th, mass, r_psi);
  A.block(o_th, o_th, c, c) = -p.varpi1 * proj(r_th, stiff, r_th);
  // xi row: -varpi2 (xi_x, w_x) - sigma (Psi_x, w)
  A.block(o_xi, o_vpsi, d, b) = -p.sigma * proj(r_xi, grad, r_psi);
  A.block(o_xi, o_xi, d, d) = -p.varpi2 * proj(r_xi, stiff, r_xi);

  sys.dissipation.block(o_th, o_th, c, c) = p.varpi1 * proj(r_th, stiff, r_th);
  sys.dissipation.block(o_xi, o_xi, d, d) = p.varpi2 * proj(r_xi, stiff, r_xi);
  return sys;
}

// ---------------------------------------------------------------------------

FluxSystem assemble_cattaneo_flux(const ModelConfig& config, double tau, double varsigma) {
  if (!(tau > 0.0) || !(varsigma > 0.0)) throw DomainError("Cattaneo relaxation times must be > 0");
  const PhysicalParams& p = config.params;
  p.validate();
  if (!(p.varpi1 > 0.0) || !(p.varpi2 > 0.0)) throw DomainError("flux formulation requires varpi1, varpi2 > 0");
  const Mesh mesh = config.mesh();
  const bool mixed = config.bcs == BoundarySet::MixedDN;
  const FieldSpace v_phi(mesh, SpaceFlavor::Dirichlet);
  const FieldSpace v_psi(mesh, mixed ? SpaceFlavor::NeumannZeroMean : SpaceFlavor::Dirichlet);
  const FieldSpace v_th(mesh, mixed ? SpaceFlavor::NeumannZeroMean : SpaceFlavor::Dirichlet);
  const FieldSpace v_xi(mesh, SpaceFlavor::Dirichlet);

  const Eigen::Index a = v_phi.dofs(), b = v_psi.dofs(), c = v_th.dofs(), d = v_xi.dofs(), nc = mesh.cells();
  const Eigen::Index o_phi = 0, o_vphi = a, o_psi = 2 * a, o_vpsi = 2 * a + b, o_th = 2 * a + 2 * b,
                     o_q = o_th + c, o_xi = o_q + nc, o_p = o_xi + d, dim = o_p + nc;

  const Eigen::MatrixXd e_pp = p.k * build_stiffness_matrix(v_phi);
  const Eigen::MatrixXd e_ps = p.k * build_gradient_coupling(v_phi, v_psi).transpose();
  const Eigen::MatrixXd e_ss = p.k * build_mass_matrix(v_psi) + p.b * build_stiffness_matrix(v_psi);
  const Eigen::MatrixXd g_phi_th = build_gradient_coupling(v_phi, v_th);
  const Eigen::MatrixXd m_psi_th = build_mass_matrix(v_psi, v_th);
  const Eigen::MatrixXd g_psi_xi = build_gradient_coupling(v_psi, v_xi);
  const Eigen::MatrixXd c_th = cell_gradient(v_th);
  const Eigen::MatrixXd c_xi = cell_gradient(v_xi);
  const Eigen::MatrixXd cells = cell_mass(mesh);

  FluxSystem out;
  PencilSystem& sys = out.pencil;
  sys.gram = Eigen::MatrixXd::Zero(dim, dim);
  sys.generator = Eigen::MatrixXd::Zero(dim, dim);
  sys.dissipation = Eigen::MatrixXd::Zero(dim, dim);
  auto& M = sys.gram;
  auto& A = sys.generator;

  M.block(o_phi, o_phi, a, a) = e_pp;
  M.block(o_phi, o_psi, a, b) = e_ps;
  M.block(o_psi, o_phi, b, a) = e_ps.transpose();
  M.block(o_psi, o_psi, b, b) = e_ss;
  M.block(o_vphi, o_vphi, a, a) = p.rho1 * build_mass_matrix(v_phi);
  M.block(o_vpsi, o_vpsi, b, b) = p.rho2 * build_mass_matrix(v_psi);
  M.block(o_th, o_th, c, c) = p.rho3 * build_mass_matrix(v_th);
  M.block(o_q, o_q, nc, nc) = (tau / p.varpi1) * cells;
  M.block(o_xi, o_xi, d, d) = p.rho4 * build_mass_matrix(v_xi);
  M.block(o_p, o_p, nc, nc) = (varsigma / p.varpi2) * cells;

  A.block(o_phi, o_vphi, a, a) = e_pp;
  A.block(o_phi, o_vpsi, a, b) = e_ps;
  A.block(o_psi, o_vphi, b, a) = e_ps.transpose();
  A.block(o_psi, o_vpsi, b, b) = e_ss;
  A.block(o_vphi, o_phi, a, a) = -e_pp;
  A.block(o_vphi, o_psi, a, b) = -e_ps;
  A.block(o_vphi, o_th, a, c) = p.gamma * g_phi_th.transpose();
  A.block(o_vpsi, o_phi, b, a) = -e_ps.transpose();
  A.block(o_vpsi, o_psi, b, b) = -e_ss;
  A.block(o_vpsi, o_th, b, c) = p.gamma * m_psi_th.transpose();
  A.block(o_vpsi, o_xi, b, d) = p.sigma * g_psi_xi.transpose();

  // rho3 (theta_t, v) = (q, v_x) - gamma (Phi_x + Psi, v)
  A.block(o_th, o_vphi, c, a) = -p.gamma * g_phi_th;
  A.block(o_th, o_vpsi, c, b) = -p.gamma * m_psi_th;
  A.block(o_th, o_q, c, nc) = c_th.transpose();
  // (tau / varpi1) (q_t, r) = -(1 / varpi1) (q, r) - (theta_x, r)
  A.block(o_q, o_th, nc, c) = -c_th;
  A.block(o_q, o_q, nc, nc) = -cells / p.varpi1;

  A.block(o_xi, o_vpsi, d, b) = -p.sigma * g_psi_xi;
  A.block(o_xi, o_p, d, nc) = c_xi.transpose();
  A.block(o_p, o_xi, nc, d) = -c_xi;
  A.block(o_p, o_p, nc, nc) = -cells / p.varpi2;

  sys.dissipation.block(o_q, o_q, nc, nc) = cells / p.varpi1;
  sys.dissipation.block(o_p, o_p, nc, nc) = cells / p.varpi2;

  out.decoupled_q = static_cast<int>(nc - c);
  out.decoupled_p = static_cast<int>(nc - d);
  return out;
}

}  // namespace tgp
