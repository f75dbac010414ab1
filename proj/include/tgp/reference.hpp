#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "tgp/assembly.hpp"

namespace tgp {

/// A generator pencil M U' = A U assembled outside the main path.
struct PencilSystem {
  Eigen::MatrixXd gram;
  Eigen::MatrixXd generator;
  Eigen::MatrixXd dissipation;
};

// ---------------------------------------------------------------------------
// Trig-spectral assembly (MixedDN only)
//
// With phi, Phi, xi, zeta ~ sin(j pi x / L) and psi, Psi, theta, eta ~
// cos(j pi x / L), every coupling maps mode j to itself, so the system splits
// into independent blocks of size 6 + m_theta + m_xi.

/// First-order generator of trig mode j >= 1, unknowns ordered
/// (phi, Phi, psi, Psi, theta, eta_1..m, xi, zeta_1..m).
Eigen::MatrixXd trig_mode_generator(const ModelConfig& config, int mode);

/// Union of the spectra of modes 1..modes.
std::vector<std::complex<double>> trig_spectral_eigenvalues(const ModelConfig& config, int modes);

double trig_spectral_abscissa(const ModelConfig& config, int modes);

// ---------------------------------------------------------------------------

/// Timoshenko-Fourier system assembled element by element with its own
/// constraint handling (orthonormal zero-mean basis instead of projected
/// hat functions). Requires Fourier laws on both channels.
PencilSystem assemble_fourier_direct(const ModelConfig& config);

/// Timoshenko-Cattaneo system with explicit heat fluxes q, p (one value per
/// cell):
///   rho3 theta_t + q_x + gamma (phi_x + psi)_t = 0,  tau q_t + q + varpi1 theta_x = 0,
///   rho4 xi_t + p_x + sigma psi_xt = 0,              varsigma p_t + p + varpi2 xi_x = 0.
/// Unknowns ordered (phi, Phi, psi, Psi, theta, q, xi, p).
struct FluxSystem {
  PencilSystem pencil;
  /// Flux components orthogonal to the gradients of the temperature space
  /// (cell-constant fluxes against Dirichlet temperatures). They decouple and
  /// relax at exactly -1/tau resp. -1/varsigma.
  int decoupled_q = 0;
  int decoupled_p = 0;
};

FluxSystem assemble_cattaneo_flux(const ModelConfig& config, double tau, double varsigma);

}  // namespace tgp
