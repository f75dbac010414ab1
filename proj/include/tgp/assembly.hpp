#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tgp/kernels.hpp"
#include "tgp/spaces.hpp"

namespace tgp {

/// Physical coefficients of the thermoelastic beam.
///
/// Densities/capacities, elastic moduli and the length must be strictly
/// positive. Coupling coefficients and conductivities admit zero for
/// diagnostic configurations (decoupled or undamped cores).
struct PhysicalParams {
  double rho1 = 1.0;
  double rho2 = 1.0;
  double rho3 = 1.0;
  double rho4 = 1.0;
  double k = 1.0;
  double b = 1.0;
  double gamma = 1.0;
  double sigma = 1.0;
  double varpi1 = 1.0;
  double varpi2 = 1.0;
  double length = 1.0;

  void validate() const;
  /// True when every coefficient is strictly positive.
  bool strictly_positive() const;

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

/// MixedDN: phi, xi Dirichlet; psi, theta Neumann with zero mean.
/// FullDirichlet: every field Dirichlet.
enum class BoundarySet { MixedDN, FullDirichlet };

std::string bcs_tag(BoundarySet bcs);

struct ModelConfig {
  PhysicalParams params;
  KernelSpec law_theta;
  KernelSpec law_xi;
  BoundarySet bcs = BoundarySet::MixedDN;
  int cells = 32;

  Mesh mesh() const { return Mesh(params.length, cells); }
};

enum class Field { Phi, PhiVel, Psi, PsiVel, Theta, Eta, Xi, Zeta };

std::string field_name(Field f);

struct BlockRange {
  Field field;
  int mode;  ///< Prony mode index for Eta/Zeta, 0 otherwise
  Eigen::Index offset;
  Eigen::Index size;
};

/// Contiguous blocks (phi, Phi, psi, Psi, theta, eta_1..m, xi, zeta_1..m).
class BlockLayout {
 public:
  BlockLayout() = default;
  BlockLayout(Eigen::Index n_phi, Eigen::Index n_psi, Eigen::Index n_theta, int modes_theta,
              Eigen::Index n_xi, int modes_xi);

  const std::vector<BlockRange>& blocks() const { return blocks_; }
  Eigen::Index dim() const { return dim_; }
  int modes_theta() const { return modes_theta_; }
  int modes_xi() const { return modes_xi_; }
  /// Throws LayoutError when the block does not exist.
  const BlockRange& block(Field field, int mode = 0) const;
  bool has(Field field, int mode = 0) const;

  template <typename Vec>
  auto segment(Vec& v, Field field, int mode = 0) const {
    const auto& r = block(field, mode);
    return v.segment(r.offset, r.size);
  }

 private:
  std::vector<BlockRange> blocks_;
  Eigen::Index dim_ = 0;
  int modes_theta_ = 0;
  int modes_xi_ = 0;
};

/// Galerkin system M U' = A U with energy E = U^T M U / 2 and
/// dissipation U^T D U; A + A^T = -2 D holds exactly by construction.
struct SemidiscreteSystem {
  Eigen::MatrixXd gram;         ///< M
  Eigen::MatrixXd generator;    ///< A
  Eigen::MatrixXd dissipation;  ///< D
  BlockLayout layout;
  ModelConfig config;

  FieldSpace phi_space;
  FieldSpace psi_space;
  FieldSpace theta_space;
  FieldSpace xi_space;

  /// Cholesky factor of M, computed once at assembly.
  Eigen::LLT<Eigen::MatrixXd> gram_factor;

  /// False for diagnostic configurations with a vanishing conductivity
  /// on a memory channel; the memory metric is then decoupled from the
  /// temperature and the dissipation identity does not apply.
  bool dissipative_structure = true;

  Eigen::Index dim() const { return layout.dim(); }
};

SemidiscreteSystem assemble(const ModelConfig& config);

double energy(const SemidiscreteSystem& sys, const Eigen::VectorXd& state);
double dissipation(const SemidiscreteSystem& sys, const Eigen::VectorXd& state);
/// M^{-1} A state.
Eigen::VectorXd apply_generator(const SemidiscreteSystem& sys, const Eigen::VectorXd& state);

/// Past temperature sample p(x, s), x in [0, L], s > 0.
using PastHistory = std::function<double(double x, double s)>;

struct HistoryModes {
  std::vector<Eigen::VectorXd> eta;   ///< one coordinate vector per theta mode
  std::vector<Eigen::VectorXd> zeta;  ///< one coordinate vector per xi mode
};

/// Projects the initial histories eta_0(x, s) = int_0^s p0(x, r) dr (and
/// likewise zeta_0 from q0) onto the Prony modes:
/// eta_i(x) = int_0^inf b_i e^{-b_i s} eta_0(x, s) ds = int_0^inf e^{-b_i r} p0(x, r) dr.
HistoryModes history_lift(const PastHistory& p0, const PastHistory& q0, const SemidiscreteSystem& sys);

/// Writes history modes into the eta/zeta blocks of `state`.
void set_history(const SemidiscreteSystem& sys, const HistoryModes& modes, Eigen::VectorXd& state);

}  // namespace tgp
