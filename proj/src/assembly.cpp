#include "tgp/assembly.hpp"

#include <cmath>

#include "tgp/errors.hpp"

namespace tgp {

void PhysicalParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be > 0");
  };
  auto nonnegative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be >= 0");
  };
  positive(rho1, "rho1");
  positive(rho2, "rho2");
  positive(rho3, "rho3");
  positive(rho4, "rho4");
  positive(k, "k");
  positive(b, "b");
  positive(length, "L");
  nonnegative(gamma, "gamma");
  nonnegative(sigma, "sigma");
  nonnegative(varpi1, "varpi1");
  nonnegative(varpi2, "varpi2");
}

bool PhysicalParams::strictly_positive() const {
  return gamma > 0.0 && sigma > 0.0 && varpi1 > 0.0 && varpi2 > 0.0;
}

std::string bcs_tag(BoundarySet bcs) {
  return bcs == BoundarySet::MixedDN ? "mixed" : "dirichlet";
}

std::string field_name(Field f) {
  switch (f) {
    case Field::Phi: return "phi";
    case Field::PhiVel: return "Phi";
    case Field::Psi: return "psi";
    case Field::PsiVel: return "Psi";
    case Field::Theta: return "theta";
    case Field::Eta: return "eta";
    case Field::Xi: return "xi";
    case Field::Zeta: return "zeta";
  }
  return "?";
}

// ---------------------------------------------------------------------------

BlockLayout::BlockLayout(Eigen::Index n_phi, Eigen::Index n_psi, Eigen::Index n_theta, int modes_theta,
                         Eigen::Index n_xi, int modes_xi)
    : modes_theta_(modes_theta), modes_xi_(modes_xi) {
  auto push = [this](Field f, int mode, Eigen::Index size) {
    blocks_.push_back({f, mode, dim_, size});
    dim_ += size;
  };
  push(Field::Phi, 0, n_phi);
  push(Field::PhiVel, 0, n_phi);
  push(Field::Psi, 0, n_psi);
  push(Field::PsiVel, 0, n_psi);
  push(Field::Theta, 0, n_theta);
  for (int i = 0; i < modes_theta; ++i) push(Field::Eta, i, n_theta);
  push(Field::Xi, 0, n_xi);
  for (int i = 0; i < modes_xi; ++i) push(Field::Zeta, i, n_xi);
}

const BlockRange& BlockLayout::block(Field field, int mode) const {
  for (const auto& b : blocks_) {
    if (b.field == field && b.mode == mode) return b;
  }
  throw LayoutError("layout has no block " + field_name(field) + "[" + std::to_string(mode) + "]");
}

bool BlockLayout::has(Field field, int mode) const {
  for (const auto& b : blocks_) {
    if (b.field == field && b.mode == mode) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

namespace {

/// Per-mode quadratic weights of one thermal channel.
struct ChannelModes {
  std::vector<double> rates;    // b_i
  std::vector<double> metric;   // weight of ||eta_{i,x}||^2 in the energy
  std::vector<double> damping;  // weight of ||eta_{i,x}||^2 in D
  double instantaneous = 0.0;   // weight of ||theta_x||^2 in D
  bool degenerate = false;
};

// For mu = sum c_i e^{-b_i s}, the modes eta_i = int b_i e^{-b_i s} eta(s) ds
// obey eta_i' = -b_i eta_i + theta, and int mu eta ds = sum (c_i / b_i) eta_i.
ChannelModes channel_modes(const KernelSpec& law, double varpi) {
  ChannelModes ch;
  ch.instantaneous = varpi * law.instantaneous_fraction();
  const PronyKernel kernel = law.memory_kernel();
  const double frac = law.memory_fraction();
  ch.degenerate = !kernel.empty() && varpi == 0.0;
  for (const auto& t : kernel.terms()) {
    const double w = frac * t.weight / t.rate;
    ch.rates.push_back(t.rate);
    ch.metric.push_back(ch.degenerate ? w : varpi * w);
    ch.damping.push_back(varpi * w * t.rate);
  }
  return ch;
}

SpaceFlavor flavor_for(BoundarySet bcs, Field f) {
  if (bcs == BoundarySet::FullDirichlet) return SpaceFlavor::Dirichlet;
  switch (f) {
    case Field::Psi:
    case Field::PsiVel:
    case Field::Theta:
    case Field::Eta:
      return SpaceFlavor::NeumannZeroMean;
    default:
      return SpaceFlavor::Dirichlet;
  }
}

class BlockWriter {
 public:
  BlockWriter(Eigen::MatrixXd& target, const BlockLayout& layout) : target_(target), layout_(layout) {}

  void add(Field row, int row_mode, Field col, int col_mode, const Eigen::MatrixXd& block) {
    const auto& r = layout_.block(row, row_mode);
    const auto& c = layout_.block(col, col_mode);
    if (block.rows() != r.size || block.cols() != c.size) {
      throw AssemblyError("block " + field_name(row) + "/" + field_name(col) + " has inconsistent shape");
    }
    target_.block(r.offset, c.offset, r.size, c.size) += block;
  }
  void add(Field row, Field col, const Eigen::MatrixXd& block) { add(row, 0, col, 0, block); }

 private:
  Eigen::MatrixXd& target_;
  const BlockLayout& layout_;
};

}  // namespace

SemidiscreteSystem assemble(const ModelConfig& config) {
  const PhysicalParams& p = config.params;
  p.validate();
  const Mesh mesh = config.mesh();

  SemidiscreteSystem sys{
      .gram = {},
      .generator = {},
      .dissipation = {},
      .layout = {},
      .config = config,
      .phi_space = FieldSpace(mesh, flavor_for(config.bcs, Field::Phi)),
      .psi_space = FieldSpace(mesh, flavor_for(config.bcs, Field::Psi)),
      .theta_space = FieldSpace(mesh, flavor_for(config.bcs, Field::Theta)),
      .xi_space = FieldSpace(mesh, flavor_for(config.bcs, Field::Xi)),
      .gram_factor = {},
  };

  const ChannelModes th = channel_modes(config.law_theta, p.varpi1);
  const ChannelModes xi = channel_modes(config.law_xi, p.varpi2);
  sys.dissipative_structure = !th.degenerate && !xi.degenerate;

  const int m_th = static_cast<int>(th.rates.size());
  const int m_xi = static_cast<int>(xi.rates.size());
  sys.layout = BlockLayout(sys.phi_space.dofs(), sys.psi_space.dofs(), sys.theta_space.dofs(), m_th,
                           sys.xi_space.dofs(), m_xi);
  const Eigen::Index n = sys.layout.dim();

  const Eigen::MatrixXd k_phi = build_stiffness_matrix(sys.phi_space);
  const Eigen::MatrixXd m_phi = build_mass_matrix(sys.phi_space);
  const Eigen::MatrixXd k_psi = build_stiffness_matrix(sys.psi_space);
  const Eigen::MatrixXd m_psi = build_mass_matrix(sys.psi_space);
  const Eigen::MatrixXd k_th = build_stiffness_matrix(sys.theta_space);
  const Eigen::MatrixXd m_th_mass = build_mass_matrix(sys.theta_space);
  const Eigen::MatrixXd k_xi = build_stiffness_matrix(sys.xi_space);
  const Eigen::MatrixXd m_xi_mass = build_mass_matrix(sys.xi_space);
  const Eigen::MatrixXd g_phi_psi = build_gradient_coupling(sys.phi_space, sys.psi_space);
  const Eigen::MatrixXd g_phi_th = build_gradient_coupling(sys.phi_space, sys.theta_space);
  const Eigen::MatrixXd g_psi_xi = build_gradient_coupling(sys.psi_space, sys.xi_space);
  const Eigen::MatrixXd m_psi_th = build_mass_matrix(sys.psi_space, sys.theta_space);

  // k ||phi_x + psi||^2 + b ||psi_x||^2
  const Eigen::MatrixXd elastic_pp = p.k * k_phi;
  const Eigen::MatrixXd elastic_ps = p.k * g_phi_psi.transpose();
  const Eigen::MatrixXd elastic_ss = p.k * m_psi + p.b * k_psi;

  sys.gram = Eigen::MatrixXd::Zero(n, n);
  {
    BlockWriter m(sys.gram, sys.layout);
    m.add(Field::Phi, Field::Phi, elastic_pp);
    m.add(Field::Phi, Field::Psi, elastic_ps);
    m.add(Field::Psi, Field::Phi, elastic_ps.transpose());
    m.add(Field::Psi, Field::Psi, elastic_ss);
    m.add(Field::PhiVel, Field::PhiVel, p.rho1 * m_phi);
    m.add(Field::PsiVel, Field::PsiVel, p.rho2 * m_psi);
    m.add(Field::Theta, Field::Theta, p.rho3 * m_th_mass);
    for (int i = 0; i < m_th; ++i) m.add(Field::Eta, i, Field::Eta, i, th.metric[i] * k_th);
    m.add(Field::Xi, Field::Xi, p.rho4 * m_xi_mass);
    for (int i = 0; i < m_xi; ++i) m.add(Field::Zeta, i, Field::Zeta, i, xi.metric[i] * k_xi);
  }

  sys.generator = Eigen::MatrixXd::Zero(n, n);
  {
    BlockWriter a(sys.generator, sys.layout);
    // phi_t = Phi, psi_t = Psi, tested in the elastic inner product.
    a.add(Field::Phi, Field::PhiVel, elastic_pp);
    a.add(Field::Phi, Field::PsiVel, elastic_ps);
    a.add(Field::Psi, Field::PhiVel, elastic_ps.transpose());
    a.add(Field::Psi, Field::PsiVel, elastic_ss);

    // rho1 Phi_t = k (phi_x + psi)_x - gamma theta_x
    a.add(Field::PhiVel, Field::Phi, -elastic_pp);
    a.add(Field::PhiVel, Field::Psi, -elastic_ps);
    a.add(Field::PhiVel, Field::Theta, p.gamma * g_phi_th.transpose());

    // rho2 Psi_t = b psi_xx - k (phi_x + psi) + gamma theta - sigma xi_x
    a.add(Field::PsiVel, Field::Phi, -elastic_ps.transpose());
    a.add(Field::PsiVel, Field::Psi, -elastic_ss);
    a.add(Field::PsiVel, Field::Theta, p.gamma * m_psi_th.transpose());
    a.add(Field::PsiVel, Field::Xi, p.sigma * g_psi_xi.transpose());

    // rho3 theta_t = varpi1 [(1-l) theta_xx + l int mu eta_xx] - gamma (Phi_x + Psi)
    a.add(Field::Theta, Field::PhiVel, -p.gamma * g_phi_th);
    a.add(Field::Theta, Field::PsiVel, -p.gamma * m_psi_th);
    a.add(Field::Theta, Field::Theta, -th.instantaneous * k_th);
    for (int i = 0; i < m_th; ++i) {
      const double flux = th.degenerate ? 0.0 : th.metric[i];
      a.add(Field::Theta, 0, Field::Eta, i, -flux * k_th);
      a.add(Field::Eta, i, Field::Theta, 0, th.metric[i] * k_th);
      a.add(Field::Eta, i, Field::Eta, i, -th.rates[i] * th.metric[i] * k_th);
    }

    // rho4 xi_t = varpi2 [(1-l) xi_xx + l int nu zeta_xx] - sigma Psi_x
    a.add(Field::Xi, Field::PsiVel, -p.sigma * g_psi_xi);
    a.add(Field::Xi, Field::Xi, -xi.instantaneous * k_xi);
    for (int i = 0; i < m_xi; ++i) {
      const double flux = xi.degenerate ? 0.0 : xi.metric[i];
      a.add(Field::Xi, 0, Field::Zeta, i, -flux * k_xi);
      a.add(Field::Zeta, i, Field::Xi, 0, xi.metric[i] * k_xi);
      a.add(Field::Zeta, i, Field::Zeta, i, -xi.rates[i] * xi.metric[i] * k_xi);
    }
  }

  sys.dissipation = Eigen::MatrixXd::Zero(n, n);
  {
    BlockWriter d(sys.dissipation, sys.layout);
    d.add(Field::Theta, Field::Theta, th.instantaneous * k_th);
    for (int i = 0; i < m_th; ++i) d.add(Field::Eta, i, Field::Eta, i, th.damping[i] * k_th);
    d.add(Field::Xi, Field::Xi, xi.instantaneous * k_xi);
    for (int i = 0; i < m_xi; ++i) d.add(Field::Zeta, i, Field::Zeta, i, xi.damping[i] * k_xi);
  }

  sys.gram_factor.compute(sys.gram);
  if (sys.gram_factor.info() != Eigen::Success) {
    throw AssemblyError("energy Gram matrix is not positive definite");
  }
  return sys;
}

namespace {

void require_state(const SemidiscreteSystem& sys, const Eigen::VectorXd& state) {
  if (state.size() != sys.dim()) {
    throw ShapeError("state has length " + std::to_string(state.size()) + ", layout expects " +
                     std::to_string(sys.dim()));
  }
}

}  // namespace

double energy(const SemidiscreteSystem& sys, const Eigen::VectorXd& state) {
  require_state(sys, state);
  return 0.5 * state.dot(sys.gram * state);
}

double dissipation(const SemidiscreteSystem& sys, const Eigen::VectorXd& state) {
  require_state(sys, state);
  return state.dot(sys.dissipation * state);
}

Eigen::VectorXd apply_generator(const SemidiscreteSystem& sys, const Eigen::VectorXd& state) {
  require_state(sys, state);
  return sys.gram_factor.solve(sys.generator * state);
}

// ---------------------------------------------------------------------------

namespace {

// int_0^inf e^{-b r} p(r) dr with u = 1 - e^{-b r}: (1/b) int_0^1 p(-ln(1-u)/b) du,
// midpoint rule in u. Exact for constant p.
double exponential_average(const std::function<double(double)>& p, double rate, int points) {
  double sum = 0.0;
  const double du = 1.0 / points;
  for (int q = 0; q < points; ++q) {
    const double u = (q + 0.5) * du;
    const double v = p(-std::log1p(-u) / rate);
    if (!std::isfinite(v)) throw LiftError("past history sample is not finite");
    sum += v;
  }
  return sum * du / rate;
}

std::vector<Eigen::VectorXd> lift_channel(const PastHistory& past, const FieldSpace& space,
                                          const KernelSpec& law) {
  constexpr int kPoints = 2048;
  std::vector<Eigen::VectorXd> modes;
  const Eigen::VectorXd x = space.mesh().node_coordinates();
  const PronyKernel kernel = law.memory_kernel();
  for (const auto& t : kernel.terms()) {
    Eigen::VectorXd nodal(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      auto at_x = [&](double s) { return past(x(j), s); };
      const double coarse = exponential_average(at_x, t.rate, kPoints);
      const double fine = exponential_average(at_x, t.rate, 2 * kPoints);
      // Divergent tails grow with the quadrature resolution; discontinuities only move the value by O(1/points).
      if (std::abs(fine - coarse) > 1e-2 * std::abs(fine)) {
        throw LiftError("past history is not integrable against exp(-" + std::to_string(t.rate) + " s)");
      }
      nodal(j) = fine;
    }
    modes.push_back(space.from_nodal(nodal));
  }
  return modes;
}

}  // namespace

HistoryModes history_lift(const PastHistory& p0, const PastHistory& q0, const SemidiscreteSystem& sys) {
  return HistoryModes{
      .eta = lift_channel(p0, sys.theta_space, sys.config.law_theta),
      .zeta = lift_channel(q0, sys.xi_space, sys.config.law_xi),
  };
}

void set_history(const SemidiscreteSystem& sys, const HistoryModes& modes, Eigen::VectorXd& state) {
  require_state(sys, state);
  if (static_cast<int>(modes.eta.size()) != sys.layout.modes_theta() ||
      static_cast<int>(modes.zeta.size()) != sys.layout.modes_xi()) {
    throw LayoutError("history mode count does not match the layout");
  }
  for (int i = 0; i < sys.layout.modes_theta(); ++i) sys.layout.segment(state, Field::Eta, i) = modes.eta[i];
  for (int i = 0; i < sys.layout.modes_xi(); ++i) sys.layout.segment(state, Field::Zeta, i) = modes.zeta[i];
}

}  // namespace tgp
