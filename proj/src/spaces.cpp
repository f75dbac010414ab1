#include "tgp/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "tgp/errors.hpp"

namespace tgp {

Mesh::Mesh(double length, int cells) : length_(length), cells_(cells) {
  if (!(length > 0.0) || !std::isfinite(length)) throw MeshError("mesh length must be > 0");
  if (cells < 2) throw MeshError("mesh needs at least 2 cells");
}

Eigen::VectorXd Mesh::node_coordinates() const {
  Eigen::VectorXd x(nodes());
  for (int j = 0; j < nodes(); ++j) x(j) = node(j);
  return x;
}

bool is_zero_mean(SpaceFlavor flavor) {
  return flavor == SpaceFlavor::NeumannZeroMean || flavor == SpaceFlavor::FreeZeroMean;
}

namespace {

Eigen::MatrixXd nodal_zero_mean_projector(const Mesh& mesh) {
  const Eigen::VectorXd m = nodal_mass(mesh) * Eigen::VectorXd::Ones(mesh.nodes());
  // P = I - 1 m^T / (m^T 1); m^T 1 = L.
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(mesh.nodes(), mesh.nodes());
  p -= Eigen::VectorXd::Ones(mesh.nodes()) * m.transpose() / m.sum();
  return p;
}

void require_same_mesh(const FieldSpace& a, const FieldSpace& b) {
  if (!(a.mesh() == b.mesh())) throw ShapeError("field spaces live on different meshes");
}

}  // namespace

FieldSpace::FieldSpace(const Mesh& mesh, SpaceFlavor flavor) : mesh_(mesh), flavor_(flavor) {
  const int nn = mesh.nodes();
  switch (flavor) {
    case SpaceFlavor::Dirichlet:
      basis_ = Eigen::MatrixXd::Identity(nn, nn).middleCols(1, nn - 2);
      break;
    case SpaceFlavor::Free:
      basis_ = Eigen::MatrixXd::Identity(nn, nn);
      break;
    case SpaceFlavor::NeumannZeroMean:
    case SpaceFlavor::FreeZeroMean:
      basis_ = nodal_zero_mean_projector(mesh).leftCols(nn - 1);
      break;
  }
}

Eigen::VectorXd FieldSpace::to_nodal(const Eigen::VectorXd& coords) const {
  if (coords.size() != dofs()) throw ShapeError("coordinate vector has wrong length");
  return basis_ * coords;
}

Eigen::VectorXd FieldSpace::from_nodal(const Eigen::VectorXd& nodal) const {
  const int nn = mesh_.nodes();
  if (nodal.size() != nn) throw ShapeError("nodal vector has wrong length");
  switch (flavor_) {
    case SpaceFlavor::Dirichlet: return nodal.segment(1, nn - 2);
    case SpaceFlavor::Free: return nodal;
    default: break;
  }
  // P v = sum_{j<n} (v_j - v_n) P e_j because P 1 = 0.
  return nodal.head(nn - 1).array() - nodal(nn - 1);
}

Eigen::MatrixXd nodal_mass(const Mesh& mesh) {
  const int nn = mesh.nodes();
  const double h = mesh.h();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nn, nn);
  for (int e = 0; e < mesh.cells(); ++e) {
    m(e, e) += h / 3.0;
    m(e + 1, e + 1) += h / 3.0;
    m(e, e + 1) += h / 6.0;
    m(e + 1, e) += h / 6.0;
  }
  return m;
}

Eigen::MatrixXd nodal_stiffness(const Mesh& mesh) {
  const int nn = mesh.nodes();
  const double inv_h = 1.0 / mesh.h();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nn, nn);
  for (int e = 0; e < mesh.cells(); ++e) {
    k(e, e) += inv_h;
    k(e + 1, e + 1) += inv_h;
    k(e, e + 1) -= inv_h;
    k(e + 1, e) -= inv_h;
  }
  return k;
}

Eigen::MatrixXd nodal_gradient(const Mesh& mesh) {
  // On a cell, phi_left' = -1/h, phi_right' = 1/h and int phi_i = h/2.
  const int nn = mesh.nodes();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nn, nn);
  for (int e = 0; e < mesh.cells(); ++e) {
    for (int test : {e, e + 1}) {
      g(test, e) -= 0.5;
      g(test, e + 1) += 0.5;
    }
  }
  return g;
}

Eigen::MatrixXd build_mass_matrix(const FieldSpace& space) {
  const Eigen::MatrixXd& z = space.basis();
  Eigen::MatrixXd m = z.transpose() * nodal_mass(space.mesh()) * z;
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd build_mass_matrix(const FieldSpace& from, const FieldSpace& to) {
  require_same_mesh(from, to);
  return to.basis().transpose() * nodal_mass(from.mesh()) * from.basis();
}

Eigen::MatrixXd build_stiffness_matrix(const FieldSpace& space) {
  const Eigen::MatrixXd& z = space.basis();
  Eigen::MatrixXd k = z.transpose() * nodal_stiffness(space.mesh()) * z;
  return 0.5 * (k + k.transpose());
}

Eigen::MatrixXd build_gradient_coupling(const FieldSpace& from, const FieldSpace& to) {
  require_same_mesh(from, to);
  return to.basis().transpose() * nodal_gradient(from.mesh()) * from.basis();
}

Eigen::MatrixXd zero_mean_projector(const FieldSpace& space) {
  if (space.flavor() == SpaceFlavor::Dirichlet) {
    throw std::logic_error("zero-mean projection is not defined on a Dirichlet space");
  }
  return nodal_zero_mean_projector(space.mesh());
}

Eigen::MatrixXd cell_mass(const Mesh& mesh) {
  return Eigen::MatrixXd::Identity(mesh.cells(), mesh.cells()) * mesh.h();
}

Eigen::MatrixXd cell_gradient(const FieldSpace& space) {
  const Mesh& mesh = space.mesh();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(mesh.cells(), mesh.nodes());
  for (int e = 0; e < mesh.cells(); ++e) {
    g(e, e) = -1.0;
    g(e, e + 1) = 1.0;
  }
  return g * space.basis();
}

}  // namespace tgp
