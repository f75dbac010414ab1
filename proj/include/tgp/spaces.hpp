#pragma once

#include <Eigen/Dense>

namespace tgp {

/// Uniform grid x_j = j L / n on (0, L).
class Mesh {
 public:
  Mesh(double length, int cells);

  double length() const { return length_; }
  int cells() const { return cells_; }
  int nodes() const { return cells_ + 1; }
  double h() const { return length_ / cells_; }
  double node(int j) const { return length_ * j / cells_; }
  Eigen::VectorXd node_coordinates() const;

  friend bool operator==(const Mesh&, const Mesh&) = default;

 private:
  double length_;
  int cells_;
};

/// Which P1 degrees of freedom a field keeps.
///
/// In one dimension Neumann conditions are natural for P1 elements, so
/// NeumannZeroMean and FreeZeroMean share the same discrete space; the
/// distinction records the intent of the field (H^1_* versus L^2_*).
enum class SpaceFlavor { Dirichlet, NeumannZeroMean, Free, FreeZeroMean };

bool is_zero_mean(SpaceFlavor flavor);

/// P1 function space described by its prolongation from coordinates to
/// nodal values, `basis()` (nodes x dofs). Dirichlet spaces keep interior
/// nodes; zero-mean spaces use the mass-orthogonal projections of the
/// first n hat functions, which span {v : int v = 0}.
class FieldSpace {
 public:
  FieldSpace(const Mesh& mesh, SpaceFlavor flavor);

  const Mesh& mesh() const { return mesh_; }
  SpaceFlavor flavor() const { return flavor_; }
  Eigen::Index dofs() const { return basis_.cols(); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  /// Nodal values of the function with coordinates `coords`.
  Eigen::VectorXd to_nodal(const Eigen::VectorXd& coords) const;
  /// Coordinates of the interpolant of `nodal`; boundary values are dropped
  /// for Dirichlet spaces and the mean is removed for zero-mean spaces.
  Eigen::VectorXd from_nodal(const Eigen::VectorXd& nodal) const;

 private:
  Mesh mesh_;
  SpaceFlavor flavor_;
  Eigen::MatrixXd basis_;
};

/// Full nodal P1 matrices (nodes x nodes).
Eigen::MatrixXd nodal_mass(const Mesh& mesh);
Eigen::MatrixXd nodal_stiffness(const Mesh& mesh);
/// Entries int phi_j' phi_i dx, row = test node i, column = trial node j.
Eigen::MatrixXd nodal_gradient(const Mesh& mesh);

Eigen::MatrixXd build_mass_matrix(const FieldSpace& space);
/// Cross mass int basis_from_j basis_to_i dx (rows: `to`, columns: `from`).
Eigen::MatrixXd build_mass_matrix(const FieldSpace& from, const FieldSpace& to);
Eigen::MatrixXd build_stiffness_matrix(const FieldSpace& space);
/// Entries int (d/dx basis_from_j) basis_to_i dx (rows: `to`, columns: `from`).
Eigen::MatrixXd build_gradient_coupling(const FieldSpace& from, const FieldSpace& to);

/// Mass-orthogonal projector onto zero-mean nodal vectors, in nodal
/// coordinates. Throws std::logic_error for Dirichlet spaces.
Eigen::MatrixXd zero_mean_projector(const FieldSpace& space);

/// Piecewise-constant (one value per cell) companions used by the explicit
/// heat-flux formulation.
Eigen::MatrixXd cell_mass(const Mesh& mesh);
/// Cell-wise derivative pairing int phi_j' chi_c dx for a P1 space (rows: cells).
Eigen::MatrixXd cell_gradient(const FieldSpace& space);

}  // namespace tgp
