#pragma once

#include <Eigen/Dense>

#include <complex>

namespace floqep {

/// Sine discrete variable representation on (r_min, r_max) with `points`
/// interior nodes and Dirichlet boundaries. Basis functions
/// u_i(x) = sum_k C_ik phi_k(x), phi_k = sqrt(2/L) sin(k pi (x - r_min) / L).
class SineDvr {
public:
  SineDvr(double r_min, double r_max, int points);

  int size() const { return static_cast<int>(nodes_.size()); }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  double spacing() const { return spacing_; }
  const Eigen::VectorXd &nodes() const { return nodes_; }

  // Orthogonal DVR <-> sine basis transform C (symmetric).
  Eigen::MatrixXd transform() const;
  // -(1/2m) d^2/dx^2 in the DVR, closed form (Colbert & Miller 1992).
  Eigen::MatrixXd kinetic(double mass) const;
  // Values u_i'(x) at arbitrary points, one column per point.
  Eigen::MatrixXd basis_derivatives(const Eigen::VectorXd &x) const;
  // Grid value -> DVR coefficient factor, sqrt(spacing).
  double weight() const { return std::sqrt(spacing_); }

private:
  double r_min_;
  double r_max_;
  double spacing_;
  Eigen::VectorXd nodes_;
};

enum class ScalingKind { none, exterior, absorbing };

/// Outgoing-wave boundary treatment for the resonance eigenproblem.
///
/// exterior: smooth exterior complex scaling z(R) with z'(R) = 1 + (e^{i angle} - 1) s(R),
///   s the quintic smoothstep from `onset` to `onset + switch_width`.
/// absorbing: -i strength ((R - onset)/(r_max - onset))^power added to every channel.
struct ScalingSpec {
  ScalingKind kind = ScalingKind::none;
  double angle = 0.0;
  double onset = 0.0;
  double switch_width = 2.0;
  double cap_strength = 0.0;
  double cap_power = 2.0;

  bool active() const;
};

struct RadialGrid {
  SineDvr dvr;
  ScalingSpec scaling;

  void validate() const;
};

// Quintic smoothstep 10x^3 - 15x^4 + 6x^5 clamped to [0, 1], and its integral.
double smoothstep5(double x);
double smoothstep5_integral(double x);

/// Kinetic operator and coordinate data for one grid + scaling + mass.
///
/// With exterior scaling the weak form gives A_ij = (1/2m) int u_i' u_j' / z' dR
/// and overlap S_ii = z'(R_i); the stored matrix is S^{-1/2} A S^{-1/2}, which
/// is complex symmetric. The correction inside the scaled region is
/// integrated with Gauss-Legendre panels using exact basis derivatives.
class ScaledKinetic {
public:
  ScaledKinetic(const RadialGrid &grid, double mass);

  const Eigen::MatrixXcd &matrix() const { return matrix_; }
  // Complex coordinate z(R_i) at the nodes (equal to R_i outside the scaled region).
  const Eigen::VectorXcd &coordinates() const { return coordinates_; }
  // Diagonal absorbing term -i W(R_i); zero unless kind == absorbing.
  const Eigen::VectorXcd &absorber() const { return absorber_; }
  const RadialGrid &grid() const { return grid_; }
  double mass() const { return mass_; }

private:
  RadialGrid grid_;
  double mass_;
  Eigen::MatrixXcd matrix_;
  Eigen::VectorXcd coordinates_;
  Eigen::VectorXcd absorber_;
};

} // namespace floqep
