#pragma once

#include "floqep/spectral_model.hpp"

#include <array>

namespace floqep {

/// Closed-form 2x2 non-Hermitian test model sharing the laser-plane interface:
///
///   H(lambda, I) = [[E_a - i g_a/2,   -eps0 mu/2     ],
///                   [-eps0 mu/2,      E_b - hw - i g_b/2]]
///
/// Coalescence requires the real diagonal detuning to vanish and
/// eps0 mu = |g_a - g_b| / 2, so the exceptional point is known exactly.
struct TwoLevelParameters {
  double energy_a = 0.0;
  double width_a = 0.0;
  double energy_b = 0.0;
  double width_b = 0.0;
  double dipole = 1.0;
  int label_a = 0;
  int label_b = 1;
};

class TwoLevelModel final : public SpectralProblem {
public:
  explicit TwoLevelModel(TwoLevelParameters p);

  Eigen::Matrix2cd hamiltonian(const LaserPoint &laser) const;
  // Eigenvalues in closed form, ordered (mean + root, mean - root) with the
  // principal square root.
  std::array<cplx, 2> eigenvalues(const LaserPoint &laser) const;
  LaserPoint exceptional_point() const;

  Eigen::MatrixXcd matrix(const LaserPoint &laser) const override { return hamiltonian(laser); }
  std::vector<Eigenpair> eigenpairs_near(const LaserPoint &laser, cplx target, int count,
                                         const std::vector<Eigen::VectorXcd> &guesses = {}) const override;
  const std::vector<ReferenceState> &references() const override { return references_; }
  std::string name() const override { return "two-level"; }

  const TwoLevelParameters &parameters() const { return p_; }

private:
  TwoLevelParameters p_;
  std::vector<ReferenceState> references_;
};

} // namespace floqep
