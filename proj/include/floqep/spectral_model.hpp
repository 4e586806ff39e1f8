#pragma once

#include "floqep/floquet.hpp"

#include <memory>
#include <string>
#include <vector>

namespace floqep {

/// Field-free reference state used to put vibrational labels on resonances.
/// `vector` has the full operator dimension (zero outside the u block).
struct ReferenceState {
  int label = 0;
  double energy = 0.0;
  Eigen::VectorXcd vector;
};

/// Anything that yields complex quasienergies at a laser point. Continuation,
/// EP search and loop following only talk to this interface, so the 2x2
/// analytic model and the molecular Floquet operator share all of that code.
class SpectralProblem {
public:
  virtual ~SpectralProblem() = default;

  virtual Eigen::MatrixXcd matrix(const LaserPoint &laser) const = 0;
  // Up to `count` eigenpairs nearest `target`; unconverged candidates may be dropped.
  virtual std::vector<Eigenpair> eigenpairs_near(const LaserPoint &laser, cplx target, int count,
                                                 const std::vector<Eigen::VectorXcd> &guesses = {}) const = 0;
  virtual const std::vector<ReferenceState> &references() const = 0;
  virtual std::string name() const = 0;

  // |E(label+1) - E(label)| of the field-free references.
  double level_spacing(int label) const;
  const ReferenceState &reference(int label) const;
};

struct LabelAssignment {
  std::optional<int> label;
  double overlap = 0.0;
};

/// argmax over references of |c-product overlap|; nullopt below `threshold`.
LabelAssignment assign_label(const Eigen::VectorXcd &vector, const std::vector<ReferenceState> &refs,
                             double threshold = 0.5);

struct FloquetSettings {
  RadialGrid grid{SineDvr(5.0, 28.0, 255), {}};
  PhotonWindow photons;
  int reference_levels = 12;
};

/// Two-channel molecular Floquet problem on a scaled sine-DVR grid.
class MolecularFloquetProblem final : public SpectralProblem {
public:
  MolecularFloquetProblem(MolecularModel model, FloquetSettings settings);

  FloquetOperator operator_at(const LaserPoint &laser) const;
  FloquetOperator operator_at(const LaserPoint &laser, const ScaledKinetic &kinetic) const;

  Eigen::MatrixXcd matrix(const LaserPoint &laser) const override { return operator_at(laser).matrix(); }
  std::vector<Eigenpair> eigenpairs_near(const LaserPoint &laser, cplx target, int count,
                                         const std::vector<Eigen::VectorXcd> &guesses = {}) const override;
  const std::vector<ReferenceState> &references() const override { return references_; }
  std::string name() const override { return model_.name; }

  /// Dense solve with labels and characters, filtered by scaling stability:
  /// an eigenvalue is kept when the same eigenvalue (within `stability_tol`)
  /// reappears with the scaling angle (or CAP strength) changed by +-20%.
  std::vector<Resonance> solve_resonances(const LaserPoint &laser, const EnergyWindow &window,
                                          double stability_tol = 1e-6,
                                          SolveDiagnostics *diagnostics = nullptr) const;

  void annotate(Resonance &res, const LaserPoint &laser) const;

  const MolecularModel &model() const { return model_; }
  const FloquetSettings &settings() const { return settings_; }
  const ScaledKinetic &kinetic() const { return kinetic_; }
  const std::vector<VibLevel> &levels() const { return levels_; }
  Eigen::Index unscaled_points() const;

private:
  MolecularModel model_;
  FloquetSettings settings_;
  ScaledKinetic kinetic_;
  std::vector<VibLevel> levels_;
  std::vector<ReferenceState> references_;
};

} // namespace floqep
