#pragma once

#include "floqep/spectral_model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace floqep {

/// A one-parameter path through the laser plane. `at(s)` must be defined on
/// [samples.front(), samples.back()] so steps can be bisected along the curve.
struct ParameterPath {
  std::function<LaserPoint(double)> at;
  std::vector<double> samples;

  // Piecewise-linear path through explicit points, parameterized by index.
  static ParameterPath through(std::vector<LaserPoint> points);
  // Fixed wavelength, intensities swept over the given values.
  static ParameterPath intensity_sweep(double wavelength_nm, std::vector<double> intensities_gw_cm2);
  void validate() const;
};

struct TrackingOptions {
  double min_overlap = 0.7;
  double max_jump = 1e300;   // hartree, complex-plane distance per step
  int max_depth = 12;
  double tie_margin = 0.05;  // relative gap between best and runner-up overlap
  int candidates = 4;
  // Laser points with intensity below this are solved at the floor instead.
  double intensity_floor_gw_cm2 = 0.0;
};

struct BranchPoint {
  double parameter = 0.0;
  LaserPoint laser;
  cplx energy;
  Eigen::VectorXcd vector;
  double overlap = 1.0; // with the previous accepted point
  bool sample = false;  // lies on one of the path's samples (not a bisection point)
  bool flagged = false; // accepted without meeting the criteria

  double width() const { return -2.0 * energy.imag(); }
};

struct ResonanceBranch {
  std::vector<BranchPoint> points;
  std::optional<int> start_label;
  std::optional<int> end_label;
  bool broken = false;
  std::string diagnostic;
  int flagged_steps = 0;

  std::vector<const BranchPoint *> samples() const;
};

/// Overlap continuation: each step keeps the candidate whose eigenvector has
/// the largest overlap with the previous one; steps failing the overlap,
/// jump or tie criteria are bisected up to `max_depth` times, with at most
/// 8 * max_depth bisections per sample interval. Overlap ties go to the
/// candidate nearest the extrapolated eigenvalue when that one is clearly closer.
ResonanceBranch track(const SpectralProblem &problem, const ParameterPath &path, const Eigenpair &seed,
                      const TrackingOptions &options = {});

/// The resonance at `laser` whose eigenvector overlaps field-free level
/// `label` most (|c-product| >= 0.5 required).
Eigenpair seed_from_level(const SpectralProblem &problem, const LaserPoint &laser, int label);

enum class CrossingTopology {
  energies_cross_widths_avoid,
  widths_cross_energies_avoid,
  coalescent,
  no_crossing,
};

std::string to_string(CrossingTopology t);

/// Compare two branches on their common path samples. `degeneracy_tol`
/// (hartree) decides when both differences vanish together.
CrossingTopology classify_crossing(const ResonanceBranch &a, const ResonanceBranch &b,
                                   double degeneracy_tol = 1e-9);

} // namespace floqep
