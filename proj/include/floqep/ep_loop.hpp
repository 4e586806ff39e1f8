#pragma once

#include "floqep/continuation.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace floqep {

/// Rectangle in the (wavelength, intensity) plane.
struct LaserBox {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double intensity_min = 0.0;
  double intensity_max = 0.0;

  void validate() const;
  bool contains(const LaserPoint &p) const;
  LaserPoint at(double x, double y) const; // x, y in [0, 1]
  std::array<LaserPoint, 4> corners() const;
};

struct PairSample {
  cplx first;
  cplx second;
  double gap() const { return std::abs(first - second); }
  cplx discriminant() const { return (first - second) * (first - second); }
};

/// Evaluates the two resonances that continue from a pair of field-free
/// levels. At each laser point the pair is the two Ritz vectors near the
/// levels with the largest weight in the span of their reference states.
class PairEvaluator {
public:
  PairEvaluator(const SpectralProblem &problem, int label_a, int label_b);

  PairSample operator()(const LaserPoint &laser) const;
  double level_spacing() const { return spacing_; }
  int label_a() const { return label_a_; }
  int label_b() const { return label_b_; }
  const SpectralProblem &problem() const { return *problem_; }

private:
  const SpectralProblem *problem_;
  int label_a_;
  int label_b_;
  double spacing_;
  cplx target_;
  Eigen::MatrixXcd span_; // orthonormal basis of the two reference states
};

struct EpSearchOptions {
  int coarse_lambda = 9;
  int coarse_intensity = 9;
  double gap_tolerance = 1e-6;    // relative to the level spacing
  int simplex_iterations = 300;
  int newton_iterations = 25;
  double transect_length = 1e-2;  // longest transect, as a fraction of the box side
  int transect_points = 8;
  double exponent_tolerance = 0.1;
  bool parallel = true;
};

struct TransectFit {
  double exponent = 0.0;
  double rms_log_error = 0.0;
  std::vector<double> distances; // box-relative
  std::vector<double> gaps;
};

struct EpEstimate {
  LaserPoint point;
  cplx energy;               // mean of the pair at the estimate
  double residual_gap = 0.0; // hartree
  double level_spacing = 0.0;
  bool found = false;
  bool confirmed = false;    // square-root fit within tolerance on both transects
  TransectFit along_lambda;
  TransectFit along_intensity;
  double exponent = 0.0;     // mean of the two transects
  double coarse_gap = 0.0;   // best gap of the coarse grid
  std::array<double, 4> corner_gaps{};
  int evaluations = 0;
  std::string diagnostic;
};

/// Coarse gap grid, simplex minimization from the grid minimum, Newton
/// polish on the analytic discriminant (E1 - E2)^2, then square-root fits of
/// the gap along the two axes through the optimum.
EpEstimate locate_ep(const PairEvaluator &pair, const LaserBox &box, const EpSearchOptions &options = {});

enum class LoopDirection { forward, reverse };

/// Closed contour I = I_max sin(phi/2), lambda = lambda0 + dlambda sin(phi)
/// with phi running linearly in time from 0 to 2 pi (reverse: 2 pi to 0).
struct LoopSpec {
  double lambda0_nm = 0.0;
  double dlambda_nm = 0.0;
  double intensity_max_gw_cm2 = 0.0;
  double duration_fs = 0.0;
  int steps = 400;
  LoopDirection direction = LoopDirection::forward;
  double floor_fraction = 1e-3; // solve intensity floor, relative to I_max

  void validate() const;
  LaserPoint at_phase(double phi) const;
  // phase reached at time t (atomic units)
  double phase_at(double t_au) const;
  double time_at(double phi) const;
  double duration_au() const;
};

struct LoopPath {
  ParameterPath path; // parameter is the phase
  std::vector<double> times; // atomic units, one per sample
};

LoopPath generate_loop(const LoopSpec &spec);

/// Even-odd test of `p` against the closed polygon through `loop`.
bool encloses(const std::vector<LaserPoint> &loop, const LaserPoint &p);
bool encloses(const LoopSpec &spec, const LaserPoint &p, int polygon_points = 2000);

struct SurvivalTrace {
  std::vector<double> times; // atomic units
  std::vector<double> phases;
  std::vector<LaserPoint> lasers;
  std::vector<cplx> energies;
  std::vector<double> widths;
  std::vector<double> survival;
  std::vector<bool> samples; // false for points inserted by refinement
  std::optional<int> start_label;
  std::optional<int> end_label;
  double end_overlap = 0.0;
  bool exchange = false;
  std::optional<bool> encloses_ep;
  int flagged_steps = 0;
  std::string diagnostic;

  double final_survival() const { return survival.empty() ? 1.0 : survival.back(); }
};

struct LoopOptions {
  TrackingOptions tracking;
  std::optional<LaserPoint> ep; // for the winding check
  double negative_width_tolerance = 1e-12; // hartree; smaller negatives are roundoff
};

/// Follow the resonance that starts on field-free level `start_label` around
/// the loop. The branch is seeded and labelled at the intensity floor.
SurvivalTrace follow_loop(const SpectralProblem &problem, const LoopSpec &spec, int start_label,
                          const LoopOptions &options = {});

/// exp(-int_0^t Gamma dt') by cumulative trapezoid; times and widths in a.u.
std::vector<double> survival_probability(const std::vector<double> &times, const std::vector<double> &widths);

} // namespace floqep
