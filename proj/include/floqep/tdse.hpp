#pragma once

#include "floqep/ep_loop.hpp"
#include "floqep/potentials.hpp"

#include <Eigen/Dense>

#include <map>
#include <vector>

namespace floqep {

/// Laser field along a loop: eps(t) = eps0(t) cos(Phi(t)) with eps0 from the
/// instantaneous intensity and Phi = int_0^t omega(t') dt' integrated with
/// Gauss-Legendre panels.
class PulseField {
public:
  explicit PulseField(LoopSpec spec, int panels = 4096);

  double envelope(double t) const;  // eps0(t), a.u.
  double frequency(double t) const; // omega(t), hartree
  double phase(double t) const;
  double field(double t) const { return envelope(t) * std::cos(phase(t)); }
  double duration() const { return duration_; }
  const LoopSpec &spec() const { return spec_; }

private:
  LoopSpec spec_;
  double duration_;
  double panel_;
  std::vector<double> cumulative_; // phase at panel boundaries
};

enum class Propagation { carrier, rotating };

/// Uniform propagation grid. Nodes are r_min + h k, k = 1..points, with
/// h = (r_max - r_min) / (points + 1), so field-free levels from the sine
/// DVR on (r_min, r_max) sit exactly on it.
struct TdseGrid {
  double r_min = 4.0;
  double r_max = 40.0;
  int points = 512;
  double absorber_onset = 30.0;
  double absorber_strength = 1e-3; // hartree at r_max
  double absorber_power = 2.0;
  double bound_radius = 22.0;      // end of the analysis window

  void validate() const;
};

struct TdseOptions {
  TdseGrid grid;
  Propagation mode = Propagation::rotating;
  double steps_per_cycle = 40.0; // of the carrier at lambda0
  double norm_tolerance = 1e-4;
  int levels = 12;
  bool parallel = false;
};

struct WavePacket {
  Eigen::VectorXcd u; // grid amplitudes, sum |psi|^2 h = norm
  Eigen::VectorXcd g;
  double time = 0.0;
  double absorbed = 0.0;
  double spacing = 0.0;
  Eigen::Index bound_points = 0; // nodes inside the analysis window

  double bound_norm() const;
  double outgoing_norm() const;
  double total() const { return bound_norm() + outgoing_norm() + absorbed; }
};

struct TdseResult {
  WavePacket final;
  double survival = 0.0;       // u-channel norm inside the analysis window
  std::map<int, double> populations;
  double max_norm_error = 0.0;
  int steps = 0;
  double dt = 0.0;
};

TdseResult propagate(const MolecularModel &model, const LoopSpec &spec, int start_level,
                     const TdseOptions &options = {});

} // namespace floqep
