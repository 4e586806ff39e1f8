#pragma once

#include "floqep/units.hpp"

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace floqep {

enum class CurveForm { morse, extended_morse, tabulated };

/// Radial potential energy curve V(R) in hartree, R in bohr.
///
/// Morse: D (1 - exp(-a (R - Re)))^2 + (asymptote - D).
/// Extended Morse adds a damped dispersion tail -C6 f(R) / R^6 with
/// f(R) = (1 - exp(-R / r_damp))^6, which leaves the well shape intact and
/// gives the curve a physical long-range approach to the asymptote.
/// Tabulated curves are natural cubic splines through the supplied points and
/// are held at the asymptote past the last node.
class PotentialCurve {
public:
  static PotentialCurve morse(double depth, double r_eq, double range, double asymptote);
  static PotentialCurve extended_morse(double depth, double r_eq, double range, double asymptote,
                                       double c6, double r_damp);
  static PotentialCurve tabulated(std::vector<double> r, std::vector<double> v, double asymptote);

  double operator()(double r) const;
  // Analytic continuation used by exterior complex scaling. Tabulated curves
  // have no continuation and are evaluated at Re(z).
  std::complex<double> operator()(std::complex<double> z) const;

  CurveForm form() const { return form_; }
  double depth() const { return depth_; }
  double r_eq() const { return r_eq_; }
  double range() const { return range_; }
  double asymptote() const { return asymptote_; }
  double c6() const { return c6_; }
  double r_damp() const { return r_damp_; }
  const std::vector<double> &table_r() const { return table_r_; }
  const std::vector<double> &table_v() const { return table_v_; }

private:
  struct Spline;

  CurveForm form_ = CurveForm::morse;
  double depth_ = 0.0;
  double r_eq_ = 0.0;
  double range_ = 0.0;
  double asymptote_ = 0.0;
  double c6_ = 0.0;
  double r_damp_ = 1.0;
  std::vector<double> table_r_;
  std::vector<double> table_v_;
  std::shared_ptr<const Spline> spline_;
};

enum class DipoleForm { constant, exponential, tabulated };

/// Transition dipole mu(R) in atomic units. The exponential form decays to the
/// separated-atom value: mu(R) = limit + amplitude * exp(-decay * (R - r_ref)).
class DipoleFunction {
public:
  static DipoleFunction constant(double value);
  static DipoleFunction exponential(double limit, double amplitude, double decay, double r_ref);
  static DipoleFunction tabulated(std::vector<double> r, std::vector<double> mu);

  double operator()(double r) const;
  std::complex<double> operator()(std::complex<double> z) const;

  DipoleForm form() const { return form_; }
  double limit() const { return limit_; }
  double amplitude() const { return amplitude_; }
  double decay() const { return decay_; }
  double r_ref() const { return r_ref_; }

private:
  DipoleForm form_ = DipoleForm::constant;
  double limit_ = 0.0;
  double amplitude_ = 0.0;
  double decay_ = 0.0;
  double r_ref_ = 0.0;
  PotentialCurve table_; // reuses the spline machinery
};

/// Two-state diatomic model: initial state u, excited state g.
struct MolecularModel {
  std::string name;
  PotentialCurve u;
  PotentialCurve g;
  DipoleFunction dipole;
  double reduced_mass = 0.0; // electron masses

  void validate() const;
};

/// Field-dressed diabatic channels (u,0) and (g,-1) at one laser point.
class DressedChannelPair {
public:
  DressedChannelPair(const MolecularModel &model, const LaserPoint &laser);

  double vu(double r) const { return model_->u(r); }
  double vg(double r) const { return model_->g(r) - photon_energy_; }
  double coupling(double r) const { return -0.5 * field_ * model_->dipole(r); }
  std::complex<double> vu(std::complex<double> z) const { return model_->u(z); }
  std::complex<double> vg(std::complex<double> z) const { return model_->g(z) - photon_energy_; }
  std::complex<double> coupling(std::complex<double> z) const { return -0.5 * field_ * model_->dipole(z); }

  double photon_energy() const { return photon_energy_; }
  double field() const { return field_; }
  const MolecularModel &model() const { return *model_; }

private:
  const MolecularModel *model_;
  double photon_energy_;
  double field_;
};

DressedChannelPair dressed_channels(const MolecularModel &model, const LaserPoint &laser);

struct SampledChannels {
  Eigen::VectorXd r;
  Eigen::VectorXd vu;
  Eigen::VectorXd vg;
  Eigen::VectorXd w;
};

SampledChannels sample(const DressedChannelPair &pair, const Eigen::VectorXd &r);

struct AdiabaticCurves {
  Eigen::VectorXd lower; // V-
  Eigen::VectorXd upper; // V+
  // Mixing angle: (phi_-, phi_+) = R(angle)^T (phi_u, phi_g).
  Eigen::VectorXd angle;
};

AdiabaticCurves adiabatic_potentials(const SampledChannels &channels);

/// Points where vu(R) == vg(R) inside [r_min, r_max], located by sign change
/// on a fine scan and polished with a bracketing root finder.
std::vector<double> find_crossings(const DressedChannelPair &pair, double r_min, double r_max,
                                   int scan_points = 4000);

struct VibLevel {
  int v = 0;
  double energy = 0.0;
  Eigen::VectorXd wavefunction; // DVR coefficients, sum of squares = 1
  int nodes = 0;
};

class SineDvr;

class InsufficientLevels : public std::runtime_error {
public:
  InsufficientLevels(int requested, int found);
  int requested() const { return requested_; }
  int found() const { return found_; }

private:
  int requested_;
  int found_;
};

/// Lowest `count` vibrational levels of one curve on a sine DVR with Dirichlet
/// boundaries. Throws InsufficientLevels when the curve binds fewer states.
std::vector<VibLevel> bound_levels(const PotentialCurve &curve, double mass, int count,
                                   const SineDvr &grid);

int count_nodes(const Eigen::VectorXd &wavefunction);

} // namespace floqep
