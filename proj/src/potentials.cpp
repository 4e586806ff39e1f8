#include "floqep/potentials.hpp"

#include "floqep/dvr.hpp"
#include "floqep/errors.hpp"

#include <boost/math/tools/roots.hpp>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>

namespace floqep {

struct PotentialCurve::Spline {
  gsl_interp_accel *accel = nullptr;
  gsl_spline *spline = nullptr;

  Spline(const std::vector<double> &x, const std::vector<double> &y) {
    spline = gsl_spline_alloc(gsl_interp_cspline, x.size());
    gsl_spline_init(spline, x.data(), y.data(), x.size());
  }
  ~Spline() { gsl_spline_free(spline); }
  Spline(const Spline &) = delete;
  Spline &operator=(const Spline &) = delete;

  // gsl_interp_accel is a lookup cache; a fresh one per call keeps this thread-safe.
  double eval(double x) const { return gsl_spline_eval(spline, x, nullptr); }
};

PotentialCurve PotentialCurve::morse(double depth, double r_eq, double range, double asymptote) {
  if (!(depth > 0.0) || !(r_eq > 0.0) || !(range > 0.0))
    throw DomainError("Morse depth, equilibrium distance and range must be positive");
  PotentialCurve c;
  c.form_ = CurveForm::morse;
  c.depth_ = depth;
  c.r_eq_ = r_eq;
  c.range_ = range;
  c.asymptote_ = asymptote;
  return c;
}

PotentialCurve PotentialCurve::extended_morse(double depth, double r_eq, double range, double asymptote,
                                              double c6, double r_damp) {
  PotentialCurve c = morse(depth, r_eq, range, asymptote);
  if (!(c6 >= 0.0) || !(r_damp > 0.0)) throw DomainError("dispersion tail needs C6 >= 0, r_damp > 0");
  c.form_ = CurveForm::extended_morse;
  c.c6_ = c6;
  c.r_damp_ = r_damp;
  return c;
}

PotentialCurve PotentialCurve::tabulated(std::vector<double> r, std::vector<double> v, double asymptote) {
  if (r.size() != v.size() || r.size() < 4) throw DomainError("tabulated curve needs >= 4 matching points");
  if (!std::is_sorted(r.begin(), r.end()) || std::adjacent_find(r.begin(), r.end()) != r.end())
    throw DomainError("tabulated curve abscissae must be strictly increasing");
  if (r.front() <= 0.0) throw DomainError("tabulated curve must start at R > 0");
  PotentialCurve c;
  c.form_ = CurveForm::tabulated;
  c.asymptote_ = asymptote;
  c.table_r_ = std::move(r);
  c.table_v_ = std::move(v);
  c.spline_ = std::make_shared<const Spline>(c.table_r_, c.table_v_);
  return c;
}

double PotentialCurve::operator()(double r) const {
  if (!(r > 0.0)) throw DomainError("potential evaluated at R <= 0");
  switch (form_) {
  case CurveForm::morse:
  case CurveForm::extended_morse: {
    const double e = 1.0 - std::exp(-range_ * (r - r_eq_));
    double v = depth_ * e * e + asymptote_ - depth_;
    if (form_ == CurveForm::extended_morse) {
      const double f = std::pow(1.0 - std::exp(-r / r_damp_), 6);
      v -= c6_ * f / std::pow(r, 6);
    }
    return v;
  }
  case CurveForm::tabulated:
    if (r < table_r_.front()) throw DomainError("R below tabulated range");
    if (r >= table_r_.back()) return asymptote_;
    return spline_->eval(r);
  }
  return 0.0;
}

std::complex<double> PotentialCurve::operator()(std::complex<double> z) const {
  if (z.imag() == 0.0 || form_ == CurveForm::tabulated) return (*this)(z.real());
  const std::complex<double> e = 1.0 - std::exp(-range_ * (z - r_eq_));
  std::complex<double> v = depth_ * e * e + (asymptote_ - depth_);
  if (form_ == CurveForm::extended_morse) {
    const std::complex<double> f = std::pow(1.0 - std::exp(-z / r_damp_), 6);
    v -= c6_ * f / std::pow(z, 6);
  }
  return v;
}

DipoleFunction DipoleFunction::constant(double value) {
  DipoleFunction d;
  d.form_ = DipoleForm::constant;
  d.limit_ = value;
  return d;
}

DipoleFunction DipoleFunction::exponential(double limit, double amplitude, double decay, double r_ref) {
  if (!(decay > 0.0)) throw DomainError("dipole decay constant must be positive");
  DipoleFunction d;
  d.form_ = DipoleForm::exponential;
  d.limit_ = limit;
  d.amplitude_ = amplitude;
  d.decay_ = decay;
  d.r_ref_ = r_ref;
  return d;
}

DipoleFunction DipoleFunction::tabulated(std::vector<double> r, std::vector<double> mu) {
  DipoleFunction d;
  d.form_ = DipoleForm::tabulated;
  d.limit_ = mu.empty() ? 0.0 : mu.back();
  d.table_ = PotentialCurve::tabulated(std::move(r), std::move(mu), d.limit_);
  return d;
}

double DipoleFunction::operator()(double r) const {
  switch (form_) {
  case DipoleForm::constant: return limit_;
  case DipoleForm::exponential: return limit_ + amplitude_ * std::exp(-decay_ * (r - r_ref_));
  case DipoleForm::tabulated: return table_(r);
  }
  return 0.0;
}

std::complex<double> DipoleFunction::operator()(std::complex<double> z) const {
  if (form_ == DipoleForm::exponential) return limit_ + amplitude_ * std::exp(-decay_ * (z - r_ref_));
  return (*this)(z.real());
}

void MolecularModel::validate() const {
  if (!(reduced_mass > 0.0)) throw ConfigError("reduced_mass", "must be positive");
}

DressedChannelPair::DressedChannelPair(const MolecularModel &model, const LaserPoint &laser)
    : model_(&model) {
  laser.validate();
  photon_energy_ = laser.photon_energy();
  field_ = laser.field_amplitude();
}

DressedChannelPair dressed_channels(const MolecularModel &model, const LaserPoint &laser) {
  return DressedChannelPair(model, laser);
}

SampledChannels sample(const DressedChannelPair &pair, const Eigen::VectorXd &r) {
  SampledChannels s;
  s.r = r;
  s.vu.resize(r.size());
  s.vg.resize(r.size());
  s.w.resize(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    s.vu[i] = pair.vu(r[i]);
    s.vg[i] = pair.vg(r[i]);
    s.w[i] = pair.coupling(r[i]);
  }
  return s;
}

AdiabaticCurves adiabatic_potentials(const SampledChannels &ch) {
  const Eigen::Index n = ch.r.size();
  AdiabaticCurves out;
  out.lower.resize(n);
  out.upper.resize(n);
  out.angle.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = 0.5 * (ch.vu[i] + ch.vg[i]);
    const double half = 0.5 * (ch.vu[i] - ch.vg[i]);
    const double root = std::hypot(half, ch.w[i]);
    out.lower[i] = mean - root;
    out.upper[i] = mean + root;
    // eigenvector of V- is (cos a, sin a) in the (u, g) basis
    out.angle[i] = 0.5 * std::atan2(-2.0 * ch.w[i], -(ch.vu[i] - ch.vg[i]));
  }
  return out;
}

std::vector<double> find_crossings(const DressedChannelPair &pair, double r_min, double r_max,
                                   int scan_points) {
  std::vector<double> roots;
  auto diff = [&](double r) { return pair.vu(r) - pair.vg(r); };
  double prev_r = r_min;
  double prev = diff(r_min);
  for (int k = 1; k <= scan_points; ++k) {
    const double r = r_min + (r_max - r_min) * k / scan_points;
    const double cur = diff(r);
    if (prev == 0.0) {
      roots.push_back(prev_r);
    } else if (prev * cur < 0.0) {
      boost::uintmax_t iters = 100;
      const auto [lo, hi] = boost::math::tools::toms748_solve(
          diff, prev_r, r, prev, cur, boost::math::tools::eps_tolerance<double>(50), iters);
      roots.push_back(0.5 * (lo + hi));
    }
    prev_r = r;
    prev = cur;
  }
  return roots;
}

InsufficientLevels::InsufficientLevels(int requested, int found)
    : std::runtime_error("requested " + std::to_string(requested) + " bound levels, found " +
                         std::to_string(found)),
      requested_(requested), found_(found) {}

int count_nodes(const Eigen::VectorXd &wf) {
  const double floor = 1e-6 * wf.cwiseAbs().maxCoeff();
  int nodes = 0;
  double last = 0.0;
  for (Eigen::Index i = 0; i < wf.size(); ++i) {
    if (std::abs(wf[i]) < floor) continue;
    if (last != 0.0 && (wf[i] > 0.0) != (last > 0.0)) ++nodes;
    last = wf[i];
  }
  return nodes;
}

std::vector<VibLevel> bound_levels(const PotentialCurve &curve, double mass, int count, const SineDvr &grid) {
  if (count < 1) throw DomainError("level count must be positive");
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  Eigen::MatrixXd h = grid.kinetic(mass);
  for (int i = 0; i < grid.size(); ++i) h(i, i) += curve(grid.nodes()[i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("bound-state eigensolve failed");

  int bound = 0;
  while (bound < grid.size() && es.eigenvalues()[bound] < curve.asymptote()) ++bound;
  if (bound < count) throw InsufficientLevels(count, bound);

  std::vector<VibLevel> levels;
  levels.reserve(count);
  for (int v = 0; v < count; ++v) {
    VibLevel lvl;
    lvl.v = v;
    lvl.energy = es.eigenvalues()[v];
    lvl.wavefunction = es.eigenvectors().col(v);
    // sign convention: positive lobe at the inner turning point
    Eigen::Index first = 0;
    lvl.wavefunction.cwiseAbs().maxCoeff(&first);
    for (Eigen::Index i = 0; i < lvl.wavefunction.size(); ++i)
      if (std::abs(lvl.wavefunction[i]) > 1e-3 * std::abs(lvl.wavefunction[first])) {
        if (lvl.wavefunction[i] < 0.0) lvl.wavefunction = -lvl.wavefunction;
        break;
      }
    lvl.nodes = count_nodes(lvl.wavefunction);
    levels.push_back(std::move(lvl));
  }
  return levels;
}

} // namespace floqep
