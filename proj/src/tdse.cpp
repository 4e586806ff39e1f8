#include "floqep/tdse.hpp"

#include "floqep/dvr.hpp"
#include "floqep/errors.hpp"
#include "floqep/kernels.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace floqep {

namespace {

std::mutex fftw_planner_mutex; // the FFTW planner is not thread safe

class FftPair {
public:
  explicit FftPair(int n) : n_(n) {
    buffer_ = fftw_alloc_complex(n);
    std::lock_guard lock(fftw_planner_mutex);
    forward_ = fftw_plan_dft_1d(n, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(n, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPair() {
    std::lock_guard lock(fftw_planner_mutex);
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }
  FftPair(const FftPair &) = delete;
  FftPair &operator=(const FftPair &) = delete;

  // psi <- IFFT(phase * FFT(psi))
  void apply(Eigen::VectorXcd &psi, const Eigen::VectorXcd &phase) {
    auto *b = reinterpret_cast<std::complex<double> *>(buffer_);
    for (int i = 0; i < n_; ++i) b[i] = psi[i];
    fftw_execute(forward_);
    for (int i = 0; i < n_; ++i) b[i] *= phase[i];
    fftw_execute(backward_);
    const double inv = 1.0 / n_;
    for (int i = 0; i < n_; ++i) psi[i] = b[i] * inv;
  }

private:
  int n_;
  fftw_complex *buffer_;
  fftw_plan forward_;
  fftw_plan backward_;
};

} // namespace

PulseField::PulseField(LoopSpec spec, int panels) : spec_(std::move(spec)) {
  spec_.validate();
  if (panels < 1) throw DomainError("pulse needs at least one phase panel");
  duration_ = spec_.duration_au();
  panel_ = duration_ / panels;
  cumulative_.assign(panels + 1, 0.0);
  for (int k = 0; k < panels; ++k) {
    const double a = k * panel_;
    cumulative_[k + 1] = cumulative_[k] + boost::math::quadrature::gauss<double, 10>::integrate(
                                              [this](double t) { return frequency(t); }, a, a + panel_);
  }
}

double PulseField::envelope(double t) const {
  if (t <= 0.0 || t >= duration_) return 0.0;
  return spec_.at_phase(spec_.phase_at(t)).field_amplitude();
}

double PulseField::frequency(double t) const {
  t = std::clamp(t, 0.0, duration_);
  return spec_.at_phase(spec_.phase_at(t)).photon_energy();
}

double PulseField::phase(double t) const {
  t = std::clamp(t, 0.0, duration_);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(t / panel_), cumulative_.size() - 2);
  const double a = k * panel_;
  if (t == a) return cumulative_[k];
  return cumulative_[k] +
         boost::math::quadrature::gauss<double, 10>::integrate([this](double s) { return frequency(s); }, a, t);
}

void TdseGrid::validate() const {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw DomainError("TDSE grid needs 0 < r_min < r_max");
  if (points < 64) throw DomainError("TDSE grid needs at least 64 points");
  if (!(absorber_onset > r_min && absorber_onset < r_max)) throw DomainError("absorber onset must lie inside the grid");
  if (!(bound_radius > r_min && bound_radius <= absorber_onset))
    throw DomainError("analysis window must end before the absorber");
  if (absorber_strength < 0.0 || absorber_power < 1.0) throw DomainError("absorber needs strength >= 0, power >= 1");
}

double WavePacket::bound_norm() const {
  return (u.head(bound_points).squaredNorm() + g.head(bound_points).squaredNorm()) * spacing;
}

double WavePacket::outgoing_norm() const {
  const Eigen::Index rest = u.size() - bound_points;
  return (u.tail(rest).squaredNorm() + g.tail(rest).squaredNorm()) * spacing;
}

TdseResult propagate(const MolecularModel &model, const LoopSpec &spec, int start_level, const TdseOptions &opt) {
  model.validate();
  opt.grid.validate();
  const PulseField pulse(spec);
  const TdseGrid &gr = opt.grid;
  const int n = gr.points;
  const SineDvr dvr(gr.r_min, gr.r_max, n);
  const double h = dvr.spacing();
  const Eigen::VectorXd &r = dvr.nodes();

  const auto levels = bound_levels(model.u, model.reduced_mass, opt.levels, dvr);
  if (start_level < 0 || start_level >= static_cast<int>(levels.size()))
    throw DomainError("start level " + std::to_string(start_level) + " is not among the computed levels");

  Eigen::VectorXd vu(n), vg(n), mu(n), absorb(n);
  for (int i = 0; i < n; ++i) {
    vu[i] = model.u(r[i]);
    vg[i] = model.g(r[i]);
    mu[i] = model.dipole(r[i]);
    absorb[i] = r[i] > gr.absorber_onset
                    ? gr.absorber_strength * std::pow((r[i] - gr.absorber_onset) / (gr.r_max - gr.absorber_onset),
                                                      gr.absorber_power)
                    : 0.0;
  }

  const double period = 2.0 * std::numbers::pi / wavelength_to_photon_energy(spec.lambda0_nm);
  const int steps = static_cast<int>(std::ceil(pulse.duration() / (period / opt.steps_per_cycle)));
  const double dt = pulse.duration() / steps;
  if (dt > period / 20.0) throw DomainError("TDSE step must resolve at least 20 steps per optical cycle");

  // half kinetic step in momentum space
  Eigen::VectorXcd kin(n);
  for (int k = 0; k < n; ++k) {
    const int m = k <= n / 2 ? k : k - n;
    const double p = 2.0 * std::numbers::pi * m / (n * h);
    kin[k] = std::polar(1.0, -0.5 * dt * p * p / (2.0 * model.reduced_mass));
  }

  WavePacket wp;
  wp.spacing = h;
  wp.u = levels[start_level].wavefunction.cast<cplx>() / std::sqrt(h);
  wp.g = Eigen::VectorXcd::Zero(n);
  while (wp.bound_points < n && r[wp.bound_points] <= gr.bound_radius) ++wp.bound_points;

  FftPair fft(n);
  Eigen::VectorXd vg_t(n), w_t(n);
  TdseResult res;
  res.dt = dt;
  res.steps = steps;
  for (int s = 0; s < steps; ++s) {
    const double tm = (s + 0.5) * dt;
    fft.apply(wp.u, kin);
    fft.apply(wp.g, kin);
    if (opt.mode == Propagation::carrier) {
      w_t = -pulse.field(tm) * mu;
      vg_t = vg;
    } else {
      // rotating frame of the instantaneous carrier
      w_t = -0.5 * pulse.envelope(tm) * mu;
      vg_t = vg.array() - pulse.frequency(tm);
    }
    wp.absorbed += opt.parallel ? potential_step_parallel(wp.u, wp.g, vu, vg_t, w_t, absorb, dt, h)
                                : potential_step_serial(wp.u, wp.g, vu, vg_t, w_t, absorb, dt, h);
    fft.apply(wp.u, kin);
    fft.apply(wp.g, kin);
    wp.time = (s + 1) * dt;
    const double err = std::abs(wp.total() - 1.0);
    res.max_norm_error = std::max(res.max_norm_error, err);
    if (err > opt.norm_tolerance) {
      std::ostringstream msg;
      msg << "norm bookkeeping off by " << err << " at t = " << wp.time << " a.u. (dt = " << dt
          << "); reduce the time step";
      throw NumericalError(msg.str());
    }
  }

  res.survival = wp.u.head(wp.bound_points).squaredNorm() * h;
  for (const auto &lvl : levels) {
    const cplx amp = (lvl.wavefunction.cast<cplx>().array() * wp.u.array()).sum() * std::sqrt(h);
    res.populations[lvl.v] = std::norm(amp);
  }
  res.final = std::move(wp);
  return res;
}

} // namespace floqep
