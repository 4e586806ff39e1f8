#include "floqep/ep_loop.hpp"

#include "floqep/errors.hpp"
#include "floqep/kernels.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace floqep {

void LaserBox::validate() const {
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min)) throw DomainError("box wavelengths must satisfy 0 < min < max");
  if (!(intensity_min >= 0.0) || !(intensity_max > intensity_min))
    throw DomainError("box intensities must satisfy 0 <= min < max");
}

bool LaserBox::contains(const LaserPoint &p) const {
  return p.wavelength_nm >= lambda_min && p.wavelength_nm <= lambda_max && p.intensity_gw_cm2 >= intensity_min &&
         p.intensity_gw_cm2 <= intensity_max;
}

LaserPoint LaserBox::at(double x, double y) const {
  return {lambda_min + x * (lambda_max - lambda_min), intensity_min + y * (intensity_max - intensity_min)};
}

std::array<LaserPoint, 4> LaserBox::corners() const { return {at(0, 0), at(1, 0), at(0, 1), at(1, 1)}; }

PairEvaluator::PairEvaluator(const SpectralProblem &problem, int label_a, int label_b)
    : problem_(&problem), label_a_(label_a), label_b_(label_b) {
  if (label_a == label_b) throw DomainError("EP pair needs two different labels");
  const ReferenceState &a = problem.reference(label_a);
  const ReferenceState &b = problem.reference(label_b);
  spacing_ = std::abs(b.energy - a.energy);
  target_ = 0.5 * (a.energy + b.energy);
  Eigen::MatrixXcd m(a.vector.size(), 2);
  m.col(0) = a.vector;
  m.col(1) = b.vector;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  span_ = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), 2);
}

PairSample PairEvaluator::operator()(const LaserPoint &laser) const {
  const Eigen::MatrixXcd h = problem_->matrix(laser);
  if (h.rows() == 2) {
    // closed form keeps the 2x2 discriminant at full precision
    const cplx mean = 0.5 * (h(0, 0) + h(1, 1));
    const cplx root = std::sqrt(0.25 * (h(0, 0) - h(1, 1)) * (h(0, 0) - h(1, 1)) + h(0, 1) * h(1, 0));
    return {mean + root, mean - root};
  }
  const std::vector<Eigen::VectorXcd> guesses{span_.col(0), span_.col(1)};
  const auto ritz = ritz_refine(h, target_, 4, guesses);
  if (ritz.size() < 2) throw NumericalError("fewer than two Ritz pairs near the level pair");
  std::vector<std::pair<double, cplx>> weight;
  for (const auto &r : ritz) weight.emplace_back((span_.adjoint() * r.vector).norm(), r.value);
  std::sort(weight.begin(), weight.end(), [](const auto &x, const auto &y) { return x.first > y.first; });
  cplx e1 = weight[0].second, e2 = weight[1].second;
  if (e1.real() > e2.real()) std::swap(e1, e2);
  return {e1, e2};
}

namespace {

struct Search {
  const PairEvaluator &pair;
  const LaserBox &box;
  int evaluations = 0;

  PairSample eval(double x, double y) {
    ++evaluations;
    return pair(box.at(x, y));
  }
};

struct SimplexData {
  Search *search;
};

double simplex_objective(const gsl_vector *v, void *params) {
  auto *s = static_cast<SimplexData *>(params)->search;
  const double x = gsl_vector_get(v, 0), y = gsl_vector_get(v, 1);
  // stay on the physical side of I = 0; small excursions past the box are allowed
  if (s->box.at(x, y).intensity_gw_cm2 < 0.0 || x < -0.5 || x > 1.5 || y > 1.5) return 1e300;
  return s->eval(x, y).gap();
}

TransectFit fit_transect(Search &s, double x0, double y0, double dx, double dy, const EpSearchOptions &opt) {
  TransectFit fit;
  for (int k = 0; k < opt.transect_points; ++k) {
    const double d = opt.transect_length * std::pow(0.5, k);
    fit.distances.push_back(d);
    fit.gaps.push_back(s.eval(x0 + d * dx, y0 + d * dy).gap());
  }
  // least squares slope of log gap against log distance
  const int n = opt.transect_points;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < n; ++k) {
    const double lx = std::log(fit.distances[k]), ly = std::log(std::max(fit.gaps[k], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - fit.exponent * sx) / n;
  double ss = 0.0;
  for (int k = 0; k < n; ++k) {
    const double e = std::log(std::max(fit.gaps[k], 1e-300)) - (icept + fit.exponent * std::log(fit.distances[k]));
    ss += e * e;
  }
  fit.rms_log_error = std::sqrt(ss / n);
  return fit;
}

} // namespace

EpEstimate locate_ep(const PairEvaluator &pair, const LaserBox &box, const EpSearchOptions &opt) {
  box.validate();
  if (opt.coarse_lambda < 2 || opt.coarse_intensity < 2) throw DomainError("coarse EP grid needs at least 2x2 points");
  Search s{pair, box};
  EpEstimate est;
  est.level_spacing = pair.level_spacing();
  const double tol = opt.gap_tolerance * est.level_spacing;

  // 1. coarse grid
  std::vector<double> lambdas, intensities;
  for (int i = 0; i < opt.coarse_lambda; ++i) lambdas.push_back(box.at(double(i) / (opt.coarse_lambda - 1), 0).wavelength_nm);
  for (int j = 0; j < opt.coarse_intensity; ++j)
    intensities.push_back(box.at(0, double(j) / (opt.coarse_intensity - 1)).intensity_gw_cm2);
  const GapFunction gap = [&pair](const LaserPoint &p) { return pair(p).gap(); };
  const Eigen::MatrixXd grid =
      opt.parallel ? scan_grid_parallel(gap, lambdas, intensities) : scan_grid_serial(gap, lambdas, intensities);
  s.evaluations += static_cast<int>(grid.size());
  Eigen::Index bi = 0, bj = 0;
  est.coarse_gap = grid.minCoeff(&bi, &bj);
  est.corner_gaps = {grid(0, 0), grid(grid.rows() - 1, 0), grid(0, grid.cols() - 1),
                     grid(grid.rows() - 1, grid.cols() - 1)};
  double x = double(bi) / (opt.coarse_lambda - 1);
  double y = double(bj) / (opt.coarse_intensity - 1);

  // 2. simplex
  {
    SimplexData data{&s};
    gsl_multimin_function fn{&simplex_objective, 2, &data};
    gsl_vector *start = gsl_vector_alloc(2);
    gsl_vector *step = gsl_vector_alloc(2);
    gsl_vector_set(start, 0, x);
    gsl_vector_set(start, 1, y);
    gsl_vector_set(step, 0, 0.5 / (opt.coarse_lambda - 1));
    gsl_vector_set(step, 1, 0.5 / (opt.coarse_intensity - 1));
    gsl_multimin_fminimizer *m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(m, &fn, start, step);
    for (int it = 0; it < opt.simplex_iterations; ++it) {
      if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
      if (m->fval < 1e-3 * tol || gsl_multimin_fminimizer_size(m) < 1e-13) break;
    }
    x = gsl_vector_get(m->x, 0);
    y = gsl_vector_get(m->x, 1);
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(start);
    gsl_vector_free(step);
  }

  // 3. Newton on Re/Im of the discriminant, which is analytic across the EP
  PairSample at = s.eval(x, y);
  const double h = 1e-6;
  for (int it = 0; it < opt.newton_iterations && at.gap() > 1e-3 * tol; ++it) {
    const cplx d0 = at.discriminant();
    const cplx dx = (s.eval(x + h, y).discriminant() - s.eval(x - h, y).discriminant()) / (2 * h);
    const cplx dy = (s.eval(x, y + h).discriminant() - s.eval(x, y - h).discriminant()) / (2 * h);
    Eigen::Matrix2d j;
    j << dx.real(), dy.real(), dx.imag(), dy.imag();
    const Eigen::Vector2d step = j.fullPivLu().solve(Eigen::Vector2d(-d0.real(), -d0.imag()));
    if (!step.allFinite()) break;
    const PairSample next = s.eval(x + step[0], y + step[1]);
    if (!(next.gap() < at.gap())) break;
    x += step[0];
    y += step[1];
    at = next;
    if (step.norm() < 1e-15) break;
  }

  est.point = box.at(x, y);
  est.energy = 0.5 * (at.first + at.second);
  est.residual_gap = at.gap();
  std::ostringstream msg;
  if (!box.contains(est.point)) {
    msg << "no EP in region: minimum left the box at (" << est.point.wavelength_nm << " nm, "
        << est.point.intensity_gw_cm2 << " GW/cm2)";
  } else if (est.residual_gap > tol) {
    msg << "no EP in region: achieved gap " << est.residual_gap << " hartree exceeds " << tol;
  } else {
    est.found = true;
  }

  if (est.found) {
    est.along_lambda = fit_transect(s, x, y, 1.0, 0.0, opt);
    est.along_intensity = fit_transect(s, x, y, 0.0, 1.0, opt);
    est.exponent = 0.5 * (est.along_lambda.exponent + est.along_intensity.exponent);
    est.confirmed = std::abs(est.along_lambda.exponent - 0.5) <= opt.exponent_tolerance &&
                    std::abs(est.along_intensity.exponent - 0.5) <= opt.exponent_tolerance;
    if (!est.confirmed) msg << "EP unconfirmed: square-root fit exponents " << est.along_lambda.exponent << ", "
                            << est.along_intensity.exponent;
  }
  est.evaluations = s.evaluations;
  est.diagnostic = msg.str();
  return est;
}

void LoopSpec::validate() const {
  if (!(lambda0_nm > 0.0)) throw DomainError("loop lambda0 must be positive");
  if (!(dlambda_nm >= 0.0) || !(dlambda_nm < lambda0_nm)) throw DomainError("loop dlambda must be in [0, lambda0)");
  if (!(intensity_max_gw_cm2 > 0.0)) throw DomainError("loop I_max must be positive");
  if (!(duration_fs > 0.0)) throw DomainError("loop duration must be positive");
  if (steps < 4) throw DomainError("loop needs at least 4 steps");
  if (!(floor_fraction > 0.0 && floor_fraction < 1.0)) throw DomainError("loop intensity floor must be in (0, 1)");
}

LaserPoint LoopSpec::at_phase(double phi) const {
  return {lambda0_nm + dlambda_nm * std::sin(phi), std::max(0.0, intensity_max_gw_cm2 * std::sin(0.5 * phi))};
}

double LoopSpec::duration_au() const { return fs_to_atomic_time(duration_fs); }

double LoopSpec::phase_at(double t) const {
  const double f = 2.0 * std::numbers::pi * t / duration_au();
  return direction == LoopDirection::forward ? f : 2.0 * std::numbers::pi - f;
}

double LoopSpec::time_at(double phi) const {
  const double f = phi / (2.0 * std::numbers::pi);
  return duration_au() * (direction == LoopDirection::forward ? f : 1.0 - f);
}

LoopPath generate_loop(const LoopSpec &spec) {
  spec.validate();
  LoopPath out;
  for (int k = 0; k <= spec.steps; ++k) {
    const double t = spec.duration_au() * k / spec.steps;
    out.times.push_back(t);
    out.path.samples.push_back(spec.phase_at(t));
  }
  out.path.at = [spec](double phi) { return spec.at_phase(phi); };
  return out;
}

bool encloses(const std::vector<LaserPoint> &loop, const LaserPoint &p) {
  bool inside = false;
  const std::size_t n = loop.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double xi = loop[i].wavelength_nm, yi = loop[i].intensity_gw_cm2;
    const double xj = loop[j].wavelength_nm, yj = loop[j].intensity_gw_cm2;
    if ((yi > p.intensity_gw_cm2) != (yj > p.intensity_gw_cm2) &&
        p.wavelength_nm < (xj - xi) * (p.intensity_gw_cm2 - yi) / (yj - yi) + xi)
      inside = !inside;
  }
  return inside;
}

bool encloses(const LoopSpec &spec, const LaserPoint &p, int polygon_points) {
  std::vector<LaserPoint> poly;
  for (int k = 0; k < polygon_points; ++k) poly.push_back(spec.at_phase(2.0 * std::numbers::pi * k / polygon_points));
  return encloses(poly, p);
}

std::vector<double> survival_probability(const std::vector<double> &times, const std::vector<double> &widths) {
  if (times.size() != widths.size()) throw DomainError("times and widths differ in length");
  std::vector<double> out;
  out.reserve(times.size());
  double integral = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (widths[k] < 0.0) throw NumericalError("negative resonance width at sample " + std::to_string(k));
    if (k > 0) {
      const double dt = times[k] - times[k - 1];
      if (dt < 0.0) throw DomainError("times must be non-decreasing");
      integral += 0.5 * dt * (widths[k] + widths[k - 1]);
    }
    out.push_back(std::exp(-integral));
  }
  return out;
}

SurvivalTrace follow_loop(const SpectralProblem &problem, const LoopSpec &spec, int start_label,
                          const LoopOptions &options) {
  const LoopPath loop = generate_loop(spec);
  TrackingOptions topt = options.tracking;
  topt.intensity_floor_gw_cm2 = spec.floor_fraction * spec.intensity_max_gw_cm2;

  SurvivalTrace trace;
  if (options.ep) trace.encloses_ep = encloses(spec, *options.ep);

  LaserPoint first = loop.path.at(loop.path.samples.front());
  first.intensity_gw_cm2 = std::max(first.intensity_gw_cm2, topt.intensity_floor_gw_cm2);
  const Eigenpair seed = seed_from_level(problem, first, start_label);

  const ResonanceBranch branch = track(problem, loop.path, seed, topt);
  trace.start_label = branch.start_label;
  trace.end_label = branch.end_label;
  trace.flagged_steps = branch.flagged_steps;
  trace.diagnostic = branch.diagnostic;
  if (!branch.points.empty())
    trace.end_overlap = assign_label(branch.points.back().vector, problem.references()).overlap;
  for (const auto &p : branch.points) {
    double w = p.width();
    if (w < -options.negative_width_tolerance) {
      std::ostringstream msg;
      msg << "resonance width " << w << " hartree at phase " << p.parameter << " is negative";
      throw NumericalError(msg.str());
    }
    trace.times.push_back(spec.time_at(p.parameter));
    trace.phases.push_back(p.parameter);
    trace.lasers.push_back(p.laser);
    trace.energies.push_back(p.energy);
    trace.widths.push_back(std::max(w, 0.0));
    trace.samples.push_back(p.sample);
  }
  trace.survival = survival_probability(trace.times, trace.widths);
  if (branch.broken) throw NumericalError("loop branch broke: " + branch.diagnostic);
  trace.exchange = trace.start_label && trace.end_label && *trace.start_label != *trace.end_label;
  return trace;
}

} // namespace floqep
