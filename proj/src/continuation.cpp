#include "floqep/continuation.hpp"

#include "floqep/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace floqep {

ParameterPath ParameterPath::through(std::vector<LaserPoint> points) {
  if (points.empty()) throw DomainError("path needs at least one point");
  ParameterPath p;
  for (std::size_t i = 0; i < points.size(); ++i) p.samples.push_back(static_cast<double>(i));
  p.at = [pts = std::move(points)](double s) {
    const double last = static_cast<double>(pts.size() - 1);
    s = std::clamp(s, 0.0, last);
    const auto i = static_cast<std::size_t>(std::min(std::floor(s), std::max(last - 1.0, 0.0)));
    if (pts.size() == 1) return pts[0];
    const double f = s - static_cast<double>(i);
    return LaserPoint{pts[i].wavelength_nm + f * (pts[i + 1].wavelength_nm - pts[i].wavelength_nm),
                      pts[i].intensity_gw_cm2 + f * (pts[i + 1].intensity_gw_cm2 - pts[i].intensity_gw_cm2)};
  };
  return p;
}

ParameterPath ParameterPath::intensity_sweep(double wavelength_nm, std::vector<double> intensities) {
  std::vector<LaserPoint> pts;
  for (double i : intensities) pts.push_back({wavelength_nm, i});
  return through(std::move(pts));
}

void ParameterPath::validate() const {
  if (!at) throw DomainError("path has no parameterization");
  if (samples.empty()) throw DomainError("path has no samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i] > samples[i - 1]) && !(samples[i] < samples[i - 1]))
      throw DomainError("consecutive path samples must differ");
}

std::vector<const BranchPoint *> ResonanceBranch::samples() const {
  std::vector<const BranchPoint *> out;
  for (const auto &p : points)
    if (p.sample) out.push_back(&p);
  return out;
}

namespace {

struct Tracker {
  const SpectralProblem &problem;
  const ParameterPath &path;
  const TrackingOptions &opt;
  ResonanceBranch &branch;
  int refinements = 0;       // bisections spent on the current sample interval
  int refinement_budget = 0;

  LaserPoint solve_point(double s) const {
    LaserPoint l = path.at(s);
    if (l.intensity_gw_cm2 < opt.intensity_floor_gw_cm2) l.intensity_gw_cm2 = opt.intensity_floor_gw_cm2;
    return l;
  }

  // Returns false when the branch broke.
  bool advance(double s0, double s1, int depth, bool sample_end) {
    const BranchPoint &cur = branch.points.back();
    const LaserPoint laser = solve_point(s1);
    const auto cands = problem.eigenpairs_near(laser, cur.energy, opt.candidates, {cur.vector});
    if (cands.empty()) {
      branch.broken = true;
      branch.diagnostic = "no eigenpairs returned";
      return false;
    }
    std::size_t best = 0;
    double ov_best = -1.0, ov_second = -1.0;
    for (std::size_t j = 0; j < cands.size(); ++j) {
      const double ov = hermitian_overlap(cur.vector, cands[j].vector);
      if (ov > ov_best) {
        ov_second = ov_best;
        ov_best = ov;
        best = j;
      } else if (ov > ov_second) {
        ov_second = ov;
      }
    }
    bool tie = ov_second >= 0.0 && (ov_best - ov_second) < opt.tie_margin * ov_best;
    if (tie) {
      // Near a coalescence both eigenvectors overlap the previous one almost
      // equally at every step size; the eigenvalue nearest the linear
      // extrapolation of the branch decides when it does so clearly.
      cplx predicted = cur.energy;
      if (branch.points.size() >= 2) {
        const BranchPoint &prev = branch.points[branch.points.size() - 2];
        predicted += (cur.energy - prev.energy) * ((s1 - cur.parameter) / (cur.parameter - prev.parameter));
      }
      std::size_t near = 0;
      double d_near = 1e300, d_far = 1e300;
      for (std::size_t j = 0; j < cands.size(); ++j) {
        if (hermitian_overlap(cur.vector, cands[j].vector) < (1.0 - opt.tie_margin) * ov_best) continue;
        const double d = std::abs(cands[j].value - predicted);
        if (d < d_near) {
          d_far = d_near;
          near = j;
          d_near = d;
        } else if (d < d_far) {
          d_far = d;
        }
      }
      if (d_near < 0.5 * d_far) {
        best = near;
        ov_best = hermitian_overlap(cur.vector, cands[near].vector);
        tie = false;
      }
    }
    const double jump = std::abs(cands[best].value - cur.energy);
    const bool ok = ov_best >= opt.min_overlap && jump <= opt.max_jump && !tie;

    if (!ok && depth < opt.max_depth && refinements < refinement_budget) {
      ++refinements;
      const double mid = 0.5 * (s0 + s1);
      return advance(s0, mid, depth + 1, false) && advance(mid, s1, depth + 1, sample_end);
    }
    if (!ok && ov_best < opt.min_overlap && !tie) {
      std::ostringstream msg;
      msg << "refinement exhausted between s=" << s0 << " and s=" << s1 << " (overlap " << ov_best
          << ", jump " << jump << ")";
      branch.broken = true;
      branch.diagnostic = msg.str();
      return false;
    }
    BranchPoint p;
    p.parameter = s1;
    p.laser = path.at(s1);
    p.energy = cands[best].value;
    p.vector = cands[best].vector;
    p.overlap = ov_best;
    p.sample = sample_end;
    p.flagged = !ok;
    if (p.flagged) ++branch.flagged_steps;
    branch.points.push_back(std::move(p));
    return true;
  }
};

} // namespace

Eigenpair seed_from_level(const SpectralProblem &problem, const LaserPoint &laser, int label) {
  const ReferenceState &ref = problem.reference(label);
  const auto cands = problem.eigenpairs_near(laser, ref.energy, 4, {ref.vector});
  const Eigenpair *seed = nullptr;
  double best = 0.0;
  for (const auto &c : cands) {
    const double ov = std::abs(c_product(ref.vector, c.vector));
    if (ov > best) {
      best = ov;
      seed = &c;
    }
  }
  if (!seed || best < 0.5)
    throw NumericalError("no resonance at " + std::to_string(laser.wavelength_nm) + " nm, " +
                         std::to_string(laser.intensity_gw_cm2) + " GW/cm2 overlaps level " + std::to_string(label));
  return *seed;
}

ResonanceBranch track(const SpectralProblem &problem, const ParameterPath &path, const Eigenpair &seed,
                      const TrackingOptions &options) {
  path.validate();
  ResonanceBranch branch;
  BranchPoint first;
  first.parameter = path.samples.front();
  first.laser = path.at(first.parameter);
  first.energy = seed.value;
  first.vector = seed.vector;
  first.sample = true;
  branch.points.push_back(first);
  branch.start_label = assign_label(seed.vector, problem.references()).label;

  Tracker t{problem, path, options, branch};
  t.refinement_budget = 8 * options.max_depth;
  for (std::size_t k = 1; k < path.samples.size(); ++k) {
    t.refinements = 0;
    if (!t.advance(path.samples[k - 1], path.samples[k], 0, true)) break;
  }
  if (!branch.broken) branch.end_label = assign_label(branch.points.back().vector, problem.references()).label;
  return branch;
}

std::string to_string(CrossingTopology t) {
  switch (t) {
  case CrossingTopology::energies_cross_widths_avoid: return "energies-cross-widths-avoid";
  case CrossingTopology::widths_cross_energies_avoid: return "widths-cross-energies-avoid";
  case CrossingTopology::coalescent: return "coalescent";
  case CrossingTopology::no_crossing: return "no-crossing";
  }
  return "no-crossing";
}

CrossingTopology classify_crossing(const ResonanceBranch &a, const ResonanceBranch &b, double degeneracy_tol) {
  if (a.broken || b.broken) throw NumericalError("cannot classify crossing of a broken branch");
  const auto sa = a.samples();
  const auto sb = b.samples();
  if (sa.size() != sb.size() || sa.size() < 2)
    throw DomainError("branches must share the same path samples");
  bool energy_sign_change = false, width_sign_change = false, degenerate = false;
  double prev_de = 0.0, prev_dg = 0.0;
  for (std::size_t k = 0; k < sa.size(); ++k) {
    if (sa[k]->parameter != sb[k]->parameter) throw DomainError("branches sampled at different parameters");
    const double de = sa[k]->energy.real() - sb[k]->energy.real();
    const double dg = sa[k]->width() - sb[k]->width();
    if (std::abs(de) < degeneracy_tol && std::abs(dg) < degeneracy_tol) degenerate = true;
    if (k > 0) {
      if (de * prev_de < 0.0) energy_sign_change = true;
      if (dg * prev_dg < 0.0) width_sign_change = true;
    }
    prev_de = de;
    prev_dg = dg;
  }
  if (degenerate || (energy_sign_change && width_sign_change)) return CrossingTopology::coalescent;
  if (energy_sign_change) return CrossingTopology::energies_cross_widths_avoid;
  if (width_sign_change) return CrossingTopology::widths_cross_energies_avoid;
  return CrossingTopology::no_crossing;
}

} // namespace floqep
