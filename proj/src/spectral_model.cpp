#include "floqep/spectral_model.hpp"

#include "floqep/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace floqep {

const ReferenceState &SpectralProblem::reference(int label) const {
  for (const auto &r : references())
    if (r.label == label) return r;
  throw DomainError("no reference state with label " + std::to_string(label));
}

double SpectralProblem::level_spacing(int label) const {
  return std::abs(reference(label + 1).energy - reference(label).energy);
}

LabelAssignment assign_label(const Eigen::VectorXcd &vector, const std::vector<ReferenceState> &refs,
                             double threshold) {
  LabelAssignment out;
  int best_label = -1;
  // c-normalized vectors grow without bound near an EP, so divide by the 2-norm
  const double norm = vector.norm();
  if (norm == 0.0) return out;
  for (const auto &ref : refs) {
    const double ov = std::abs(c_product(ref.vector, vector)) / norm;
    if (ov > out.overlap) {
      out.overlap = ov;
      best_label = ref.label;
    }
  }
  if (out.overlap >= threshold) out.label = best_label;
  return out;
}

MolecularFloquetProblem::MolecularFloquetProblem(MolecularModel model, FloquetSettings settings)
    : model_(std::move(model)), settings_(std::move(settings)),
      kinetic_(settings_.grid, model_.reduced_mass) {
  model_.validate();
  levels_ = bound_levels(model_.u, model_.reduced_mass, settings_.reference_levels, settings_.grid.dvr);
  const Eigen::Index dim =
      static_cast<Eigen::Index>(settings_.grid.dvr.size()) * static_cast<Eigen::Index>(settings_.photons.blocks().size());
  // (u,0) is the first block of every photon window layout
  const Eigen::Index u0 = [&] {
    const auto blocks = settings_.photons.blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (blocks[b].channel == Channel::u && blocks[b].photons == 0)
        return static_cast<Eigen::Index>(b) * settings_.grid.dvr.size();
    return Eigen::Index{0};
  }();
  for (const VibLevel &lvl : levels_) {
    ReferenceState ref;
    ref.label = lvl.v;
    ref.energy = lvl.energy;
    ref.vector = Eigen::VectorXcd::Zero(dim);
    ref.vector.segment(u0, lvl.wavefunction.size()) = lvl.wavefunction.cast<cplx>();
    references_.push_back(std::move(ref));
  }
}

Eigen::Index MolecularFloquetProblem::unscaled_points() const {
  const ScalingSpec &sc = settings_.grid.scaling;
  const Eigen::VectorXd &r = settings_.grid.dvr.nodes();
  if (!sc.active()) return r.size();
  Eigen::Index m = 0;
  while (m < r.size() && r[m] <= sc.onset) ++m;
  return m;
}

FloquetOperator MolecularFloquetProblem::operator_at(const LaserPoint &laser) const {
  return operator_at(laser, kinetic_);
}

FloquetOperator MolecularFloquetProblem::operator_at(const LaserPoint &laser, const ScaledKinetic &kinetic) const {
  return build_operator(dressed_channels(model_, laser), kinetic, settings_.photons);
}

std::vector<Eigenpair> MolecularFloquetProblem::eigenpairs_near(const LaserPoint &laser, cplx target, int count,
                                                                const std::vector<Eigen::VectorXcd> &guesses) const {
  const Eigen::MatrixXcd a = operator_at(laser).matrix();
  const double tol = 1e-10 * a.cwiseAbs().maxCoeff();
  std::vector<Eigenpair> out;
  // candidates mixed into the rotated continuum converge slowly; keep only the settled ones
  for (const auto &r : ritz_refine(a, target, count, guesses, 100, 1e-13)) {
    if (r.residual > tol) continue;
    Eigenpair p{r.value, r.vector};
    c_normalize(p.vector);
    out.push_back(std::move(p));
  }
  if (out.empty()) {
    std::ostringstream msg;
    msg << "no converged eigenpair near " << target << " at " << laser.wavelength_nm << " nm, "
        << laser.intensity_gw_cm2 << " GW/cm2";
    throw NumericalError(msg.str());
  }
  return out;
}

void MolecularFloquetProblem::annotate(Resonance &res, const LaserPoint &laser) const {
  const auto la = floqep::assign_label(res.vector, references_);
  res.label = la.label;
  res.label_overlap = la.overlap;
  const SampledChannels ch = sample(dressed_channels(model_, laser), settings_.grid.dvr.nodes());
  res.character = classify_character(res, adiabatic_potentials(ch), laser.field_amplitude(),
                                     settings_.grid.dvr.size(), unscaled_points());
}

std::vector<Resonance> MolecularFloquetProblem::solve_resonances(const LaserPoint &laser, const EnergyWindow &window,
                                                                 double stability_tol,
                                                                 SolveDiagnostics *diagnostics) const {
  const ScalingSpec &sc = settings_.grid.scaling;
  if (!sc.active()) throw DomainError("resonance search needs complex scaling or an absorbing potential");
  SolveDiagnostics diag;
  std::vector<Resonance> found = solve_window(operator_at(laser), window, &diag);

  std::vector<Eigen::VectorXcd> alternates;
  for (double factor : {0.8, 1.2}) {
    RadialGrid g = settings_.grid;
    if (sc.kind == ScalingKind::exterior)
      g.scaling.angle *= factor;
    else
      g.scaling.cap_strength *= factor;
    const ScaledKinetic alt(g, model_.reduced_mass);
    alternates.push_back(dense_eigensystem(operator_at(laser, alt).matrix(), false).values);
  }

  std::vector<Resonance> stable;
  for (Resonance &r : found) {
    bool ok = true;
    for (const auto &vals : alternates) {
      const double nearest = (vals.array() - r.energy).abs().minCoeff();
      if (nearest > stability_tol) ok = false;
    }
    if (!ok) {
      ++diag.unstable;
      continue;
    }
    annotate(r, laser);
    stable.push_back(std::move(r));
  }
  if (diagnostics) *diagnostics = diag;
  return stable;
}

} // namespace floqep
