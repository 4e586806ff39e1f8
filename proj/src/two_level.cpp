#include "floqep/two_level.hpp"

#include "floqep/errors.hpp"

#include <algorithm>
#include <cmath>

namespace floqep {

TwoLevelModel::TwoLevelModel(TwoLevelParameters p) : p_(p) {
  if (p_.width_a < 0.0 || p_.width_b < 0.0) throw DomainError("two-level widths must be non-negative");
  if (p_.width_a == p_.width_b) throw DomainError("two-level widths must differ to produce an EP");
  if (!(p_.dipole > 0.0)) throw DomainError("two-level dipole must be positive");
  if (!(p_.energy_b > p_.energy_a)) throw DomainError("two-level model needs E_b > E_a");
  ReferenceState a{p_.label_a, p_.energy_a, Eigen::VectorXcd::Zero(2)};
  a.vector[0] = 1.0;
  ReferenceState b{p_.label_b, p_.energy_b, Eigen::VectorXcd::Zero(2)};
  b.vector[1] = 1.0;
  references_ = {a, b};
  std::sort(references_.begin(), references_.end(),
            [](const ReferenceState &x, const ReferenceState &y) { return x.label < y.label; });
}

Eigen::Matrix2cd TwoLevelModel::hamiltonian(const LaserPoint &laser) const {
  const double w = laser.photon_energy();
  const double c = -0.5 * laser.field_amplitude() * p_.dipole;
  Eigen::Matrix2cd h;
  h << cplx(p_.energy_a, -0.5 * p_.width_a), c, c, cplx(p_.energy_b - w, -0.5 * p_.width_b);
  return h;
}

std::array<cplx, 2> TwoLevelModel::eigenvalues(const LaserPoint &laser) const {
  const Eigen::Matrix2cd h = hamiltonian(laser);
  const cplx mean = 0.5 * (h(0, 0) + h(1, 1));
  const cplx half = 0.5 * (h(0, 0) - h(1, 1));
  const cplx root = std::sqrt(half * half + h(0, 1) * h(1, 0));
  return {mean + root, mean - root};
}

LaserPoint TwoLevelModel::exceptional_point() const {
  const double w = p_.energy_b - p_.energy_a;
  const double field = std::abs(p_.width_a - p_.width_b) / (2.0 * p_.dipole);
  return {photon_energy_to_wavelength(w), field_to_intensity(field) * 1e-9};
}

std::vector<Eigenpair> TwoLevelModel::eigenpairs_near(const LaserPoint &laser, cplx target, int count,
                                                      const std::vector<Eigen::VectorXcd> &) const {
  const Eigen::Matrix2cd h = hamiltonian(laser);
  const auto values = eigenvalues(laser);
  std::vector<Eigenpair> out;
  for (const cplx &e : values) {
    // (H - e) v = 0 from whichever row is better conditioned
    Eigen::VectorXcd v(2);
    if (std::abs(h(0, 1)) > 0.0 || std::abs(h(1, 0)) > 0.0) {
      if (std::abs(h(0, 0) - e) > std::abs(h(1, 1) - e))
        v << -h(0, 1), h(0, 0) - e;
      else
        v << h(1, 1) - e, -h(1, 0);
    } else {
      // diagonal: pick the basis vector belonging to this eigenvalue
      if (std::abs(h(0, 0) - e) <= std::abs(h(1, 1) - e))
        v << 1.0, 0.0;
      else
        v << 0.0, 1.0;
    }
    if (v.norm() == 0.0) v << 1.0, 0.0;
    c_normalize(v);
    out.push_back({e, v});
  }
  std::sort(out.begin(), out.end(), [&](const Eigenpair &a, const Eigenpair &b) {
    return std::abs(a.value - target) < std::abs(b.value - target);
  });
  if (count < static_cast<int>(out.size())) out.resize(std::max(count, 0));
  return out;
}

} // namespace floqep
