#include "floqep/floquet.hpp"

#include "floqep/errors.hpp"

#include <algorithm>
#include <cmath>

namespace floqep {

std::vector<FloquetBlock> PhotonWindow::blocks() const {
  if (lowest > -1 || highest < 0) throw DomainError("photon window must contain n = -1 and n = 0");
  std::vector<FloquetBlock> out;
  for (int n = lowest; n <= highest; ++n)
    if (n % 2 == 0) out.push_back({Channel::u, n});
  for (int n = lowest; n <= highest; ++n)
    if (n % 2 != 0) out.push_back({Channel::g, n});
  return out;
}

FloquetOperator::FloquetOperator(Eigen::MatrixXcd matrix, int channel_size, std::vector<FloquetBlock> blocks)
    : matrix_(std::move(matrix)), channel_size_(channel_size), blocks_(std::move(blocks)) {
  if (matrix_.rows() != matrix_.cols() ||
      matrix_.rows() != static_cast<Eigen::Index>(channel_size_) * static_cast<Eigen::Index>(blocks_.size()))
    throw DomainError("Floquet operator dimensions are inconsistent with its block layout");
}

Eigen::Index FloquetOperator::offset(Channel channel, int photons) const {
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    if (blocks_[b].channel == channel && blocks_[b].photons == photons)
      return static_cast<Eigen::Index>(b) * channel_size_;
  return -1;
}

FloquetOperator build_operator(const DressedChannelPair &pair, const ScaledKinetic &kinetic,
                               const PhotonWindow &window) {
  const std::vector<FloquetBlock> blocks = window.blocks();
  const int n = kinetic.grid().dvr.size();
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * static_cast<Eigen::Index>(blocks.size());
  const Eigen::VectorXcd &z = kinetic.coordinates();
  const double w = pair.photon_energy();
  const MolecularModel &model = pair.model();

  Eigen::VectorXcd vu(n), vg(n), coupling(n);
  for (int i = 0; i < n; ++i) {
    vu[i] = model.u(z[i]);
    vg[i] = model.g(z[i]);
    coupling[i] = pair.coupling(z[i]);
  }

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Eigen::Index o = static_cast<Eigen::Index>(b) * n;
    h.block(o, o, n, n) = kinetic.matrix();
    const Eigen::VectorXcd &v = blocks[b].channel == Channel::u ? vu : vg;
    h.diagonal().segment(o, n) += v + kinetic.absorber();
    h.diagonal().segment(o, n).array() += static_cast<double>(blocks[b].photons) * w;
  }
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    if (blocks[a].channel != Channel::u) continue;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].channel != Channel::g || std::abs(blocks[b].photons - blocks[a].photons) != 1) continue;
      const Eigen::Index oa = static_cast<Eigen::Index>(a) * n;
      const Eigen::Index ob = static_cast<Eigen::Index>(b) * n;
      for (int i = 0; i < n; ++i) {
        h(oa + i, ob + i) = coupling[i];
        h(ob + i, oa + i) = coupling[i];
      }
    }
  }
  return FloquetOperator(std::move(h), n, blocks);
}

std::string to_string(ResonanceCharacter c) {
  switch (c) {
  case ResonanceCharacter::feshbach: return "feshbach";
  case ResonanceCharacter::shape: return "shape";
  case ResonanceCharacter::unassigned: return "unassigned";
  }
  return "unassigned";
}

std::vector<Resonance> solve_window(const FloquetOperator &op, const EnergyWindow &window,
                                    SolveDiagnostics *diagnostics) {
  const DenseSpectrum spec = dense_eigensystem(op.matrix(), true);
  SolveDiagnostics diag;
  std::vector<Resonance> out;
  for (Eigen::Index k = 0; k < spec.values.size(); ++k) {
    const cplx e = spec.values[k];
    if (e.imag() > 1e-10) {
      ++diag.upper_half_plane;
      continue;
    }
    if (!window.contains(e)) {
      ++diag.outside_window;
      continue;
    }
    Resonance r;
    r.energy = e;
    r.vector = spec.vectors.col(k);
    c_normalize(r.vector);
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const Resonance &a, const Resonance &b) {
    return a.energy.real() < b.energy.real();
  });
  if (diagnostics) *diagnostics = diag;
  return out;
}

void assign_label(Resonance &res, const std::vector<VibLevel> &levels) {
  res.label.reset();
  res.label_overlap = 0.0;
  double best = 0.0;
  int best_v = -1;
  const double norm = res.vector.norm();
  if (norm == 0.0) return;
  for (const VibLevel &lvl : levels) {
    const Eigen::Index n = lvl.wavefunction.size();
    if (res.vector.size() < n) throw DomainError("resonance vector shorter than the level grid");
    const double ov = std::abs((res.vector.head(n).array() * lvl.wavefunction.array()).sum()) / norm;
    if (ov > best) {
      best = ov;
      best_v = lvl.v;
    }
  }
  res.label_overlap = best;
  if (best >= 0.5) res.label = best_v;
}

ResonanceCharacter classify_character(const Resonance &res, const AdiabaticCurves &adiabatic, double field,
                                      int channel_size, Eigen::Index unscaled_points) {
  if (field == 0.0) return ResonanceCharacter::unassigned;
  const Eigen::Index m = std::min<Eigen::Index>(unscaled_points, adiabatic.angle.size());
  double lower = 0.0, upper = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const cplx cu = res.vector[i];
    const cplx cg = res.vector[channel_size + i];
    const double c = std::cos(adiabatic.angle[i]);
    const double s = std::sin(adiabatic.angle[i]);
    lower += std::norm(c * cu + s * cg);
    upper += std::norm(-s * cu + c * cg);
  }
  const double total = lower + upper;
  if (total == 0.0) return ResonanceCharacter::unassigned;
  const double fu = upper / total, fl = lower / total;
  if (std::abs(fu - fl) < 0.1) return ResonanceCharacter::unassigned;
  return fu > fl ? ResonanceCharacter::feshbach : ResonanceCharacter::shape;
}

} // namespace floqep
