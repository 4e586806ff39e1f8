#pragma once

#include "floqep/dvr.hpp"
#include "floqep/eigensolve.hpp"
#include "floqep/potentials.hpp"

#include <optional>
#include <string>
#include <vector>

namespace floqep {

enum class Channel { u, g };

struct FloquetBlock {
  Channel channel;
  int photons; // Fourier index n
};

/// Range of Fourier indices kept in the Floquet ladder. Only the parity
/// class containing (u,0) and (g,-1) is assembled: u blocks with even n and
/// g blocks with odd n. The default keeps exactly those two blocks.
struct PhotonWindow {
  int lowest = -1;
  int highest = 0;

  std::vector<FloquetBlock> blocks() const;
};

/// Complex-symmetric Floquet Hamiltonian on a radial grid.
class FloquetOperator {
public:
  FloquetOperator(Eigen::MatrixXcd matrix, int channel_size, std::vector<FloquetBlock> blocks);

  const Eigen::MatrixXcd &matrix() const { return matrix_; }
  int channel_size() const { return channel_size_; }
  const std::vector<FloquetBlock> &blocks() const { return blocks_; }
  // Offset of a block in the state vector, or -1 when absent.
  Eigen::Index offset(Channel channel, int photons) const;

private:
  Eigen::MatrixXcd matrix_;
  int channel_size_;
  std::vector<FloquetBlock> blocks_;
};

/// Assemble [T + V_u + n w, W; W, T + V_g + n' w] over the photon window.
FloquetOperator build_operator(const DressedChannelPair &pair, const ScaledKinetic &kinetic,
                               const PhotonWindow &window = {});

enum class ResonanceCharacter { feshbach, shape, unassigned };
std::string to_string(ResonanceCharacter c);

struct Resonance {
  cplx energy;             // E_R - i Gamma_R / 2
  Eigen::VectorXcd vector; // c-normalized, diabatic block layout of the operator
  std::optional<int> label;
  double label_overlap = 0.0;
  ResonanceCharacter character = ResonanceCharacter::unassigned;

  double position() const { return energy.real(); }
  double width() const { return -2.0 * energy.imag(); }
};

/// Box in the complex energy plane (hartree): e_min <= Re E <= e_max and
/// 0 <= Gamma <= width_max.
struct EnergyWindow {
  double e_min = -1.0;
  double e_max = 0.0;
  double width_max = 1.0;

  bool contains(cplx e) const {
    return e.real() >= e_min && e.real() <= e_max && -2.0 * e.imag() <= width_max;
  }
};

struct SolveDiagnostics {
  int upper_half_plane = 0; // discarded eigenvalues with Im E > 0
  int outside_window = 0;
  int unstable = 0;         // failed the scaling-stability test
};

/// All eigenpairs of `op` inside `window` from a dense solve. Eigenvalues in
/// the upper half plane (beyond 1e-10 hartree) are dropped and counted.
std::vector<Resonance> solve_window(const FloquetOperator &op, const EnergyWindow &window,
                                    SolveDiagnostics *diagnostics = nullptr);

/// Label = argmax_v |<phi_v | u-channel part>| (c-product); "unassigned"
/// (nullopt) when the best overlap is below 0.5.
void assign_label(Resonance &res, const std::vector<VibLevel> &levels);

/// Rotate the eigenvector into the local adiabatic basis over the unscaled
/// part of the grid. Dominant V+ support -> Feshbach, dominant V- -> shape,
/// fractions within 10% of each other (or zero field) -> unassigned.
ResonanceCharacter classify_character(const Resonance &res, const AdiabaticCurves &adiabatic,
                                      double field, int channel_size, Eigen::Index unscaled_points);

} // namespace floqep
