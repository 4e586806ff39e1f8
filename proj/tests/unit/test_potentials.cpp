#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "floqep/config.hpp"
#include "floqep/dvr.hpp"
#include "floqep/errors.hpp"
#include "floqep/potentials.hpp"

#include "../support/oracles.hpp"

using namespace floqep;

namespace {

const std::filesystem::path source_dir = FLOQEP_SOURCE_DIR;

MolecularModel shipped() { return load_model(source_dir / "data/na2_model.yaml").molecular; }

Eigen::VectorXd linspace(double a, double b, int n) { return Eigen::VectorXd::LinSpaced(n, a, b); }

} // namespace

TEST_CASE("Morse curve against its closed form") {
  const MolecularModel m = shipped();
  const PotentialCurve &u = m.u;
  CHECK(u(u.r_eq()) == oracle::rel(u.asymptote() - u.depth()).epsilon(1e-15));
  CHECK(std::abs(u(200.0) - u.asymptote()) < 1e-15);
  // the tail settles onto the declared asymptote
  CHECK(std::abs(u(100.0) - u.asymptote()) < 1e-10);
  CHECK(std::abs(m.g(100.0) - m.g.asymptote()) < 1e-10);
  for (double r = 5.0; r < 40.0; r += 0.37) {
    CHECK(u(r) == oracle::rel(oracle::morse(0.000792, 9.7, 0.397, 0.0, r)).epsilon(1e-13));
    CHECK(m.g(r) == oracle::rel(oracle::morse(0.002, 14.529070342215993, 0.4, 0.0773, r)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(u(0.0), DomainError);
  CHECK_THROWS_AS(u(-1.0), DomainError);
  // analytic continuation agrees on the real axis
  CHECK(std::abs(u(std::complex<double>(11.0, 1e-300)) - u(11.0)) < 1e-18);
}

TEST_CASE("extended Morse tail and tabulated curves") {
  const PotentialCurve e = PotentialCurve::extended_morse(0.001, 8.0, 0.5, 0.0, 1500.0, 2.0);
  const PotentialCurve p = PotentialCurve::morse(0.001, 8.0, 0.5, 0.0);
  for (double r : {6.0, 10.0, 20.0}) {
    const double f = std::pow(1.0 - std::exp(-r / 2.0), 6);
    CHECK(e(r) == oracle::rel(p(r) - 1500.0 * f / std::pow(r, 6)).epsilon(1e-14));
  }
  std::vector<double> r, v;
  for (int k = 0; k < 40; ++k) {
    r.push_back(3.0 + 0.5 * k);
    v.push_back(p(r.back()));
  }
  const PotentialCurve t = PotentialCurve::tabulated(r, v, 0.0);
  for (std::size_t k = 0; k < r.size() - 1; ++k) CHECK(t(r[k]) == oracle::rel(v[k]).epsilon(1e-14));
  CHECK(t(10.25) == oracle::rel(p(10.25)).epsilon(1e-3));
  CHECK(t(100.0) == 0.0);
  CHECK_THROWS_AS(t(1.0), DomainError);
  CHECK_THROWS_AS(PotentialCurve::tabulated({1.0, 2.0}, {0.0, 0.0}, 0.0), DomainError);
  CHECK_THROWS_AS(PotentialCurve::morse(-1.0, 8.0, 0.5, 0.0), DomainError);

  const DipoleFunction d = DipoleFunction::exponential(2.0, 3.0, 0.5, 10.0);
  CHECK(d(10.0) == oracle::rel(5.0));
  CHECK(d(14.0) == oracle::rel(2.0 + 3.0 * std::exp(-2.0)));
  CHECK(DipoleFunction::constant(10.37)(7.0) == 10.37);
}

TEST_CASE("dressed channels") {
  const MolecularModel m = shipped();
  const LaserPoint dark{562.53, 0.0};
  const DressedChannelPair off = dressed_channels(m, dark);
  for (double r = 5.0; r < 32.0; r += 0.5) {
    CHECK(off.coupling(r) == 0.0);
    CHECK(std::abs(off.vg(r) - (m.g(r) - oracle::photon_energy(562.53))) < 1e-11);
  }
  const DressedChannelPair one = dressed_channels(m, {562.53, 0.1});
  const DressedChannelPair four = dressed_channels(m, {562.53, 0.4});
  for (double r = 5.0; r < 32.0; r += 0.5) {
    CHECK(four.coupling(r) == oracle::rel(2.0 * one.coupling(r)).epsilon(1e-13));
    CHECK(one.coupling(r) == oracle::rel(-0.5 * oracle::field_from_intensity(1e8) * 10.37).epsilon(1e-8));
  }
}

TEST_CASE("one crossing on the outer limb across the operating window") {
  const MolecularModel m = shipped();
  for (double l = 555.0; l <= 570.0; l += 0.5) {
    const DressedChannelPair pair = dressed_channels(m, {l, 0.3});
    const auto x = find_crossings(pair, 5.0, 32.0);
    REQUIRE(x.size() == 1);
    CHECK(pair.vu(x[0]) == oracle::rel(pair.vg(x[0])).epsilon(1e-12));
  }
  // a 0.0808 hartree photon puts the crossing inside the u well, past R_e
  const DressedChannelPair pair = dressed_channels(m, {563.9, 0.0});
  const double rx = find_crossings(pair, 5.0, 32.0).at(0);
  CHECK(rx > m.u.r_eq());
  CHECK(pair.vu(rx) < m.u.asymptote());
}

TEST_CASE("adiabatic potentials") {
  const MolecularModel m = shipped();
  const Eigen::VectorXd r = linspace(5.0, 32.0, 2000);
  SUBCASE("zero field gives the pointwise min and max") {
    const SampledChannels ch = sample(dressed_channels(m, {562.53, 0.0}), r);
    const AdiabaticCurves a = adiabatic_potentials(ch);
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double scale = std::abs(ch.vu[i]) + std::abs(ch.vg[i]);
      CHECK(std::abs(a.lower[i] - std::min(ch.vu[i], ch.vg[i])) <= 4e-16 * scale);
      CHECK(std::abs(a.upper[i] - std::max(ch.vu[i], ch.vg[i])) <= 4e-16 * scale);
    }
  }
  SUBCASE("ordering and trace") {
    const SampledChannels ch = sample(dressed_channels(m, {562.53, 0.332}), r);
    const AdiabaticCurves a = adiabatic_potentials(ch);
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double scale = std::abs(ch.vu[i]) + std::abs(ch.vg[i]);
      CHECK(std::abs(a.upper[i] + a.lower[i] - ch.vu[i] - ch.vg[i]) <= 4e-16 * scale);
      CHECK(a.lower[i] < std::min(ch.vu[i], ch.vg[i]));
      CHECK(a.upper[i] > std::max(ch.vu[i], ch.vg[i]));
      CHECK(a.upper[i] >= a.lower[i]);
    }
  }
  SUBCASE("gap at the crossing is eps0 mu") {
    const LaserPoint display{563.903, 0.35};
    const DressedChannelPair pair = dressed_channels(m, display);
    const double rx = find_crossings(pair, 5.0, 32.0).at(0);
    const Eigen::VectorXd at = Eigen::VectorXd::Constant(1, rx);
    const AdiabaticCurves a = adiabatic_potentials(sample(pair, at));
    const double eps0 = oracle::field_from_intensity(0.35e9);
    CHECK(a.upper[0] - a.lower[0] == oracle::rel(eps0 * 10.37).epsilon(1e-8));
    CHECK(a.upper[0] - a.lower[0] == oracle::rel(2.0 * std::abs(pair.coupling(rx))).epsilon(1e-8));
  }
}

TEST_CASE("bound levels reproduce the Morse spectrum") {
  const MolecularModel m = shipped();
  const SineDvr grid(5.0, 32.0, 320);
  const auto levels = bound_levels(m.u, m.reduced_mass, 10, grid);
  REQUIRE(levels.size() == 10);
  for (const auto &l : levels) {
    const double exact = oracle::morse_level(0.000792, 0.397, 11.49488464 * oracle::me_per_da, 0.0, l.v);
    CHECK(l.energy == oracle::rel(exact).epsilon(1e-8));
    CHECK(l.nodes == l.v);
    CHECK(l.wavefunction.squaredNorm() == oracle::rel(1.0).epsilon(1e-10));
  }
  for (std::size_t v = 1; v < levels.size(); ++v) CHECK(levels[v].energy > levels[v - 1].energy);
  // low levels are nearly equally spaced, spacing shrinking by 2 w x_e per quantum
  const double w = 0.397 * std::sqrt(2.0 * 0.000792 / m.reduced_mass);
  const double wx = w * w / (4.0 * 0.000792);
  CHECK((levels[1].energy - levels[0].energy) - (levels[2].energy - levels[1].energy) ==
        oracle::rel(2.0 * wx).epsilon(1e-6));
}

TEST_CASE("bound levels converge under grid refinement") {
  const MolecularModel m = shipped();
  const auto coarse = bound_levels(m.u, m.reduced_mass, 12, SineDvr(5.0, 32.0, 320));
  const auto fine = bound_levels(m.u, m.reduced_mass, 12, SineDvr(5.0, 32.0, 641));
  for (std::size_t v = 0; v < coarse.size(); ++v) CHECK(std::abs(coarse[v].energy - fine[v].energy) < 1e-8);
}

TEST_CASE("too few bound levels is reported with the count found") {
  const MolecularModel m = shipped();
  const int available = oracle::morse_level_count(0.000792, 0.397, m.reduced_mass);
  CHECK(available == 15);
  try {
    bound_levels(m.u, m.reduced_mass, 40, SineDvr(5.0, 32.0, 320));
    FAIL("expected InsufficientLevels");
  } catch (const InsufficientLevels &e) {
    CHECK(e.requested() == 40);
    CHECK(e.found() >= 12);
    CHECK(e.found() <= available);
  }
}

TEST_CASE("shipped model calibration") {
  const MolecularModel m = shipped();
  const auto levels = bound_levels(m.u, m.reduced_mass, 12, SineDvr(5.0, 32.0, 320));
  CHECK(levels.size() >= 10);
  // vibrational time scale hbar / dE for the pair used in the loop
  const double t_fs = 1.0 / (levels[6].energy - levels[5].energy) * oracle::fs_per_au;
  CHECK(t_fs > 100.0);
  CHECK(t_fs < 1000.0);
}

TEST_CASE("node counter") {
  Eigen::VectorXd f(7);
  f << 0.0, 1.0, 0.5, -0.5, -1.0, 0.2, 0.0;
  CHECK(count_nodes(f) == 2);
}
