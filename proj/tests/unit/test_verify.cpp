#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "floqep/config.hpp"
#include "floqep/errors.hpp"
#include "floqep/tdse.hpp"

#include "../support/oracles.hpp"

#include <numbers>

using namespace floqep;

namespace {

const std::filesystem::path source_dir = FLOQEP_SOURCE_DIR;

RunConfig shipped() { return load_run_config(source_dir / "configs/na2.yaml"); }

LoopSpec short_loop(double fs) {
  LoopSpec s = shipped().loop.spec;
  s.duration_fs = fs;
  return s;
}

TdseOptions reference_options() {
  const RunConfig c = shipped();
  TdseOptions o = c.tdse.options;
  return o;
}

} // namespace

TEST_CASE("pulse envelope and instantaneous frequency") {
  const LoopSpec s = short_loop(835.0);
  const PulseField f(s);
  CHECK(f.envelope(0.0) == 0.0);
  CHECK(f.envelope(f.duration()) == 0.0);
  CHECK(f.duration() == oracle::rel(835.0 / oracle::fs_per_au).epsilon(1e-14));
  const double peak = f.envelope(0.5 * f.duration());
  CHECK(peak == oracle::rel(oracle::field_from_intensity(0.4e9)).epsilon(1e-12));
  CHECK(f.phase(0.0) == 0.0);
  for (double x : {0.05, 0.2, 0.37, 0.5, 0.81, 0.97}) {
    const double t = x * f.duration();
    const double h = 1e-3 * f.duration() / 4096;
    const double numeric = (f.phase(t + h) - f.phase(t - h)) / (2.0 * h);
    const double omega = oracle::photon_energy(s.at_phase(s.phase_at(t)).wavelength_nm);
    CHECK(numeric == oracle::rel(omega).epsilon(1e-6));
    CHECK(f.frequency(t) == oracle::rel(omega).epsilon(1e-10));
    CHECK(f.field(t) == oracle::rel(f.envelope(t) * std::cos(f.phase(t))).epsilon(1e-14));
  }
  // a constant-wavelength loop accumulates a linear phase
  LoopSpec flat = s;
  flat.dlambda_nm = 0.0;
  const PulseField g(flat);
  const double w0 = oracle::photon_energy(flat.lambda0_nm);
  CHECK(g.phase(g.duration()) == oracle::rel(w0 * g.duration()).epsilon(1e-12));
}

TEST_CASE("field-free propagation keeps the level") {
  MolecularModel m = shipped().model.molecular;
  m.dipole = DipoleFunction::constant(0.0);
  const TdseResult r = propagate(m, short_loop(200.0), 6, reference_options());
  CHECK(std::abs(r.survival - 1.0) < 1e-8);
  CHECK(std::abs(r.populations.at(6) - 1.0) < 1e-8);
  for (const auto &[v, p] : r.populations)
    if (v != 6) CHECK(p < 1e-8);
  CHECK(r.final.absorbed < 1e-12);
  CHECK(r.final.g.norm() == 0.0);
}

TEST_CASE("norm bookkeeping and time step convergence") {
  const RunConfig c = shipped();
  const LoopSpec s = short_loop(417.5);
  TdseOptions o = reference_options();
  const TdseResult coarse = propagate(c.model.molecular, s, 6, o);
  CHECK(coarse.max_norm_error < 1e-6);
  CHECK(coarse.final.total() == oracle::rel(1.0).epsilon(1e-6));
  CHECK(coarse.survival < 1.0);
  CHECK(coarse.survival > 0.0);
  CHECK(coarse.survival <= coarse.final.bound_norm());
  double pops = 0.0;
  for (const auto &[v, p] : coarse.populations) pops += p;
  CHECK(pops <= coarse.survival + 1e-12);

  o.steps_per_cycle *= 2.0;
  const TdseResult fine = propagate(c.model.molecular, s, 6, o);
  CHECK(fine.dt == oracle::rel(0.5 * coarse.dt).epsilon(1e-3));
  CHECK(std::abs(fine.survival - coarse.survival) < 1e-4);

  o = reference_options();
  o.parallel = true;
  const TdseResult par = propagate(c.model.molecular, s, 6, o);
  CHECK(std::abs(par.survival - coarse.survival) < 1e-12);
}

TEST_CASE("rotating frame agrees with the full carrier") {
  const RunConfig c = shipped();
  const LoopSpec s = short_loop(417.5);
  TdseOptions o = reference_options();
  const TdseResult rwa = propagate(c.model.molecular, s, 6, o);
  o.mode = Propagation::carrier;
  const TdseResult full = propagate(c.model.molecular, s, 6, o);
  CHECK(std::abs(rwa.survival - full.survival) < 0.01 * full.survival);
}

TEST_CASE("fast loops do not give a clean exchange") {
  const RunConfig c = shipped();
  const MolecularModel &m = c.model.molecular;
  const auto lv = bound_levels(m.u, m.reduced_mass, 12, SineDvr(5.0, 32.0, 320));
  const double transition_fs = atomic_time_to_fs(1.0 / (lv[6].energy - lv[5].energy));

  // sudden: the packet never leaves the start level
  const TdseResult sudden = propagate(m, short_loop(0.2 * transition_fs), 6, reference_options());
  CHECK(sudden.populations.at(5) < 0.01);
  CHECK(sudden.populations.at(6) > 0.8);

  // comparable to the vibrational period: spread over several levels
  const TdseResult fast = propagate(m, short_loop(transition_fs), 6, reference_options());
  int occupied = 0;
  for (const auto &[v, p] : fast.populations)
    if (v != 6 && p > 0.02) ++occupied;
  CHECK(occupied >= 2);
  CHECK(fast.populations.at(5) < 0.5 * fast.survival);
}

TEST_CASE("propagation preconditions") {
  const RunConfig c = shipped();
  TdseOptions o = reference_options();
  o.steps_per_cycle = 10.0;
  CHECK_THROWS_AS(propagate(c.model.molecular, short_loop(100.0), 6, o), DomainError);
  o = reference_options();
  CHECK_THROWS_AS(propagate(c.model.molecular, short_loop(100.0), 40, o), DomainError);
  o.grid.bound_radius = 35.0;
  CHECK_THROWS_AS(propagate(c.model.molecular, short_loop(100.0), 6, o), DomainError);
  o = reference_options();
  o.norm_tolerance = 1e-18;
  CHECK_THROWS_AS(propagate(c.model.molecular, short_loop(100.0), 6, o), NumericalError);
}
