#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "floqep/config.hpp"
#include "floqep/errors.hpp"
#include "floqep/units.hpp"

#include "../support/oracles.hpp"

#include <random>

using namespace floqep;

namespace {

const std::filesystem::path source_dir = FLOQEP_SOURCE_DIR;

std::string config_error_key(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const ConfigError &e) {
    return e.key();
  }
  return "<no error>";
}

YAML::Node minimal_run() {
  return YAML::Load("model: data/na2_model.yaml\n");
}

} // namespace

TEST_CASE("intensity to field amplitude") {
  CHECK(intensity_to_field(0.0) == 0.0);
  CHECK(intensity_to_field(constants::atomic_intensity_w_cm2) == oracle::rel(1.0).epsilon(1e-14));
  CHECK(constants::atomic_intensity_w_cm2 == oracle::rel(3.5094e16).epsilon(1e-4));
  // cycle-averaged intensity of a linearly polarized wave, from SI constants
  for (double i : {1e6, 3.32e8, 4e8, 1e12})
    CHECK(std::abs(intensity_to_field(i) / oracle::field_from_intensity(i) - 1.0) < 1e-12);
  CHECK(LaserPoint{562.53, 0.332}.field_amplitude() == oracle::rel(9.7263e-5).epsilon(1e-4));
  CHECK_THROWS_AS(intensity_to_field(-1.0), DomainError);
}

TEST_CASE("wavelength to photon energy") {
  CHECK(wavelength_to_photon_energy(45.56335252912) == oracle::rel(1.0).epsilon(1e-12));
  CHECK(wavelength_to_photon_energy(563.9) == oracle::rel(0.0808).epsilon(2e-4));
  CHECK(wavelength_to_photon_energy(562.53) == oracle::rel(0.08100).epsilon(5e-4));
  for (double l : {300.0, 562.53, 563.903, 800.0})
    CHECK(wavelength_to_photon_energy(l) == oracle::rel(oracle::photon_energy(l)).epsilon(1e-10));
  CHECK_THROWS_AS(wavelength_to_photon_energy(0.0), DomainError);
  CHECK_THROWS_AS(wavelength_to_photon_energy(-5.0), DomainError);
}

TEST_CASE("photon energy decreases strictly with wavelength") {
  double last = wavelength_to_photon_energy(100.0);
  for (double l = 100.5; l < 2000.0; l += 0.5) {
    const double e = wavelength_to_photon_energy(l);
    CHECK(e < last);
    last = e;
  }
}

TEST_CASE("unit round trips are identity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> exponent(-8.0, 8.0);
  for (int k = 0; k <= static_cast<int>(Unit::debye); ++k) {
    const Unit u = static_cast<Unit>(k);
    for (int i = 0; i < 50; ++i) {
      const double x = std::pow(10.0, exponent(rng));
      CHECK(from_atomic(to_atomic(x, u), u) == oracle::rel(x).epsilon(1e-12));
    }
    // the printed symbol parses back to the same unit
    CHECK(parse_unit(unit_symbol(u), dimension_of(u)) == u);
  }
  for (double l : {200.0, 562.53, 1064.0})
    CHECK(photon_energy_to_wavelength(wavelength_to_photon_energy(l)) == oracle::rel(l).epsilon(1e-12));
  for (double f : {1e-6, 1e-4, 0.3}) CHECK(intensity_to_field(field_to_intensity(f)) == oracle::rel(f).epsilon(1e-12));
}

TEST_CASE("lab unit conversions") {
  CHECK(to_atomic(1.0, Unit::wavenumber) == oracle::rel(1.0 / oracle::hartree_cm).epsilon(1e-14));
  CHECK(to_atomic(1.0, Unit::femtosecond) == oracle::rel(1.0 / oracle::fs_per_au).epsilon(1e-14));
  CHECK(to_atomic(1.0, Unit::dalton) == oracle::rel(oracle::me_per_da).epsilon(1e-14));
  CHECK(to_atomic(1.0, Unit::gigawatt_per_cm2) == oracle::rel(1e9 / (0.5 * oracle::c_si * oracle::eps0_si * oracle::field_au_si * oracle::field_au_si * 1e-4)).epsilon(1e-14));
}

TEST_CASE("quantities need a unit of the right dimension") {
  CHECK(parse_quantity("562.53 nm", Dimension::length).unit == Unit::nanometer);
  CHECK(parse_quantity(" 0.332 GW/cm2 ", Dimension::intensity).magnitude == 0.332);
  CHECK(parse_quantity("-200 cm-1", Dimension::energy).to_atomic() == oracle::rel(-200.0 / oracle::hartree_cm));
  CHECK(parse_quantity("10.37 au", Dimension::dipole).unit == Unit::dipole_au);
  CHECK(parse_quantity("1e-3 hartree", Dimension::energy).to_atomic() == 1e-3);
  CHECK_THROWS_AS(parse_quantity("562.53", Dimension::length), DomainError);
  CHECK_THROWS_AS(parse_quantity("562.53 fs", Dimension::length), DomainError);
  CHECK_THROWS_AS(parse_quantity("nm", Dimension::length), DomainError);
  CHECK_THROWS_AS(parse_quantity("5 parsecs", Dimension::length), DomainError);
}

TEST_CASE("laser point validation") {
  CHECK_NOTHROW(LaserPoint{562.53, 0.0}.validate());
  CHECK_THROWS_AS((LaserPoint{562.53, -0.1}.validate()), DomainError);
  CHECK_THROWS_AS((LaserPoint{0.0, 0.1}.validate()), DomainError);
}

TEST_CASE("shipped configuration loads with defaults resolved") {
  const RunConfig c = load_run_config(source_dir / "configs/na2.yaml");
  CHECK(c.model.kind == ModelKind::molecular);
  CHECK(c.model.molecular.reduced_mass == oracle::rel(11.49488464 * oracle::me_per_da));
  CHECK(c.grid.dvr.size() == 320);
  CHECK(c.grid.scaling.kind == ScalingKind::exterior);
  CHECK(c.grid.scaling.angle == oracle::rel(0.3));
  CHECK(c.laser.wavelength_nm == oracle::rel(562.53));
  CHECK(c.loop.spec.duration_fs == oracle::rel(1670.0));
  CHECK(c.loop.ep.has_value());
  CHECK(c.tdse.durations_fs.size() == 4);
  CHECK(c.tracking.min_overlap == 0.7);
  CHECK(c.tracking.max_depth == 12);

  const RunConfig t = load_run_config(source_dir / "configs/two_level.yaml");
  CHECK(t.model.kind == ModelKind::two_level);
  CHECK(t.model.two_level.width_b == oracle::rel(4e-5));
}

TEST_CASE("overrides apply after the model file is inlined") {
  const RunConfig c = load_run_config(source_dir / "configs/na2.yaml",
                                      {"laser.intensity=0.25 GW/cm2", "model.dipole.value=5 au", "grid.points=300",
                                       "loop.direction=reverse"});
  CHECK(c.laser.intensity_gw_cm2 == oracle::rel(0.25));
  CHECK(c.model.molecular.dipole(10.0) == oracle::rel(5.0));
  CHECK(c.grid.dvr.size() == 300);
  CHECK(c.loop.spec.direction == LoopDirection::reverse);
}

TEST_CASE("configuration errors name the offending key") {
  const auto file = source_dir / "configs/na2.yaml";
  CHECK(config_error_key([&] { load_run_config(file, {"laser.colour=red"}); }) == "laser.colour");
  CHECK(config_error_key([&] { load_run_config(file, {"laser.intensity=0.3"}); }) == "laser.intensity");
  CHECK(config_error_key([&] { load_run_config(file, {"laser.intensity=-0.3 GW/cm2"}); }) == "laser");
  CHECK(config_error_key([&] { load_run_config(file, {"grid.r_max=4 bohr"}); }) == "grid");
  CHECK(config_error_key([&] { load_run_config(file, {"model.reduced_mass=-3 Da"}); }) == "model.reduced_mass");
  CHECK(config_error_key([&] { load_run_config(file, {"model.u.depth=1 nm"}); }) == "model.u.depth");
  CHECK(config_error_key([&] { load_run_config(file, {"no_equals_sign"}); }) == "no_equals_sign");
  CHECK(config_error_key([&] { load_run_config(file, {"loop.direction=sideways"}); }) == "loop.direction");
  CHECK(config_error_key([&] { parse_run_config(YAML::Load("grid: {}"), source_dir); }) == "model");
  CHECK(config_error_key([&] { load_run_config(source_dir / "configs/missing.yaml"); }) == "");
}

TEST_CASE("effective configuration is a fixed point") {
  const RunConfig c = load_run_config(source_dir / "configs/na2.yaml");
  const std::string text = effective_config(c);
  const RunConfig again = parse_run_config(YAML::Load(text), source_dir);
  CHECK(effective_config(again) == text);

  const RunConfig t = load_run_config(source_dir / "configs/two_level.yaml");
  CHECK(effective_config(parse_run_config(YAML::Load(effective_config(t)), source_dir)) == effective_config(t));

  const RunConfig m = parse_run_config(minimal_run(), source_dir);
  CHECK(effective_config(parse_run_config(YAML::Load(effective_config(m)), source_dir)) == effective_config(m));
}
