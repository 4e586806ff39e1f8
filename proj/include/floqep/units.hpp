#pragma once

#include <string>
#include <string_view>

namespace floqep {

// CODATA 2018 values (NIST SP 961, https://physics.nist.gov/cuu/Constants).
namespace constants {
inline constexpr double hartree_in_wavenumber = 219474.6313632;   // cm^-1
inline constexpr double hartree_in_ev = 27.211386245988;
inline constexpr double bohr_in_angstrom = 0.529177210903;
inline constexpr double atomic_time_in_fs = 2.4188843265857e-2;
inline constexpr double hartree_wavelength_nm = 1e7 / hartree_in_wavenumber; // hc / E_h
inline constexpr double speed_of_light = 299792458.0;               // m/s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;    // F/m
inline constexpr double atomic_field_v_per_m = 5.14220674763e11;
// cycle-averaged intensity c eps0 E^2 / 2 of a unit atomic field, W/cm^2
inline constexpr double atomic_intensity_w_cm2 =
    0.5 * speed_of_light * vacuum_permittivity * atomic_field_v_per_m * atomic_field_v_per_m * 1e-4;
inline constexpr double dalton_in_me = 1822.888486209;
inline constexpr double atomic_dipole_in_debye = 2.541746473;
inline constexpr double sodium23_mass_da = 22.9897692820;
} // namespace constants

enum class Dimension { length, inverse_length, energy, intensity, time, field, mass, angle, dipole };

enum class Unit {
  bohr,
  angstrom,
  nanometer,
  inverse_bohr,
  inverse_angstrom,
  hartree,
  wavenumber,
  electronvolt,
  watt_per_cm2,
  gigawatt_per_cm2,
  intensity_au,
  atomic_time,
  femtosecond,
  picosecond,
  field_au,
  volt_per_meter,
  electron_mass,
  dalton,
  radian,
  degree,
  dipole_au,
  debye,
};

Dimension dimension_of(Unit unit);
std::string_view unit_symbol(Unit unit);

// Accepts the symbols printed by unit_symbol plus a few spellings
// ("cm-1", "cm^-1", "GW/cm2", "au", "a.u." resolved against `hint`).
Unit parse_unit(std::string_view text, Dimension hint);

struct UnitValue {
  double magnitude = 0.0;
  Unit unit = Unit::hartree;

  double to_atomic() const;
  static UnitValue from_atomic(double value, Unit unit);
};

// "562.53 nm" -> UnitValue. The unit suffix is mandatory and must match `expected`.
UnitValue parse_quantity(std::string_view text, Dimension expected);

double to_atomic(double magnitude, Unit unit);
double from_atomic(double value, Unit unit);

inline double wavenumber_to_hartree(double cm) { return cm / constants::hartree_in_wavenumber; }
inline double hartree_to_wavenumber(double e) { return e * constants::hartree_in_wavenumber; }
inline double fs_to_atomic_time(double fs) { return fs / constants::atomic_time_in_fs; }
inline double atomic_time_to_fs(double t) { return t * constants::atomic_time_in_fs; }

// Peak field amplitude (a.u.) for a cycle-averaged intensity in W/cm^2.
double intensity_to_field(double intensity_w_cm2);
// Inverse of intensity_to_field, result in W/cm^2.
double field_to_intensity(double field_au);
// Photon energy (hartree) for a vacuum wavelength in nm.
double wavelength_to_photon_energy(double wavelength_nm);
double photon_energy_to_wavelength(double energy_au);

// One point of the (wavelength, intensity) control plane, in lab units.
struct LaserPoint {
  double wavelength_nm = 0.0;
  double intensity_gw_cm2 = 0.0;

  double photon_energy() const { return wavelength_to_photon_energy(wavelength_nm); }
  double field_amplitude() const { return intensity_to_field(intensity_gw_cm2 * 1e9); }
  void validate() const;

  friend bool operator==(const LaserPoint &, const LaserPoint &) = default;
};

} // namespace floqep
