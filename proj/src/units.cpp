#include "floqep/units.hpp"

#include "floqep/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace floqep {

namespace {

struct UnitInfo {
  Unit unit;
  Dimension dimension;
  std::string_view symbol;
  double atomic_per_unit; // value in a.u. of one `unit`
};

// Wavelength and energy are both "scale" units: 1 nm is a length, not an energy.
constexpr double kNmInBohr = 10.0 / constants::bohr_in_angstrom;

const std::array<UnitInfo, 22> &unit_table() {
  static const std::array<UnitInfo, 22> table{{
      {Unit::bohr, Dimension::length, "bohr", 1.0},
      {Unit::angstrom, Dimension::length, "angstrom", 1.0 / constants::bohr_in_angstrom},
      {Unit::nanometer, Dimension::length, "nm", kNmInBohr},
      {Unit::inverse_bohr, Dimension::inverse_length, "1/bohr", 1.0},
      {Unit::inverse_angstrom, Dimension::inverse_length, "1/angstrom", constants::bohr_in_angstrom},
      {Unit::hartree, Dimension::energy, "hartree", 1.0},
      {Unit::wavenumber, Dimension::energy, "cm-1", 1.0 / constants::hartree_in_wavenumber},
      {Unit::electronvolt, Dimension::energy, "eV", 1.0 / constants::hartree_in_ev},
      {Unit::watt_per_cm2, Dimension::intensity, "W/cm2", 1.0 / constants::atomic_intensity_w_cm2},
      {Unit::gigawatt_per_cm2, Dimension::intensity, "GW/cm2", 1e9 / constants::atomic_intensity_w_cm2},
      {Unit::intensity_au, Dimension::intensity, "au_intensity", 1.0},
      {Unit::atomic_time, Dimension::time, "au_time", 1.0},
      {Unit::femtosecond, Dimension::time, "fs", 1.0 / constants::atomic_time_in_fs},
      {Unit::picosecond, Dimension::time, "ps", 1e3 / constants::atomic_time_in_fs},
      {Unit::field_au, Dimension::field, "au_field", 1.0},
      {Unit::volt_per_meter, Dimension::field, "V/m", 1.0 / constants::atomic_field_v_per_m},
      {Unit::electron_mass, Dimension::mass, "me", 1.0},
      {Unit::dalton, Dimension::mass, "Da", constants::dalton_in_me},
      {Unit::radian, Dimension::angle, "rad", 1.0},
      {Unit::degree, Dimension::angle, "deg", 3.14159265358979323846 / 180.0},
      {Unit::dipole_au, Dimension::dipole, "au_dipole", 1.0},
      {Unit::debye, Dimension::dipole, "D", 1.0 / constants::atomic_dipole_in_debye},
  }};
  return table;
}

const UnitInfo &info(Unit unit) {
  for (const auto &entry : unit_table())
    if (entry.unit == unit) return entry;
  throw std::logic_error("unit missing from table");
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

} // namespace

Dimension dimension_of(Unit unit) { return info(unit).dimension; }

std::string_view unit_symbol(Unit unit) { return info(unit).symbol; }

Unit parse_unit(std::string_view text, Dimension hint) {
  const std::string key = lower(trim(text));
  if (key == "au" || key == "a.u.") {
    switch (hint) {
    case Dimension::length: return Unit::bohr;
    case Dimension::inverse_length: return Unit::inverse_bohr;
    case Dimension::energy: return Unit::hartree;
    case Dimension::intensity: return Unit::intensity_au;
    case Dimension::time: return Unit::atomic_time;
    case Dimension::field: return Unit::field_au;
    case Dimension::mass: return Unit::electron_mass;
    case Dimension::dipole: return Unit::dipole_au;
    case Dimension::angle: return Unit::radian;
    }
  }
  static const std::array<std::pair<std::string_view, Unit>, 14> aliases{{
      {"a0", Unit::bohr},
      {"a", Unit::angstrom},
      {"1/a0", Unit::inverse_bohr},
      {"1/a", Unit::inverse_angstrom},
      {"ha", Unit::hartree},
      {"eh", Unit::hartree},
      {"cm^-1", Unit::wavenumber},
      {"1/cm", Unit::wavenumber},
      {"w/cm^2", Unit::watt_per_cm2},
      {"gw/cm^2", Unit::gigawatt_per_cm2},
      {"amu", Unit::dalton},
      {"u", Unit::dalton},
      {"radian", Unit::radian},
      {"debye", Unit::debye},
  }};
  for (const auto &[alias, unit] : aliases)
    if (key == alias) return unit;
  for (const auto &entry : unit_table())
    if (key == lower(entry.symbol)) return entry.unit;
  throw DomainError("unknown unit '" + std::string(text) + "'");
}

double UnitValue::to_atomic() const { return magnitude * info(unit).atomic_per_unit; }

UnitValue UnitValue::from_atomic(double value, Unit unit) {
  return {value / info(unit).atomic_per_unit, unit};
}

double to_atomic(double magnitude, Unit unit) { return UnitValue{magnitude, unit}.to_atomic(); }
double from_atomic(double value, Unit unit) { return UnitValue::from_atomic(value, unit).magnitude; }

UnitValue parse_quantity(std::string_view text, Dimension expected) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{}) throw DomainError("cannot parse quantity '" + std::string(text) + "'");
  const std::string_view suffix = trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)));
  if (suffix.empty())
    throw DomainError("quantity '" + std::string(text) + "' has no unit suffix");
  const Unit unit = parse_unit(suffix, expected);
  if (dimension_of(unit) != expected)
    throw DomainError("quantity '" + std::string(text) + "' has the wrong dimension");
  return {value, unit};
}

double intensity_to_field(double intensity_w_cm2) {
  if (!(intensity_w_cm2 >= 0.0)) throw DomainError("intensity must be non-negative");
  return std::sqrt(intensity_w_cm2 / constants::atomic_intensity_w_cm2);
}

double field_to_intensity(double field_au) {
  return field_au * field_au * constants::atomic_intensity_w_cm2;
}

double wavelength_to_photon_energy(double wavelength_nm) {
  if (!(wavelength_nm > 0.0)) throw DomainError("wavelength must be positive");
  return constants::hartree_wavelength_nm / wavelength_nm;
}

double photon_energy_to_wavelength(double energy_au) {
  if (!(energy_au > 0.0)) throw DomainError("photon energy must be positive");
  return constants::hartree_wavelength_nm / energy_au;
}

void LaserPoint::validate() const {
  if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm))
    throw DomainError("wavelength must be positive");
  if (!(intensity_gw_cm2 >= 0.0) || !std::isfinite(intensity_gw_cm2))
    throw DomainError("intensity must be non-negative");
}

} // namespace floqep
