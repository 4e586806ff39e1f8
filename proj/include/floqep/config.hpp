#pragma once

#include "floqep/ep_loop.hpp"
#include "floqep/tdse.hpp"
#include "floqep/two_level.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace floqep {

enum class ModelKind { molecular, two_level };

struct ModelSpec {
  ModelKind kind = ModelKind::molecular;
  std::string name;
  MolecularModel molecular;
  TwoLevelParameters two_level;
};

struct SolverSpec {
  PhotonWindow photons;
  int reference_levels = 12;
  EnergyWindow window{wavenumber_to_hartree(-200.0), 0.0, wavenumber_to_hartree(50.0)};
  double stability_tol = 1e-6;
};

struct ScanSpec {
  std::array<int, 2> labels{5, 6};
  std::vector<double> wavelengths_nm;
  double intensity_from = 0.05;
  double intensity_to = 0.6;
  int intensity_points = 45;

  std::vector<double> intensities() const;
};

struct EpSpec {
  std::array<int, 2> labels{5, 6};
  LaserBox box{560.0, 566.0, 0.1, 0.6};
  EpSearchOptions options;
};

struct LoopRun {
  LoopSpec spec{562.53, 2.0, 0.4, 1670.0, 400, LoopDirection::forward, 1e-3};
  int start_level = 6;
  std::optional<LaserPoint> ep; // enables the winding check
};

struct TdseRun {
  TdseOptions options;
  std::vector<double> durations_fs{417.5, 835.0, 1670.0, 3340.0};
};

struct RunConfig {
  ModelSpec model;
  RadialGrid grid{SineDvr(5.0, 32.0, 320), {}};
  SolverSpec solver;
  LaserPoint laser{562.53, 0.332};
  TrackingOptions tracking;
  ScanSpec scan;
  EpSpec ep;
  LoopRun loop;
  std::vector<double> survive_durations_fs{835.0, 1670.0};
  TdseRun tdse;
  std::string output_dir = "out";

  void validate() const;
  FloquetSettings floquet_settings() const;
  std::unique_ptr<SpectralProblem> make_problem() const;
};

/// Parse a run configuration. `model` may be inline or a path relative to
/// `base`. Overrides are "dotted.key=value" with YAML values and are applied
/// after the model file is inlined. Errors are ConfigError naming the key.
RunConfig parse_run_config(YAML::Node root, const std::filesystem::path &base,
                           const std::vector<std::string> &overrides = {});
RunConfig load_run_config(const std::filesystem::path &file, const std::vector<std::string> &overrides = {});
ModelSpec load_model(const std::filesystem::path &file);
ModelSpec parse_model(const YAML::Node &node, const std::string &key = "model");

/// Every field with defaults resolved, as YAML text with explicit units.
std::string effective_config(const RunConfig &config);

} // namespace floqep
