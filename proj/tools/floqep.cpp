#include "floqep/config.hpp"
#include "floqep/errors.hpp"
#include "floqep/kernels.hpp"
#include "floqep/output.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <sstream>

using namespace floqep;
using nlohmann::json;

namespace {

struct Run {
  std::string command;
  RunConfig config;
  std::string hash;

  std::filesystem::path path(std::string_view suffix) const {
    return artifact_path(config.output_dir, command, hash, suffix);
  }
};

Run prepare(const std::string &command, const std::string &config_path, const std::vector<std::string> &overrides,
            const std::string &output_dir) {
  Run run;
  run.command = command;
  std::vector<std::string> all = overrides;
  if (!output_dir.empty()) all.push_back("output.directory=" + output_dir);
  run.config = load_run_config(config_path, all);
  const std::string effective = effective_config(run.config);
  // where the files go does not change what is computed
  RunConfig neutral = run.config;
  neutral.output_dir.clear();
  run.hash = config_hash(command + "\n" + effective_config(neutral));
  write_file(run.path(".effective.yaml"), effective);
  return run;
}

json header(const Run &run) {
  return {{"schema_version", schema_version},
          {"command", run.command},
          {"config_hash", run.hash},
          {"model", run.config.model.name}};
}

double cm(double hartree) { return hartree_to_wavenumber(hartree); }
std::string num(double v) { return format_double(v); }

std::string short_num(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

void require_molecular(const RunConfig &c, const std::string &command) {
  if (c.model.kind != ModelKind::molecular) throw ConfigError("model.kind", command + " needs a molecular model");
}

// Rescale a trace computed for one duration to another; the width profile
// along the loop does not depend on the duration.
std::vector<double> rescaled_survival(const SurvivalTrace &trace, double from_fs, double to_fs) {
  std::vector<double> t = trace.times;
  for (double &x : t) x *= to_fs / from_fs;
  return survival_probability(t, trace.widths);
}

json loop_json(const SurvivalTrace &trace) {
  json j;
  j["start_label"] = trace.start_label ? json(*trace.start_label) : json(nullptr);
  j["end_label"] = trace.end_label ? json(*trace.end_label) : json(nullptr);
  j["exchange"] = trace.exchange;
  j["end_overlap"] = trace.end_overlap;
  j["encloses_ep"] = trace.encloses_ep ? json(*trace.encloses_ep) : json(nullptr);
  j["flagged_steps"] = trace.flagged_steps;
  j["points"] = trace.times.size();
  j["P_ND_final"] = trace.final_survival();
  return j;
}

// Run body(i) for i in [0, n) over the worker pool and rethrow the first
// failure by index once every task has finished.
template <class F> void for_each_task(int n, F &&body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

int dump_potentials(const Run &run) {
  const RunConfig &c = run.config;
  require_molecular(c, "dump-potentials");
  const DressedChannelPair pair = dressed_channels(c.model.molecular, c.laser);
  const SampledChannels ch = sample(pair, c.grid.dvr.nodes());
  const AdiabaticCurves ad = adiabatic_potentials(ch);
  CsvTable t({"R_bohr", "R_angstrom", "V_u_hartree", "V_u_cm-1", "V_g_dressed_hartree", "V_g_dressed_cm-1", "W_hartree",
              "W_cm-1", "V_minus_hartree", "V_minus_cm-1", "V_plus_hartree", "V_plus_cm-1"});
  for (Eigen::Index i = 0; i < ch.r.size(); ++i)
    t.add(std::vector<double>{ch.r[i], ch.r[i] * constants::bohr_in_angstrom, ch.vu[i], cm(ch.vu[i]), ch.vg[i],
                              cm(ch.vg[i]), ch.w[i], cm(ch.w[i]), ad.lower[i], cm(ad.lower[i]), ad.upper[i],
                              cm(ad.upper[i])});
  write_file(run.path(".csv"), t.str());
  const auto crossings = find_crossings(pair, c.grid.dvr.r_min(), c.grid.dvr.r_max());
  std::string where;
  for (double r : crossings) where += (where.empty() ? "" : ", ") + short_num(r, 5);
  std::cout << "dump-potentials: " << ch.r.size() << " points at " << c.laser.wavelength_nm << " nm, "
            << c.laser.intensity_gw_cm2 << " GW/cm2; diabatic crossings at R = [" << where << "] bohr -> "
            << run.path(".csv").string() << "\n";
  return 0;
}

int levels(const Run &run) {
  const RunConfig &c = run.config;
  json doc = header(run);
  doc["levels"] = json::array();
  if (c.model.kind == ModelKind::two_level) {
    const auto problem = c.make_problem();
    CsvTable t({"v", "E_hartree", "E_cm-1"});
    for (const auto &ref : problem->references()) {
      t.add({std::to_string(ref.label), num(ref.energy), num(cm(ref.energy))});
      doc["levels"].push_back({{"v", ref.label}, {"energy_hartree", ref.energy}, {"energy_cm-1", cm(ref.energy)}});
    }
    write_file(run.path(".csv"), t.str());
    write_json(run.path(".json"), doc);
    std::cout << "levels: " << problem->references().size() << " two-level references -> " << run.path(".csv").string()
              << "\n";
    return 0;
  }
  const MolecularModel &m = c.model.molecular;
  const auto found = bound_levels(m.u, m.reduced_mass, c.solver.reference_levels, c.grid.dvr);
  const bool morse = m.u.form() == CurveForm::morse;
  // closed-form Morse levels for comparison
  const double omega = m.u.range() * std::sqrt(2.0 * m.u.depth() / m.reduced_mass);
  CsvTable t({"v", "E_hartree", "E_cm-1", "nodes", "morse_hartree", "morse_cm-1", "relative_error"});
  double worst = 0.0;
  for (const auto &lv : found) {
    json row{{"v", lv.v}, {"energy_hartree", lv.energy}, {"energy_cm-1", cm(lv.energy)}, {"nodes", lv.nodes}};
    if (morse) {
      const double x = omega * (lv.v + 0.5);
      const double exact = m.u.asymptote() - m.u.depth() + x - x * x / (4.0 * m.u.depth());
      const double rel = std::abs(lv.energy - exact) / std::abs(exact);
      worst = std::max(worst, rel);
      t.add({std::to_string(lv.v), num(lv.energy), num(cm(lv.energy)), std::to_string(lv.nodes), num(exact),
             num(cm(exact)), num(rel)});
      row["morse_hartree"] = exact;
      row["relative_error"] = rel;
    } else {
      t.add({std::to_string(lv.v), num(lv.energy), num(cm(lv.energy)), std::to_string(lv.nodes), "", "", ""});
    }
    doc["levels"].push_back(row);
  }
  if (morse) doc["max_relative_error"] = worst;
  write_file(run.path(".csv"), t.str());
  write_json(run.path(".json"), doc);
  std::cout << "levels: " << found.size() << " bound levels of u";
  if (morse) std::cout << ", max relative deviation from closed-form Morse " << short_num(worst, 3);
  std::cout << " -> " << run.path(".csv").string() << "\n";
  return 0;
}

int solve(const Run &run) {
  const RunConfig &c = run.config;
  struct Row {
    cplx energy;
    std::optional<int> label;
    std::string character;
    double overlap;
  };
  std::vector<Row> rows;
  json doc = header(run);
  if (c.model.kind == ModelKind::molecular) {
    const MolecularFloquetProblem problem(c.model.molecular, c.floquet_settings());
    SolveDiagnostics diag;
    for (const auto &r : problem.solve_resonances(c.laser, c.solver.window, c.solver.stability_tol, &diag))
      rows.push_back({r.energy, r.label, to_string(r.character), r.label_overlap});
    doc["discarded"] = {{"upper_half_plane", diag.upper_half_plane},
                        {"outside_window", diag.outside_window},
                        {"unstable", diag.unstable}};
  } else {
    const TwoLevelModel model(c.model.two_level);
    const auto &refs = model.references();
    const cplx mean = 0.5 * (refs[0].energy + refs[1].energy);
    for (const auto &p : model.eigenpairs_near(c.laser, mean, 2)) {
      const auto a = assign_label(p.vector, refs);
      rows.push_back({p.value, a.label, to_string(ResonanceCharacter::unassigned), a.overlap});
    }
  }
  CsvTable t({"lambda_nm", "I_GW_cm2", "E_R_hartree", "E_R_cm-1", "Gamma_hartree", "Gamma_cm-1", "label", "character",
              "overlap"});
  doc["laser"] = {{"wavelength_nm", c.laser.wavelength_nm},
                  {"intensity_gw_cm2", c.laser.intensity_gw_cm2},
                  {"photon_energy_hartree", c.laser.photon_energy()},
                  {"field_au", c.laser.field_amplitude()}};
  doc["resonances"] = json::array();
  for (const auto &r : rows) {
    const double er = r.energy.real(), gamma = -2.0 * r.energy.imag();
    t.add({num(c.laser.wavelength_nm), num(c.laser.intensity_gw_cm2), num(er), num(cm(er)), num(gamma),
           num(cm(gamma)), r.label ? std::to_string(*r.label) : "", r.character, num(r.overlap)});
    doc["resonances"].push_back({{"E_R_hartree", er},
                                 {"E_R_cm-1", cm(er)},
                                 {"Gamma_hartree", gamma},
                                 {"Gamma_cm-1", cm(gamma)},
                                 {"label", r.label ? json(*r.label) : json(nullptr)},
                                 {"character", r.character},
                                 {"overlap", r.overlap}});
  }
  write_file(run.path(".csv"), t.str());
  write_json(run.path(".json"), doc);
  std::cout << "solve: " << rows.size() << " resonances at " << c.laser.wavelength_nm << " nm, "
            << c.laser.intensity_gw_cm2 << " GW/cm2 -> " << run.path(".json").string() << "\n";
  return 0;
}

int scan(const Run &run) {
  const RunConfig &c = run.config;
  const auto problem = c.make_problem();
  const auto intensities = c.scan.intensities();
  const int nw = static_cast<int>(c.scan.wavelengths_nm.size());
  std::vector<std::array<ResonanceBranch, 2>> branches(static_cast<std::size_t>(nw));
  for_each_task(nw * 2, [&](int task) {
    const double lambda = c.scan.wavelengths_nm[static_cast<std::size_t>(task / 2)];
    const int label = c.scan.labels[static_cast<std::size_t>(task % 2)];
    const ParameterPath path = ParameterPath::intensity_sweep(lambda, intensities);
    const Eigenpair seed = seed_from_level(*problem, path.at(path.samples.front()), label);
    branches[static_cast<std::size_t>(task / 2)][static_cast<std::size_t>(task % 2)] =
        track(*problem, path, seed, c.tracking);
  });

  CsvTable t({"lambda_nm", "label", "I_GW_cm2", "I_au", "E_R_hartree", "E_R_cm-1", "Gamma_hartree", "Gamma_cm-1",
              "flagged"});
  json doc = header(run);
  doc["wavelengths"] = json::array();
  bool broken = false;
  std::string summary;
  for (int w = 0; w < nw; ++w) {
    const double lambda = c.scan.wavelengths_nm[static_cast<std::size_t>(w)];
    const auto &pair = branches[static_cast<std::size_t>(w)];
    json entry{{"wavelength_nm", lambda}, {"branches", json::array()}};
    for (int k = 0; k < 2; ++k) {
      const ResonanceBranch &b = pair[static_cast<std::size_t>(k)];
      const int label = c.scan.labels[static_cast<std::size_t>(k)];
      for (const BranchPoint *p : b.samples()) {
        const double er = p->energy.real(), gamma = p->width();
        t.add({num(lambda), std::to_string(label), num(p->laser.intensity_gw_cm2),
               num(to_atomic(p->laser.intensity_gw_cm2, Unit::gigawatt_per_cm2)), num(er), num(cm(er)), num(gamma),
               num(cm(gamma)), p->flagged ? "1" : "0"});
      }
      entry["branches"].push_back({{"label", label},
                                   {"end_label", b.end_label ? json(*b.end_label) : json(nullptr)},
                                   {"broken", b.broken},
                                   {"flagged_steps", b.flagged_steps},
                                   {"diagnostic", b.diagnostic}});
    }
    std::string topology = "broken";
    if (pair[0].broken || pair[1].broken)
      broken = true;
    else
      topology = to_string(classify_crossing(pair[0], pair[1]));
    entry["topology"] = topology;
    doc["wavelengths"].push_back(entry);
    summary += (summary.empty() ? "" : ", ") + short_num(lambda, 6) + " nm " + topology;
  }
  write_file(run.path(".csv"), t.str());
  write_json(run.path(".json"), doc);
  std::cout << "scan: " << nw << " wavelengths x " << intensities.size() << " intensities; " << summary << " -> "
            << run.path(".csv").string() << "\n";
  if (broken) {
    std::cerr << "floqep: error: a branch broke during the scan; see " << run.path(".json").string() << "\n";
    return 3;
  }
  return 0;
}

json transect_json(const TransectFit &f) {
  return {{"exponent", f.exponent}, {"rms_log_error", f.rms_log_error}, {"distances", f.distances}, {"gaps", f.gaps}};
}

int find_ep(const Run &run) {
  const RunConfig &c = run.config;
  const auto problem = c.make_problem();
  const PairEvaluator pair(*problem, c.ep.labels[0], c.ep.labels[1]);
  const EpEstimate e = locate_ep(pair, c.ep.box, c.ep.options);
  json doc = header(run);
  doc["labels"] = c.ep.labels;
  doc["found"] = e.found;
  doc["confirmed"] = e.confirmed;
  doc["lambda_nm"] = e.point.wavelength_nm;
  doc["intensity_gw_cm2"] = e.point.intensity_gw_cm2;
  doc["photon_energy_hartree"] = e.point.photon_energy();
  doc["field_au"] = e.point.field_amplitude();
  doc["E_R_hartree"] = e.energy.real();
  doc["E_R_cm-1"] = cm(e.energy.real());
  doc["Gamma_hartree"] = -2.0 * e.energy.imag();
  doc["Gamma_cm-1"] = cm(-2.0 * e.energy.imag());
  doc["residual_gap_hartree"] = e.residual_gap;
  doc["residual_gap_cm-1"] = cm(e.residual_gap);
  doc["level_spacing_hartree"] = e.level_spacing;
  doc["relative_gap"] = e.residual_gap / e.level_spacing;
  doc["exponent"] = e.exponent;
  doc["transect_lambda"] = transect_json(e.along_lambda);
  doc["transect_intensity"] = transect_json(e.along_intensity);
  doc["coarse_gap_hartree"] = e.coarse_gap;
  doc["corner_gaps_hartree"] = e.corner_gaps;
  doc["evaluations"] = e.evaluations;
  doc["diagnostic"] = e.diagnostic;
  if (c.model.kind == ModelKind::two_level) {
    const LaserPoint exact = TwoLevelModel(c.model.two_level).exceptional_point();
    doc["analytic"] = {{"lambda_nm", exact.wavelength_nm}, {"intensity_gw_cm2", exact.intensity_gw_cm2}};
  }
  write_json(run.path(".json"), doc);
  std::cout << "find-ep: " << (e.found ? (e.confirmed ? "confirmed" : "unconfirmed") : "no EP in region")
            << " lambda=" << short_num(e.point.wavelength_nm, 9) << " nm I=" << short_num(e.point.intensity_gw_cm2, 6)
            << " GW/cm2 gap/spacing=" << short_num(e.residual_gap / e.level_spacing, 3)
            << " exponent=" << short_num(e.exponent, 4) << " -> " << run.path(".json").string() << "\n";
  if (!e.found) {
    std::cerr << "floqep: error: no EP in region: " << e.diagnostic << "\n";
    return 3;
  }
  return 0;
}

CsvTable trace_table(const SurvivalTrace &trace) {
  CsvTable t({"t_au", "t_fs", "phi", "lambda_nm", "I_GW_cm2", "E_R_hartree", "E_R_cm-1", "Gamma_hartree",
              "Gamma_cm-1", "P_ND", "sample"});
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const double er = trace.energies[k].real(), gamma = trace.widths[k];
    t.add({num(trace.times[k]), num(atomic_time_to_fs(trace.times[k])), num(trace.phases[k]),
           num(trace.lasers[k].wavelength_nm), num(trace.lasers[k].intensity_gw_cm2), num(er), num(cm(er)),
           num(gamma), num(cm(gamma)), num(trace.survival[k]), trace.samples[k] ? "1" : "0"});
  }
  return t;
}

int loop(const Run &run) {
  const RunConfig &c = run.config;
  const auto problem = c.make_problem();
  const SurvivalTrace trace = follow_loop(*problem, c.loop.spec, c.loop.start_level, {c.tracking, c.loop.ep});
  write_file(run.path(".csv"), trace_table(trace).str());
  json doc = header(run);
  doc["duration_fs"] = c.loop.spec.duration_fs;
  doc["direction"] = c.loop.spec.direction == LoopDirection::forward ? "forward" : "reverse";
  doc.update(loop_json(trace));
  write_json(run.path(".json"), doc);
  std::cout << "loop: v=" << c.loop.start_level << " -> "
            << (trace.end_label ? std::to_string(*trace.end_label) : std::string("unassigned"))
            << (trace.exchange ? " (exchange)" : " (no exchange)") << " P_ND=" << short_num(trace.final_survival(), 6)
            << " over " << c.loop.spec.duration_fs << " fs -> " << run.path(".csv").string() << "\n";
  return 0;
}

int survive(const Run &run) {
  const RunConfig &c = run.config;
  const auto problem = c.make_problem();
  std::vector<SurvivalTrace> traces(2);
  for_each_task(2, [&](int k) {
    traces[static_cast<std::size_t>(k)] =
        follow_loop(*problem, c.loop.spec, c.ep.labels[static_cast<std::size_t>(k)], {c.tracking, c.loop.ep});
  });
  CsvTable t({"start_label", "duration_fs", "t_au", "t_fs", "phi", "Gamma_hartree", "Gamma_cm-1", "P_ND"});
  json doc = header(run);
  doc["direction"] = c.loop.spec.direction == LoopDirection::forward ? "forward" : "reverse";
  doc["runs"] = json::array();
  std::string summary;
  for (const auto &trace : traces) {
    json entry = loop_json(trace);
    entry.erase("P_ND_final");
    entry["P_ND_final"] = json::object();
    for (double d : c.survive_durations_fs) {
      const auto p = rescaled_survival(trace, c.loop.spec.duration_fs, d);
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double tk = trace.times[k] * d / c.loop.spec.duration_fs;
        t.add({std::to_string(*trace.start_label), num(d), num(tk), num(atomic_time_to_fs(tk)), num(trace.phases[k]),
               num(trace.widths[k]), num(cm(trace.widths[k])), num(p[k])});
      }
      entry["P_ND_final"][num(d)] = p.back();
      summary += (summary.empty() ? "" : ", ") + std::to_string(*trace.start_label) + "->" +
                 (trace.end_label ? std::to_string(*trace.end_label) : std::string("?")) + "@" + short_num(d, 6) +
                 "fs " + short_num(p.back(), 4);
    }
    doc["runs"].push_back(entry);
  }
  write_file(run.path(".csv"), t.str());
  write_json(run.path(".json"), doc);
  std::cout << "survive: P_ND " << summary << " -> " << run.path(".json").string() << "\n";
  return 0;
}

int verify(const Run &run) {
  const RunConfig &c = run.config;
  require_molecular(c, "verify");
  const auto problem = c.make_problem();
  const SurvivalTrace trace = follow_loop(*problem, c.loop.spec, c.loop.start_level, {c.tracking, c.loop.ep});
  const auto &durations = c.tdse.durations_fs;
  std::vector<TdseResult> results(durations.size());
  for_each_task(static_cast<int>(durations.size()), [&](int k) {
    LoopSpec spec = c.loop.spec;
    spec.duration_fs = durations[static_cast<std::size_t>(k)];
    results[static_cast<std::size_t>(k)] = propagate(c.model.molecular, spec, c.loop.start_level, c.tdse.options);
  });

  json doc = header(run);
  doc["start_level"] = c.loop.start_level;
  doc["direction"] = c.loop.spec.direction == LoopDirection::forward ? "forward" : "reverse";
  doc["mode"] = c.tdse.options.mode == Propagation::rotating ? "rotating" : "carrier";
  doc["floquet"] = loop_json(trace);
  doc["adiabaticity"] = json::array();
  std::size_t longest = 0;
  std::vector<std::pair<double, double>> diffs;
  for (std::size_t k = 0; k < durations.size(); ++k) {
    const TdseResult &r = results[k];
    const double pnd = rescaled_survival(trace, c.loop.spec.duration_fs, durations[k]).back();
    json pops = json::object();
    int dominant = -1;
    double best = -1.0;
    for (const auto &[v, p] : r.populations) {
      pops[std::to_string(v)] = p;
      if (p > best) {
        best = p;
        dominant = v;
      }
    }
    doc["adiabaticity"].push_back({{"duration_fs", durations[k]},
                                   {"survival_tdse", r.survival},
                                   {"P_ND_floquet", pnd},
                                   {"difference", std::abs(r.survival - pnd)},
                                   {"populations", pops},
                                   {"dominant_level", dominant},
                                   {"absorbed", r.final.absorbed},
                                   {"max_norm_error", r.max_norm_error},
                                   {"steps", r.steps},
                                   {"dt_au", r.dt}});
    diffs.emplace_back(durations[k], std::abs(r.survival - pnd));
    if (durations[k] > durations[longest]) longest = k;
  }
  std::sort(diffs.begin(), diffs.end());
  bool decreasing = true;
  for (std::size_t k = 1; k < diffs.size(); ++k) decreasing = decreasing && diffs[k].second < diffs[k - 1].second;
  const json &top = doc["adiabaticity"][longest];
  doc["duration_fs"] = durations[longest];
  doc["survival_tdse"] = top["survival_tdse"];
  doc["P_ND_floquet"] = top["P_ND_floquet"];
  doc["populations"] = top["populations"];
  doc["discrepancy_decreasing"] = decreasing;
  write_json(run.path(".json"), doc);
  std::cout << "verify: t_f=" << durations[longest] << " fs survival_tdse=" << short_num(top["survival_tdse"], 4)
            << " P_ND=" << short_num(top["P_ND_floquet"], 4) << " discrepancy "
            << (decreasing ? "decreases" : "does not decrease") << " with t_f -> " << run.path(".json").string()
            << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Floquet resonances, exceptional points and loop transfer for laser-dressed diatomics"};
  app.require_subcommand(1);
  std::string config_path, output_dir;
  std::vector<std::string> overrides;
  int workers = -1;

  using Handler = int (*)(const Run &);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"dump-potentials", "diabatic and adiabatic dressed potentials as CSV", dump_potentials},
      {"levels", "field-free vibrational levels of the u curve", levels},
      {"solve", "resonances at the configured laser point", solve},
      {"scan", "track a resonance pair along intensity at each wavelength", scan},
      {"find-ep", "locate the exceptional point of a resonance pair", find_ep},
      {"loop", "follow one resonance around the laser-parameter loop", loop},
      {"survive", "non-dissociation probability for both pair members and several durations", survive},
      {"verify", "wave-packet propagation against the adiabatic Floquet survival", verify},
  };
  std::map<CLI::App *, Handler> handlers;
  for (const auto &[name, description, handler] : commands) {
    CLI::App *sub = app.add_subcommand(name, description);
    sub->add_option("-c,--config", config_path, "run configuration (YAML)")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", output_dir, "output directory (overrides output.directory)");
    sub->add_option("-s,--set", overrides, "override a configuration value, key.path=value");
    sub->add_option("-w,--workers", workers, "worker threads (default: FLOQEP_WORKERS or all cores)")
        ->check(CLI::NonNegativeNumber);
    handlers[sub] = handler;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const int n = workers >= 0 ? workers : workers_from_environment();
    if (n > 0) set_workers(n);
    CLI::App *chosen = app.get_subcommands().front();
    const Run run = prepare(chosen->get_name(), config_path, overrides, output_dir);
    return handlers.at(chosen)(run);
  } catch (const ConfigError &e) {
    std::cerr << "floqep: config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError &e) {
    std::cerr << "floqep: config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError &e) {
    std::cerr << "floqep: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const InsufficientLevels &e) {
    std::cerr << "floqep: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "floqep: error: " << e.what() << "\n";
    return 1;
  }
}
