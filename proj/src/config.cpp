#include "floqep/config.hpp"

#include "floqep/errors.hpp"
#include "floqep/output.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace floqep {

namespace {

std::string join(const std::string &path, const std::string &key) { return path.empty() ? key : path + "." + key; }

// Typed access to one YAML map with key-path error messages and a check for
// keys nobody asked about.
class Section {
public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(path_, "expected a mapping");
  }
  ~Section() = default;

  bool has(const std::string &key) {
    seen_.insert(key);
    return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull();
  }
  YAML::Node raw(const std::string &key) {
    seen_.insert(key);
    return node_ ? node_[key] : YAML::Node();
  }
  Section child(const std::string &key) { return Section(has(key) ? node_[key] : YAML::Node(), join(path_, key)); }
  std::string key(const std::string &k) const { return join(path_, k); }

  double quantity(const std::string &k, Dimension dim, double fallback) {
    return has(k) ? quantity_of(node_[k], key(k), dim) : fallback;
  }
  double quantity(const std::string &k, Dimension dim) {
    if (!has(k)) throw ConfigError(key(k), "required");
    return quantity_of(node_[k], key(k), dim);
  }
  double number(const std::string &k, double fallback) {
    if (!has(k)) return fallback;
    try {
      return node_[k].as<double>();
    } catch (const YAML::Exception &) {
      throw ConfigError(key(k), "expected a number");
    }
  }
  int integer(const std::string &k, int fallback) {
    if (!has(k)) return fallback;
    try {
      return node_[k].as<int>();
    } catch (const YAML::Exception &) {
      throw ConfigError(key(k), "expected an integer");
    }
  }
  bool boolean(const std::string &k, bool fallback) {
    if (!has(k)) return fallback;
    try {
      return node_[k].as<bool>();
    } catch (const YAML::Exception &) {
      throw ConfigError(key(k), "expected true or false");
    }
  }
  std::string text(const std::string &k, const std::string &fallback) {
    if (!has(k)) return fallback;
    if (!node_[k].IsScalar()) throw ConfigError(key(k), "expected a string");
    return node_[k].Scalar();
  }
  std::vector<double> quantities(const std::string &k, Dimension dim, std::vector<double> fallback) {
    if (!has(k)) return fallback;
    const YAML::Node seq = node_[k];
    if (!seq.IsSequence()) throw ConfigError(key(k), "expected a list");
    std::vector<double> out;
    for (std::size_t i = 0; i < seq.size(); ++i)
      out.push_back(quantity_of(seq[i], key(k) + "[" + std::to_string(i) + "]", dim));
    return out;
  }
  std::vector<int> integers(const std::string &k, std::vector<int> fallback) {
    if (!has(k)) return fallback;
    try {
      return node_[k].as<std::vector<int>>();
    } catch (const YAML::Exception &) {
      throw ConfigError(key(k), "expected a list of integers");
    }
  }
  std::vector<double> numbers(const std::string &k) {
    if (!has(k)) throw ConfigError(key(k), "required");
    try {
      return node_[k].as<std::vector<double>>();
    } catch (const YAML::Exception &) {
      throw ConfigError(key(k), "expected a list of numbers");
    }
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto &kv : node_) {
      const std::string k = kv.first.as<std::string>();
      if (!seen_.count(k)) throw ConfigError(key(k), "unknown key");
    }
  }

  static double quantity_of(const YAML::Node &n, const std::string &key, Dimension dim) {
    if (!n.IsScalar()) throw ConfigError(key, "expected a quantity such as \"562.53 nm\"");
    try {
      return parse_quantity(n.Scalar(), dim).to_atomic();
    } catch (const DomainError &e) {
      throw ConfigError(key, e.what());
    }
  }

private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

double intensity_gw(Section &s, const std::string &k, double fallback_gw) {
  return s.has(k) ? from_atomic(s.quantity(k, Dimension::intensity), Unit::gigawatt_per_cm2) : fallback_gw;
}
double wavelength_nm(Section &s, const std::string &k, double fallback) {
  return s.has(k) ? from_atomic(s.quantity(k, Dimension::length), Unit::nanometer) : fallback;
}

PotentialCurve parse_curve(Section s) {
  const std::string form = s.text("form", "morse");
  PotentialCurve c = PotentialCurve::morse(1.0, 1.0, 1.0, 0.0);
  if (form == "morse" || form == "extended-morse") {
    const double depth = s.quantity("depth", Dimension::energy);
    const double r_eq = s.quantity("r_eq", Dimension::length);
    const double range = s.quantity("range", Dimension::inverse_length);
    const double asym = s.quantity("asymptote", Dimension::energy, 0.0);
    if (form == "morse") {
      c = PotentialCurve::morse(depth, r_eq, range, asym);
    } else {
      const double c6 = s.number("c6", 0.0);
      const double r_damp = s.quantity("r_damp", Dimension::length, 1.0);
      c = PotentialCurve::extended_morse(depth, r_eq, range, asym, c6, r_damp);
    }
  } else if (form == "tabulated") {
    const Unit ru = parse_unit(s.text("r_unit", "bohr"), Dimension::length);
    const Unit vu = parse_unit(s.text("v_unit", "hartree"), Dimension::energy);
    std::vector<double> r = s.numbers("r"), v = s.numbers("v");
    for (double &x : r) x = to_atomic(x, ru);
    for (double &x : v) x = to_atomic(x, vu);
    const double asym = s.quantity("asymptote", Dimension::energy);
    try {
      c = PotentialCurve::tabulated(r, v, asym);
    } catch (const DomainError &e) {
      throw ConfigError(s.key("r"), e.what());
    }
  } else {
    throw ConfigError(s.key("form"), "must be morse, extended-morse or tabulated");
  }
  s.finish();
  return c;
}

DipoleFunction parse_dipole(Section s) {
  const std::string form = s.text("form", "constant");
  DipoleFunction d = DipoleFunction::constant(0.0);
  if (form == "constant") {
    d = DipoleFunction::constant(s.quantity("value", Dimension::dipole));
  } else if (form == "exponential") {
    d = DipoleFunction::exponential(s.quantity("limit", Dimension::dipole), s.quantity("amplitude", Dimension::dipole),
                                    s.quantity("decay", Dimension::inverse_length),
                                    s.quantity("r_ref", Dimension::length));
  } else if (form == "tabulated") {
    const Unit ru = parse_unit(s.text("r_unit", "bohr"), Dimension::length);
    const Unit mu = parse_unit(s.text("mu_unit", "au"), Dimension::dipole);
    std::vector<double> r = s.numbers("r"), m = s.numbers("mu");
    for (double &x : r) x = to_atomic(x, ru);
    for (double &x : m) x = to_atomic(x, mu);
    d = DipoleFunction::tabulated(r, m);
  } else {
    throw ConfigError(s.key("form"), "must be constant, exponential or tabulated");
  }
  s.finish();
  return d;
}

std::array<int, 2> label_pair(Section &s, const std::string &k, std::array<int, 2> fallback) {
  const auto v = s.integers(k, {fallback[0], fallback[1]});
  if (v.size() != 2 || v[0] == v[1]) throw ConfigError(s.key(k), "expected two different labels");
  return {v[0], v[1]};
}

std::pair<double, double> range_of(Section &s, const std::string &k, Dimension dim, Unit unit,
                                   std::pair<double, double> fallback) {
  if (!s.has(k)) return fallback;
  const auto v = s.quantities(k, dim, {});
  if (v.size() != 2) throw ConfigError(s.key(k), "expected [min, max]");
  return {from_atomic(v[0], unit), from_atomic(v[1], unit)};
}

void apply_override(YAML::Node root, const std::string &spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(spec, "override must look like key.path=value");
  const std::string path = spec.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(spec.substr(eq + 1));
  } catch (const YAML::Exception &e) {
    throw ConfigError(path, std::string("malformed override value: ") + e.what());
  }
  std::vector<std::string> keys;
  std::stringstream ss(path);
  for (std::string k; std::getline(ss, k, '.');) {
    if (k.empty()) throw ConfigError(path, "empty key in override path");
    keys.push_back(k);
  }
  // yaml-cpp nodes are handles, so walking by reassignment would clobber the
  // parent; recurse instead
  auto set = [&](auto &&self, YAML::Node node, std::size_t i) -> void {
    if (!node.IsMap() && !node.IsNull()) throw ConfigError(path, "override path crosses a non-mapping value");
    if (i + 1 == keys.size()) {
      node[keys[i]] = value;
      return;
    }
    YAML::Node next = node[keys[i]];
    if (!next || next.IsNull()) {
      node[keys[i]] = YAML::Node(YAML::NodeType::Map);
      next = node[keys[i]];
    }
    self(self, next, i + 1);
  };
  set(set, root, 0);
}

std::string fmt(double v) { return format_double(v); }
std::string q(double atomic, Unit unit) { return fmt(from_atomic(atomic, unit)) + " " + std::string(unit_symbol(unit)); }

YAML::Node curve_yaml(const PotentialCurve &c) {
  YAML::Node n;
  switch (c.form()) {
  case CurveForm::morse:
  case CurveForm::extended_morse:
    n["form"] = c.form() == CurveForm::morse ? "morse" : "extended-morse";
    n["depth"] = q(c.depth(), Unit::hartree);
    n["r_eq"] = q(c.r_eq(), Unit::bohr);
    n["range"] = q(c.range(), Unit::inverse_bohr);
    n["asymptote"] = q(c.asymptote(), Unit::hartree);
    if (c.form() == CurveForm::extended_morse) {
      n["c6"] = fmt(c.c6());
      n["r_damp"] = q(c.r_damp(), Unit::bohr);
    }
    break;
  case CurveForm::tabulated: {
    n["form"] = "tabulated";
    n["r_unit"] = "bohr";
    n["v_unit"] = "hartree";
    YAML::Node r, v;
    for (double x : c.table_r()) r.push_back(fmt(x));
    for (double x : c.table_v()) v.push_back(fmt(x));
    n["r"] = r;
    n["v"] = v;
    n["asymptote"] = q(c.asymptote(), Unit::hartree);
    break;
  }
  }
  return n;
}

YAML::Node dipole_yaml(const DipoleFunction &d, const MolecularModel &m) {
  YAML::Node n;
  switch (d.form()) {
  case DipoleForm::constant:
    n["form"] = "constant";
    n["value"] = q(d.limit(), Unit::dipole_au);
    break;
  case DipoleForm::exponential:
    n["form"] = "exponential";
    n["limit"] = q(d.limit(), Unit::dipole_au);
    n["amplitude"] = q(d.amplitude(), Unit::dipole_au);
    n["decay"] = q(d.decay(), Unit::inverse_bohr);
    n["r_ref"] = q(d.r_ref(), Unit::bohr);
    break;
  case DipoleForm::tabulated:
    // the table itself lives in the model file; echo samples so the run is still reproducible by eye
    n["form"] = "tabulated";
    n["mu_at_u_eq"] = q(d(m.u.r_eq()), Unit::dipole_au);
    break;
  }
  return n;
}

} // namespace

std::vector<double> ScanSpec::intensities() const {
  std::vector<double> out;
  if (intensity_points == 1) return {intensity_from};
  for (int k = 0; k < intensity_points; ++k)
    out.push_back(intensity_from + (intensity_to - intensity_from) * k / (intensity_points - 1));
  return out;
}

ModelSpec parse_model(const YAML::Node &node, const std::string &key) {
  Section s(node, key);
  ModelSpec m;
  const std::string kind = s.text("kind", "molecular");
  m.name = s.text("name", kind);
  if (kind == "molecular") {
    m.kind = ModelKind::molecular;
    m.molecular.name = m.name;
    m.molecular.reduced_mass = s.quantity("reduced_mass", Dimension::mass);
    if (!(m.molecular.reduced_mass > 0.0)) throw ConfigError(s.key("reduced_mass"), "must be positive");
    m.molecular.u = parse_curve(s.child("u"));
    m.molecular.g = parse_curve(s.child("g"));
    m.molecular.dipole = parse_dipole(s.child("dipole"));
    try {
      m.molecular.validate();
    } catch (const DomainError &e) {
      throw ConfigError(key, e.what());
    }
  } else if (kind == "two-level") {
    m.kind = ModelKind::two_level;
    Section a = s.child("level_a"), b = s.child("level_b");
    auto &p = m.two_level;
    p.label_a = a.integer("label", 0);
    p.energy_a = a.quantity("energy", Dimension::energy);
    p.width_a = a.quantity("width", Dimension::energy);
    p.label_b = b.integer("label", 1);
    p.energy_b = b.quantity("energy", Dimension::energy);
    p.width_b = b.quantity("width", Dimension::energy);
    a.finish();
    b.finish();
    p.dipole = s.quantity("dipole", Dimension::dipole);
    try {
      TwoLevelModel check(p);
    } catch (const DomainError &e) {
      throw ConfigError(key, e.what());
    }
  } else {
    throw ConfigError(s.key("kind"), "must be molecular or two-level");
  }
  s.finish();
  return m;
}

ModelSpec load_model(const std::filesystem::path &file) {
  try {
    return parse_model(YAML::LoadFile(file.string()));
  } catch (const YAML::Exception &e) {
    throw ConfigError("model", "cannot read " + file.string() + ": " + e.what());
  }
}

RunConfig parse_run_config(YAML::Node root, const std::filesystem::path &base,
                           const std::vector<std::string> &overrides) {
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("", "configuration must be a mapping");
  if (root["model"] && root["model"].IsScalar()) {
    const std::filesystem::path file = base / root["model"].Scalar();
    try {
      root["model"] = YAML::LoadFile(file.string());
    } catch (const YAML::Exception &e) {
      throw ConfigError("model", "cannot read " + file.string() + ": " + e.what());
    }
  }
  for (const auto &o : overrides) apply_override(root, o);

  RunConfig c;
  Section s(root, "");
  if (!s.has("model")) throw ConfigError("model", "required");
  c.model = parse_model(s.raw("model"), "model");

  {
    Section g = s.child("grid");
    const double r_min = g.quantity("r_min", Dimension::length, 5.0);
    const double r_max = g.quantity("r_max", Dimension::length, 32.0);
    const int points = g.integer("points", 320);
    if (!(r_min > 0.0) || !(r_max > r_min)) throw ConfigError("grid", "need 0 < r_min < r_max");
    if (points < 2) throw ConfigError("grid.points", "too few points");
    ScalingSpec sc;
    Section sg = g.child("scaling");
    const std::string kind = sg.text("kind", "exterior");
    if (kind == "none") {
      sc.kind = ScalingKind::none;
    } else if (kind == "exterior") {
      sc.kind = ScalingKind::exterior;
      sc.angle = sg.quantity("angle", Dimension::angle, 0.3);
      sc.onset = sg.quantity("onset", Dimension::length, 20.0);
      sc.switch_width = sg.quantity("switch_width", Dimension::length, 2.0);
    } else if (kind == "absorbing") {
      sc.kind = ScalingKind::absorbing;
      sc.onset = sg.quantity("onset", Dimension::length, 20.0);
      sc.cap_strength = sg.quantity("strength", Dimension::energy, 0.01);
      sc.cap_power = sg.number("power", 2.0);
    } else {
      throw ConfigError(sg.key("kind"), "must be none, exterior or absorbing");
    }
    sg.finish();
    g.finish();
    c.grid = RadialGrid{SineDvr(r_min, r_max, points), sc};
  }
  {
    Section v = s.child("solver");
    const auto ph = v.integers("photons", {-1, 0});
    if (ph.size() != 2 || ph[0] > -1 || ph[1] < 0) throw ConfigError(v.key("photons"), "expected [lowest <= -1, highest >= 0]");
    c.solver.photons = {ph[0], ph[1]};
    c.solver.reference_levels = v.integer("reference_levels", 12);
    Section w = v.child("window");
    c.solver.window.e_min = w.quantity("min", Dimension::energy, c.solver.window.e_min);
    c.solver.window.e_max = w.quantity("max", Dimension::energy, c.solver.window.e_max);
    c.solver.window.width_max = w.quantity("max_width", Dimension::energy, c.solver.window.width_max);
    w.finish();
    c.solver.stability_tol = v.quantity("stability", Dimension::energy, c.solver.stability_tol);
    v.finish();
  }
  {
    Section l = s.child("laser");
    c.laser.wavelength_nm = wavelength_nm(l, "wavelength", c.laser.wavelength_nm);
    c.laser.intensity_gw_cm2 = intensity_gw(l, "intensity", c.laser.intensity_gw_cm2);
    l.finish();
  }
  {
    Section t = s.child("tracking");
    c.tracking.min_overlap = t.number("min_overlap", c.tracking.min_overlap);
    c.tracking.max_jump = t.quantity("max_jump", Dimension::energy, c.tracking.max_jump);
    c.tracking.max_depth = t.integer("max_depth", c.tracking.max_depth);
    c.tracking.tie_margin = t.number("tie_margin", c.tracking.tie_margin);
    c.tracking.candidates = t.integer("candidates", c.tracking.candidates);
    t.finish();
  }
  {
    Section sc = s.child("scan");
    c.scan.labels = label_pair(sc, "labels", c.scan.labels);
    c.scan.wavelengths_nm = sc.quantities("wavelengths", Dimension::length, {});
    for (double &x : c.scan.wavelengths_nm) x = from_atomic(x, Unit::nanometer);
    if (c.scan.wavelengths_nm.empty()) c.scan.wavelengths_nm = {561.5, 562.0, 563.0, 563.5};
    Section in = sc.child("intensity");
    c.scan.intensity_from = intensity_gw(in, "from", c.scan.intensity_from);
    c.scan.intensity_to = intensity_gw(in, "to", c.scan.intensity_to);
    c.scan.intensity_points = in.integer("points", c.scan.intensity_points);
    in.finish();
    sc.finish();
  }
  {
    Section e = s.child("ep");
    c.ep.labels = label_pair(e, "labels", c.ep.labels);
    Section b = e.child("box");
    std::tie(c.ep.box.lambda_min, c.ep.box.lambda_max) =
        range_of(b, "wavelength", Dimension::length, Unit::nanometer, {c.ep.box.lambda_min, c.ep.box.lambda_max});
    std::tie(c.ep.box.intensity_min, c.ep.box.intensity_max) = range_of(
        b, "intensity", Dimension::intensity, Unit::gigawatt_per_cm2, {c.ep.box.intensity_min, c.ep.box.intensity_max});
    b.finish();
    const auto coarse = e.integers("coarse", {c.ep.options.coarse_lambda, c.ep.options.coarse_intensity});
    if (coarse.size() != 2) throw ConfigError(e.key("coarse"), "expected [wavelength points, intensity points]");
    c.ep.options.coarse_lambda = coarse[0];
    c.ep.options.coarse_intensity = coarse[1];
    c.ep.options.gap_tolerance = e.number("gap_tolerance", c.ep.options.gap_tolerance);
    c.ep.options.simplex_iterations = e.integer("simplex_iterations", c.ep.options.simplex_iterations);
    c.ep.options.transect_length = e.number("transect_length", c.ep.options.transect_length);
    c.ep.options.transect_points = e.integer("transect_points", c.ep.options.transect_points);
    e.finish();
  }
  {
    Section l = s.child("loop");
    LoopSpec &sp = c.loop.spec;
    sp.lambda0_nm = wavelength_nm(l, "center", sp.lambda0_nm);
    sp.dlambda_nm = wavelength_nm(l, "amplitude", sp.dlambda_nm);
    sp.intensity_max_gw_cm2 = intensity_gw(l, "intensity_max", sp.intensity_max_gw_cm2);
    if (l.has("duration")) sp.duration_fs = atomic_time_to_fs(l.quantity("duration", Dimension::time));
    sp.steps = l.integer("steps", sp.steps);
    const std::string dir = l.text("direction", "forward");
    if (dir != "forward" && dir != "reverse") throw ConfigError(l.key("direction"), "must be forward or reverse");
    sp.direction = dir == "forward" ? LoopDirection::forward : LoopDirection::reverse;
    sp.floor_fraction = l.number("floor", sp.floor_fraction);
    c.loop.start_level = l.integer("start_level", c.loop.start_level);
    if (l.has("ep")) {
      Section e = l.child("ep");
      c.loop.ep = LaserPoint{wavelength_nm(e, "wavelength", 0.0), intensity_gw(e, "intensity", 0.0)};
      e.finish();
    }
    l.finish();
  }
  {
    Section v = s.child("survive");
    auto d = v.quantities("durations", Dimension::time, {});
    if (!d.empty()) {
      c.survive_durations_fs.clear();
      for (double t : d) c.survive_durations_fs.push_back(atomic_time_to_fs(t));
    }
    v.finish();
  }
  {
    Section t = s.child("tdse");
    TdseOptions &o = c.tdse.options;
    const std::string mode = t.text("mode", "rotating");
    if (mode != "rotating" && mode != "carrier") throw ConfigError(t.key("mode"), "must be rotating or carrier");
    o.mode = mode == "rotating" ? Propagation::rotating : Propagation::carrier;
    o.grid.r_min = t.quantity("r_min", Dimension::length, o.grid.r_min);
    o.grid.r_max = t.quantity("r_max", Dimension::length, o.grid.r_max);
    o.grid.points = t.integer("points", o.grid.points);
    o.grid.bound_radius = t.quantity("bound_radius", Dimension::length, o.grid.bound_radius);
    Section a = t.child("absorber");
    o.grid.absorber_onset = a.quantity("onset", Dimension::length, o.grid.absorber_onset);
    o.grid.absorber_strength = a.quantity("strength", Dimension::energy, o.grid.absorber_strength);
    o.grid.absorber_power = a.number("power", o.grid.absorber_power);
    a.finish();
    o.steps_per_cycle = t.number("steps_per_cycle", o.steps_per_cycle);
    o.levels = t.integer("levels", o.levels);
    o.parallel = t.boolean("parallel", o.parallel);
    auto d = t.quantities("durations", Dimension::time, {});
    if (!d.empty()) {
      c.tdse.durations_fs.clear();
      for (double x : d) c.tdse.durations_fs.push_back(atomic_time_to_fs(x));
    }
    t.finish();
  }
  {
    Section o = s.child("output");
    c.output_dir = o.text("directory", c.output_dir);
    o.finish();
  }
  s.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path &file, const std::vector<std::string> &overrides) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(file.string());
  } catch (const YAML::BadFile &) {
    throw ConfigError("", "cannot open " + file.string());
  } catch (const YAML::Exception &e) {
    throw ConfigError("", file.string() + ": " + e.what());
  }
  return parse_run_config(root, file.parent_path(), overrides);
}

void RunConfig::validate() const {
  auto wrap = [](const char *key, auto &&fn) {
    try {
      fn();
    } catch (const DomainError &e) {
      throw ConfigError(key, e.what());
    }
  };
  if (model.kind == ModelKind::molecular) wrap("grid", [&] { grid.validate(); });
  if (solver.reference_levels < 2) throw ConfigError("solver.reference_levels", "need at least 2");
  if (!(solver.window.e_max > solver.window.e_min)) throw ConfigError("solver.window", "need min < max");
  if (!(solver.stability_tol > 0.0)) throw ConfigError("solver.stability", "must be positive");
  wrap("laser", [&] { laser.validate(); });
  if (!(tracking.min_overlap > 0.0 && tracking.min_overlap < 1.0))
    throw ConfigError("tracking.min_overlap", "must be in (0, 1)");
  if (tracking.max_depth < 0 || tracking.max_depth > 30) throw ConfigError("tracking.max_depth", "must be in [0, 30]");
  if (tracking.candidates < 2) throw ConfigError("tracking.candidates", "need at least 2");
  if (scan.intensity_points < 2) throw ConfigError("scan.intensity.points", "need at least 2");
  if (!(scan.intensity_from >= 0.0) || !(scan.intensity_to > scan.intensity_from))
    throw ConfigError("scan.intensity", "need 0 <= from < to");
  for (double w : scan.wavelengths_nm)
    if (!(w > 0.0)) throw ConfigError("scan.wavelengths", "wavelengths must be positive");
  wrap("ep.box", [&] { ep.box.validate(); });
  if (!(ep.options.gap_tolerance > 0.0)) throw ConfigError("ep.gap_tolerance", "must be positive");
  wrap("loop", [&] { loop.spec.validate(); });
  if (loop.start_level < 0) throw ConfigError("loop.start_level", "must be non-negative");
  if (loop.ep) wrap("loop.ep", [&] { loop.ep->validate(); });
  for (double d : survive_durations_fs)
    if (!(d > 0.0)) throw ConfigError("survive.durations", "durations must be positive");
  wrap("tdse", [&] { tdse.options.grid.validate(); });
  if (tdse.options.steps_per_cycle < 20.0) throw ConfigError("tdse.steps_per_cycle", "must be at least 20");
  for (double d : tdse.durations_fs)
    if (!(d > 0.0)) throw ConfigError("tdse.durations", "durations must be positive");
  if (output_dir.empty()) throw ConfigError("output.directory", "must not be empty");
}

FloquetSettings RunConfig::floquet_settings() const { return {grid, solver.photons, solver.reference_levels}; }

std::unique_ptr<SpectralProblem> RunConfig::make_problem() const {
  if (model.kind == ModelKind::two_level) return std::make_unique<TwoLevelModel>(model.two_level);
  return std::make_unique<MolecularFloquetProblem>(model.molecular, floquet_settings());
}

std::string effective_config(const RunConfig &c) {
  YAML::Node n;
  YAML::Node m;
  m["kind"] = c.model.kind == ModelKind::molecular ? "molecular" : "two-level";
  m["name"] = c.model.name;
  if (c.model.kind == ModelKind::molecular) {
    m["reduced_mass"] = q(c.model.molecular.reduced_mass, Unit::electron_mass);
    m["u"] = curve_yaml(c.model.molecular.u);
    m["g"] = curve_yaml(c.model.molecular.g);
    m["dipole"] = dipole_yaml(c.model.molecular.dipole, c.model.molecular);
  } else {
    const auto &p = c.model.two_level;
    m["level_a"]["label"] = p.label_a;
    m["level_a"]["energy"] = q(p.energy_a, Unit::hartree);
    m["level_a"]["width"] = q(p.width_a, Unit::hartree);
    m["level_b"]["label"] = p.label_b;
    m["level_b"]["energy"] = q(p.energy_b, Unit::hartree);
    m["level_b"]["width"] = q(p.width_b, Unit::hartree);
    m["dipole"] = q(p.dipole, Unit::dipole_au);
  }
  n["model"] = m;

  YAML::Node g;
  g["r_min"] = q(c.grid.dvr.r_min(), Unit::bohr);
  g["r_max"] = q(c.grid.dvr.r_max(), Unit::bohr);
  g["points"] = c.grid.dvr.size();
  const ScalingSpec &sc = c.grid.scaling;
  switch (sc.kind) {
  case ScalingKind::none: g["scaling"]["kind"] = "none"; break;
  case ScalingKind::exterior:
    g["scaling"]["kind"] = "exterior";
    g["scaling"]["angle"] = q(sc.angle, Unit::radian);
    g["scaling"]["onset"] = q(sc.onset, Unit::bohr);
    g["scaling"]["switch_width"] = q(sc.switch_width, Unit::bohr);
    break;
  case ScalingKind::absorbing:
    g["scaling"]["kind"] = "absorbing";
    g["scaling"]["onset"] = q(sc.onset, Unit::bohr);
    g["scaling"]["strength"] = q(sc.cap_strength, Unit::hartree);
    g["scaling"]["power"] = fmt(sc.cap_power);
    break;
  }
  n["grid"] = g;

  YAML::Node s;
  s["photons"].push_back(c.solver.photons.lowest);
  s["photons"].push_back(c.solver.photons.highest);
  s["reference_levels"] = c.solver.reference_levels;
  s["window"]["min"] = q(c.solver.window.e_min, Unit::wavenumber);
  s["window"]["max"] = q(c.solver.window.e_max, Unit::wavenumber);
  s["window"]["max_width"] = q(c.solver.window.width_max, Unit::wavenumber);
  s["stability"] = q(c.solver.stability_tol, Unit::hartree);
  n["solver"] = s;

  n["laser"]["wavelength"] = fmt(c.laser.wavelength_nm) + " nm";
  n["laser"]["intensity"] = fmt(c.laser.intensity_gw_cm2) + " GW/cm2";

  YAML::Node t;
  t["min_overlap"] = fmt(c.tracking.min_overlap);
  t["max_jump"] = q(c.tracking.max_jump, Unit::hartree);
  t["max_depth"] = c.tracking.max_depth;
  t["tie_margin"] = fmt(c.tracking.tie_margin);
  t["candidates"] = c.tracking.candidates;
  n["tracking"] = t;

  YAML::Node sc2;
  sc2["labels"].push_back(c.scan.labels[0]);
  sc2["labels"].push_back(c.scan.labels[1]);
  for (double w : c.scan.wavelengths_nm) sc2["wavelengths"].push_back(fmt(w) + " nm");
  sc2["intensity"]["from"] = fmt(c.scan.intensity_from) + " GW/cm2";
  sc2["intensity"]["to"] = fmt(c.scan.intensity_to) + " GW/cm2";
  sc2["intensity"]["points"] = c.scan.intensity_points;
  n["scan"] = sc2;

  YAML::Node e;
  e["labels"].push_back(c.ep.labels[0]);
  e["labels"].push_back(c.ep.labels[1]);
  e["box"]["wavelength"].push_back(fmt(c.ep.box.lambda_min) + " nm");
  e["box"]["wavelength"].push_back(fmt(c.ep.box.lambda_max) + " nm");
  e["box"]["intensity"].push_back(fmt(c.ep.box.intensity_min) + " GW/cm2");
  e["box"]["intensity"].push_back(fmt(c.ep.box.intensity_max) + " GW/cm2");
  e["coarse"].push_back(c.ep.options.coarse_lambda);
  e["coarse"].push_back(c.ep.options.coarse_intensity);
  e["gap_tolerance"] = fmt(c.ep.options.gap_tolerance);
  e["simplex_iterations"] = c.ep.options.simplex_iterations;
  e["transect_length"] = fmt(c.ep.options.transect_length);
  e["transect_points"] = c.ep.options.transect_points;
  n["ep"] = e;

  YAML::Node l;
  const LoopSpec &sp = c.loop.spec;
  l["center"] = fmt(sp.lambda0_nm) + " nm";
  l["amplitude"] = fmt(sp.dlambda_nm) + " nm";
  l["intensity_max"] = fmt(sp.intensity_max_gw_cm2) + " GW/cm2";
  l["duration"] = fmt(sp.duration_fs) + " fs";
  l["steps"] = sp.steps;
  l["direction"] = sp.direction == LoopDirection::forward ? "forward" : "reverse";
  l["floor"] = fmt(sp.floor_fraction);
  l["start_level"] = c.loop.start_level;
  if (c.loop.ep) {
    l["ep"]["wavelength"] = fmt(c.loop.ep->wavelength_nm) + " nm";
    l["ep"]["intensity"] = fmt(c.loop.ep->intensity_gw_cm2) + " GW/cm2";
  }
  n["loop"] = l;

  for (double d : c.survive_durations_fs) n["survive"]["durations"].push_back(fmt(d) + " fs");

  YAML::Node td;
  const TdseOptions &o = c.tdse.options;
  td["mode"] = o.mode == Propagation::rotating ? "rotating" : "carrier";
  td["r_min"] = q(o.grid.r_min, Unit::bohr);
  td["r_max"] = q(o.grid.r_max, Unit::bohr);
  td["points"] = o.grid.points;
  td["bound_radius"] = q(o.grid.bound_radius, Unit::bohr);
  td["absorber"]["onset"] = q(o.grid.absorber_onset, Unit::bohr);
  td["absorber"]["strength"] = q(o.grid.absorber_strength, Unit::hartree);
  td["absorber"]["power"] = fmt(o.grid.absorber_power);
  td["steps_per_cycle"] = fmt(o.steps_per_cycle);
  td["levels"] = o.levels;
  td["parallel"] = o.parallel;
  for (double d : c.tdse.durations_fs) td["durations"].push_back(fmt(d) + " fs");
  n["tdse"] = td;

  n["output"]["directory"] = c.output_dir;

  YAML::Emitter out;
  out << n;
  return std::string(out.c_str()) + "\n";
}

} // namespace floqep
