#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "floqep/config.hpp"
#include "floqep/continuation.hpp"
#include "floqep/errors.hpp"
#include "floqep/two_level.hpp"

#include "../support/oracles.hpp"

using namespace floqep;

namespace {

const std::filesystem::path source_dir = FLOQEP_SOURCE_DIR;

TwoLevelModel shipped_pair() { return TwoLevelModel(load_model(source_dir / "data/two_level.yaml").two_level); }

// Closed-form eigenvalues of [[a, w], [w, b]] written independently of the model.
std::array<cplx, 2> roots(const TwoLevelParameters &p, const LaserPoint &lp) {
  const double w = -0.5 * oracle::field_from_intensity(lp.intensity_gw_cm2 * 1e9) * p.dipole;
  const cplx a(p.energy_a, -0.5 * p.width_a);
  const cplx b(p.energy_b - oracle::photon_energy(lp.wavelength_nm), -0.5 * p.width_b);
  const auto [x, y] = oracle::eig2(a, b, w);
  return {x, y};
}

// Root followed by continuity on a much finer grid than the tracker uses.
std::vector<cplx> continued_root(const TwoLevelParameters &p, const std::vector<LaserPoint> &pts, cplx start,
                                 int substeps = 200) {
  std::vector<cplx> out{start};
  cplx cur = start;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    for (int j = 1; j <= substeps; ++j) {
      const double f = static_cast<double>(j) / substeps;
      const LaserPoint lp{pts[k - 1].wavelength_nm + f * (pts[k].wavelength_nm - pts[k - 1].wavelength_nm),
                          pts[k - 1].intensity_gw_cm2 + f * (pts[k].intensity_gw_cm2 - pts[k - 1].intensity_gw_cm2)};
      const auto r = roots(p, lp);
      cur = std::abs(r[0] - cur) < std::abs(r[1] - cur) ? r[0] : r[1];
    }
    out.push_back(cur);
  }
  return out;
}

std::vector<LaserPoint> lambda_line(double center, double half, double intensity, int n) {
  std::vector<LaserPoint> pts;
  for (int k = 0; k < n; ++k) pts.push_back({center - half + 2.0 * half * k / (n - 1), intensity});
  return pts;
}

Eigenpair seed_near(const SpectralProblem &p, const LaserPoint &lp, cplx target) {
  return p.eigenpairs_near(lp, target, 1).front();
}

std::pair<ResonanceBranch, ResonanceBranch> both_branches(const TwoLevelModel &m, const std::vector<LaserPoint> &pts) {
  const ParameterPath path = ParameterPath::through(pts);
  const auto start = m.eigenpairs_near(pts.front(), 0.0, 2);
  return {track(m, path, start[0]), track(m, path, start[1])};
}

std::vector<LaserPoint> square_around(const LaserPoint &c, double dl, double di, int per_side) {
  const LaserPoint corners[5] = {{c.wavelength_nm - dl, c.intensity_gw_cm2 - di},
                                 {c.wavelength_nm + dl, c.intensity_gw_cm2 - di},
                                 {c.wavelength_nm + dl, c.intensity_gw_cm2 + di},
                                 {c.wavelength_nm - dl, c.intensity_gw_cm2 + di},
                                 {c.wavelength_nm - dl, c.intensity_gw_cm2 - di}};
  std::vector<LaserPoint> pts;
  for (int s = 0; s < 4; ++s)
    for (int k = 0; k < per_side; ++k) {
      const double f = static_cast<double>(k) / per_side;
      pts.push_back({corners[s].wavelength_nm + f * (corners[s + 1].wavelength_nm - corners[s].wavelength_nm),
                     corners[s].intensity_gw_cm2 + f * (corners[s + 1].intensity_gw_cm2 - corners[s].intensity_gw_cm2)});
    }
  pts.push_back(corners[4]);
  return pts;
}

} // namespace

TEST_CASE("path construction") {
  const ParameterPath p = ParameterPath::intensity_sweep(562.0, {0.1, 0.2, 0.4});
  CHECK(p.samples == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(p.at(1.5).intensity_gw_cm2 == oracle::rel(0.3));
  CHECK(p.at(1.5).wavelength_nm == 562.0);
  CHECK(p.at(2.0).intensity_gw_cm2 == 0.4);
  ParameterPath bad = p;
  bad.samples = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(ParameterPath::through({}), DomainError);
}

TEST_CASE("constant path gives a constant branch") {
  const TwoLevelModel m = shipped_pair();
  const LaserPoint lp{561.5, 0.25};
  const ParameterPath path = ParameterPath::through({lp, lp, lp, lp, lp});
  const Eigenpair seed = seed_from_level(m, lp, 1);
  const ResonanceBranch b = track(m, path, seed);
  REQUIRE(!b.broken);
  CHECK(b.points.size() == 5);
  for (const auto &pt : b.points) {
    CHECK(pt.energy == seed.value);
    CHECK(pt.overlap == oracle::rel(1.0).epsilon(1e-14));
    CHECK(!pt.flagged);
  }
  CHECK(b.start_label == 1);
  CHECK(b.end_label == 1);
}

TEST_CASE("zero coupling path follows the field-free level") {
  const RunConfig c = load_run_config(source_dir / "configs/na2.yaml");
  const auto problem = c.make_problem();
  std::vector<LaserPoint> pts;
  for (double l : {560.0, 561.5, 563.0, 564.5, 566.0}) pts.push_back({l, 0.0});
  const Eigenpair seed = seed_from_level(*problem, pts.front(), 5);
  const ResonanceBranch b = track(*problem, ParameterPath::through(pts), seed);
  REQUIRE(!b.broken);
  CHECK(b.start_label == 5);
  CHECK(b.end_label == 5);
  for (const auto *pt : b.samples()) {
    CHECK(std::abs(pt->energy - problem->reference(5).energy) < 1e-10);
    CHECK(std::abs(pt->energy - seed.value) < 1e-12);
  }
}

TEST_CASE("tracking near the exceptional point follows the analytic root") {
  const TwoLevelModel m = shipped_pair();
  const LaserPoint ep = m.exceptional_point();
  for (double f : {1.0 - 1e-3, 1.0 + 1e-3}) {
    const auto pts = lambda_line(ep.wavelength_nm, 0.05, f * ep.intensity_gw_cm2, 41);
    for (int start = 0; start < 2; ++start) {
      const cplx s = roots(m.parameters(), pts.front())[start];
      const ResonanceBranch b = track(m, ParameterPath::through(pts), seed_near(m, pts.front(), s));
      REQUIRE(!b.broken);
      const auto expected = continued_root(m.parameters(), pts, s);
      const auto samples = b.samples();
      REQUIRE(samples.size() == pts.size());
      double worst = 0.0;
      for (std::size_t k = 0; k < pts.size(); ++k) worst = std::max(worst, std::abs(samples[k]->energy - expected[k]));
      CHECK(worst < 1e-10);
      for (const auto &pt : b.points) CHECK(pt.overlap > 0.7);
    }
  }
}

TEST_CASE("crossing topology flips at the analytic exceptional point") {
  const TwoLevelModel m = shipped_pair();
  const LaserPoint ep = m.exceptional_point();
  for (double d : {1e-1, 1e-2, 1e-3}) {
    const auto below = both_branches(m, lambda_line(ep.wavelength_nm, 0.05, (1.0 - d) * ep.intensity_gw_cm2, 41));
    const auto above = both_branches(m, lambda_line(ep.wavelength_nm, 0.05, (1.0 + d) * ep.intensity_gw_cm2, 41));
    CHECK(classify_crossing(below.first, below.second) == CrossingTopology::energies_cross_widths_avoid);
    CHECK(classify_crossing(above.first, above.second) == CrossingTopology::widths_cross_energies_avoid);
  }
  // a sample placed on the exceptional point itself
  const auto through = both_branches(m, lambda_line(ep.wavelength_nm, 0.05, ep.intensity_gw_cm2, 41));
  CHECK(classify_crossing(through.first, through.second) == CrossingTopology::coalescent);
  // fixed detuning away from resonance: neither difference changes sign
  std::vector<LaserPoint> ramp;
  for (int k = 0; k < 21; ++k) ramp.push_back({ep.wavelength_nm + 0.2, 0.1 + 0.04 * k});
  const auto off = both_branches(m, ramp);
  CHECK(classify_crossing(off.first, off.second) == CrossingTopology::no_crossing);
}

TEST_CASE("classification refuses mismatched or broken branches") {
  const TwoLevelModel m = shipped_pair();
  const auto pts = lambda_line(561.8, 0.05, 0.2, 11);
  auto [a, b] = both_branches(m, pts);
  ResonanceBranch shorter = b;
  shorter.points.pop_back();
  CHECK_THROWS_AS(classify_crossing(a, shorter), DomainError);
  b.broken = true;
  CHECK_THROWS_AS(classify_crossing(a, b), NumericalError);
}

TEST_CASE("encircling the exceptional point exchanges the branches") {
  const TwoLevelModel m = shipped_pair();
  const LaserPoint ep = m.exceptional_point();
  const auto loop = square_around(ep, 0.05, 0.05, 20);
  const ResonanceBranch b = track(m, ParameterPath::through(loop), seed_from_level(m, loop.front(), 1));
  REQUIRE(!b.broken);
  CHECK(b.start_label == 1);
  CHECK(b.end_label == 0);

  // branch identity does not depend on the step size
  const auto fine = square_around(ep, 0.05, 0.05, 40);
  const ResonanceBranch h = track(m, ParameterPath::through(fine), seed_from_level(m, fine.front(), 1));
  REQUIRE(!h.broken);
  CHECK(h.end_label == b.end_label);
  CHECK(std::abs(h.points.back().energy - b.points.back().energy) < 1e-12);

  // a square beside the exceptional point returns to where it started
  const LaserPoint aside{ep.wavelength_nm + 0.3, ep.intensity_gw_cm2};
  const auto away = square_around(aside, 0.05, 0.05, 20);
  const ResonanceBranch n = track(m, ParameterPath::through(away), seed_from_level(m, away.front(), 1));
  REQUIRE(!n.broken);
  CHECK(n.end_label == 1);
  CHECK(std::abs(n.points.back().energy - n.points.front().energy) < 1e-12);
}

TEST_CASE("forward and backward traversal land on the same branch") {
  const TwoLevelModel m = shipped_pair();
  const LaserPoint ep = m.exceptional_point();
  std::vector<LaserPoint> pts;
  for (int k = 0; k < 30; ++k) pts.push_back({ep.wavelength_nm - 0.1 + 0.01 * k, 0.1 + 0.015 * k});
  const ResonanceBranch fwd = track(m, ParameterPath::through(pts), seed_from_level(m, pts.front(), 0));
  REQUIRE(!fwd.broken);
  std::vector<LaserPoint> rev(pts.rbegin(), pts.rend());
  const Eigenpair back_seed{fwd.points.back().energy, fwd.points.back().vector};
  const ResonanceBranch bwd = track(m, ParameterPath::through(rev), back_seed);
  REQUIRE(!bwd.broken);
  CHECK(std::abs(bwd.points.back().energy - fwd.points.front().energy) < 1e-12);
  CHECK(bwd.end_label == fwd.start_label);
}

TEST_CASE("refinement bisects and reports breaks") {
  const TwoLevelModel m = shipped_pair();
  const LaserPoint ep = m.exceptional_point();
  const auto pts = lambda_line(ep.wavelength_nm, 0.05, 1.001 * ep.intensity_gw_cm2, 3);
  TrackingOptions opt;
  const ResonanceBranch refined = track(m, ParameterPath::through(pts), m.eigenpairs_near(pts.front(), 0.0, 1).front(), opt);
  REQUIRE(!refined.broken);
  CHECK(refined.points.size() > pts.size());
  CHECK(refined.samples().size() == pts.size());

  opt.max_depth = 0;
  opt.min_overlap = 0.999999;
  opt.tie_margin = 0.0;
  const ResonanceBranch broken = track(m, ParameterPath::through(pts), m.eigenpairs_near(pts.front(), 0.0, 1).front(), opt);
  CHECK(broken.broken);
  CHECK(broken.diagnostic.find("refinement exhausted") != std::string::npos);
  CHECK(!broken.end_label.has_value());
}

TEST_CASE("seeding from a level") {
  const TwoLevelModel m = shipped_pair();
  const LaserPoint weak{561.0, 1e-4};
  CHECK(std::abs(seed_from_level(m, weak, 0).value - cplx(-0.0003, -5e-7)) < 1e-8);
  CHECK_THROWS(seed_from_level(m, weak, 7));
}
