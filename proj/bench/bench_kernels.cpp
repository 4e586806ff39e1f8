// Serial reference vs OpenMP kernels: wall time and agreement.
#include "floqep/ep_loop.hpp"
#include "floqep/kernels.hpp"
#include "floqep/spectral_model.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

using namespace floqep;

namespace {

template <class F> double seconds(F &&f, int repeats = 1) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / repeats;
}

MolecularModel bench_model() {
  MolecularModel m;
  m.name = "bench";
  m.u = PotentialCurve::morse(0.000792, 9.7, 0.397, 0.0);
  m.g = PotentialCurve::morse(0.002, 14.529070342215993, 0.4, 0.0773);
  m.dipole = DipoleFunction::constant(10.37);
  m.reduced_mass = 11.49488464 * constants::dalton_in_me;
  return m;
}

} // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());

  {
    ScalingSpec sc;
    sc.kind = ScalingKind::exterior;
    sc.angle = 0.3;
    sc.onset = 18.0;
    const MolecularFloquetProblem problem(bench_model(), {RadialGrid{SineDvr(5.0, 26.0, 200), sc}, {}, 10});
    const PairEvaluator pair(problem, 5, 6);
    const GapFunction gap = [&](const LaserPoint &p) { return pair(p).gap(); };
    std::vector<double> lambdas, intensities;
    for (int i = 0; i < 6; ++i) lambdas.push_back(560.0 + i);
    for (int j = 0; j < 6; ++j) intensities.push_back(0.1 + 0.1 * j);
    Eigen::MatrixXd a, b;
    const double ts = seconds([&] { a = scan_grid_serial(gap, lambdas, intensities); });
    const double tp = seconds([&] { b = scan_grid_parallel(gap, lambdas, intensities); });
    std::printf("scan_grid      6x6 points   serial %8.3f s  parallel %8.3f s  speedup %5.2f  max diff %.1e\n", ts, tp,
                ts / tp, (a - b).cwiseAbs().maxCoeff());
  }

  {
    const int n = 1 << 16;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd u(n), g(n);
    Eigen::VectorXd vu(n), vg(n), w(n), absorb(n);
    for (int i = 0; i < n; ++i) {
      u[i] = {normal(rng), normal(rng)};
      g[i] = {normal(rng), normal(rng)};
      vu[i] = 1e-3 * normal(rng);
      vg[i] = 1e-3 * normal(rng);
      w[i] = 1e-4 * normal(rng);
      absorb[i] = i > 3 * n / 4 ? 1e-3 : 0.0;
    }
    Eigen::VectorXcd us = u, gs = g, up = u, gp = g;
    double ls = 0.0, lp = 0.0;
    const int repeats = 200;
    const double ts = seconds([&] { ls += potential_step_serial(us, gs, vu, vg, w, absorb, 1.0, 0.01); }, repeats);
    const double tp = seconds([&] { lp += potential_step_parallel(up, gp, vu, vg, w, absorb, 1.0, 0.01); }, repeats);
    const double diff = std::max((us - up).cwiseAbs().maxCoeff(), (gs - gp).cwiseAbs().maxCoeff());
    std::printf("potential_step %d points serial %8.2e s  parallel %8.2e s  speedup %5.2f  max diff %.1e  loss diff %.1e\n",
                n, ts, tp, ts / tp, diff, std::abs(ls - lp));
  }
  return 0;
}
