#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "floqep/errors.hpp"
#include "floqep/kernels.hpp"

#include <cstdlib>
#include <random>

using namespace floqep;

TEST_CASE("grid scan: parallel equals serial") {
  set_workers(4);
  const GapFunction f = [](const LaserPoint &p) {
    return std::sin(p.wavelength_nm) * std::exp(-p.intensity_gw_cm2) + p.photon_energy();
  };
  std::vector<double> lambdas, intensities;
  for (int i = 0; i < 17; ++i) lambdas.push_back(555.0 + 0.7 * i);
  for (int j = 0; j < 13; ++j) intensities.push_back(0.05 * j);
  const Eigen::MatrixXd s = scan_grid_serial(f, lambdas, intensities);
  const Eigen::MatrixXd p = scan_grid_parallel(f, lambdas, intensities);
  REQUIRE(s.rows() == 17);
  REQUIRE(s.cols() == 13);
  CHECK((s - p).cwiseAbs().maxCoeff() == 0.0);
  CHECK(s(3, 5) == f({lambdas[3], intensities[5]}));
}

TEST_CASE("grid scan rethrows the first failure") {
  const GapFunction f = [](const LaserPoint &p) -> double {
    if (p.intensity_gw_cm2 > 0.5) throw NumericalError("bad point");
    return 0.0;
  };
  CHECK_THROWS_AS(scan_grid_parallel(f, {1.0, 2.0}, {0.1, 0.9}), NumericalError);
  CHECK_THROWS_AS(scan_grid_serial(f, {1.0, 2.0}, {0.1, 0.9}), NumericalError);
}

TEST_CASE("potential step: parallel equals serial and conserves norm") {
  set_workers(4);
  const int n = 4096;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Eigen::VectorXcd u(n), v(n);
  Eigen::VectorXd vu(n), vg(n), w(n), absorb(n);
  for (int i = 0; i < n; ++i) {
    u[i] = {g(rng), g(rng)};
    v[i] = {g(rng), g(rng)};
    vu[i] = 1e-3 * g(rng);
    vg[i] = 1e-3 * g(rng);
    w[i] = 1e-4 * g(rng);
    absorb[i] = i > 3 * n / 4 ? 1e-3 * (i - 3 * n / 4) / (n / 4.0) : 0.0;
  }
  const double h = 0.05, dt = 2.0;
  const double before = (u.squaredNorm() + v.squaredNorm()) * h;
  Eigen::VectorXcd us = u, vs = v, up = u, vp = v;
  const double lost_s = potential_step_serial(us, vs, vu, vg, w, absorb, dt, h);
  const double lost_p = potential_step_parallel(up, vp, vu, vg, w, absorb, dt, h);
  CHECK((us - up).cwiseAbs().maxCoeff() == 0.0);
  CHECK((vs - vp).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(lost_s - lost_p) <= 1e-12 * lost_s);
  const double after = (us.squaredNorm() + vs.squaredNorm()) * h;
  CHECK(std::abs(before - after - lost_s) < 1e-12 * before);

  // without absorption the 2x2 exponential is unitary
  Eigen::VectorXcd a = u, b = v;
  CHECK(potential_step_serial(a, b, vu, vg, w, Eigen::VectorXd::Zero(n), dt, h) == 0.0);
  CHECK(std::abs((a.squaredNorm() + b.squaredNorm()) * h - before) < 1e-12 * before);

  // against the matrix exponential at one point
  const double x = vu[9], y = vg[9], c = w[9];
  Eigen::Matrix2cd hm;
  hm << x, c, c, y;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(hm);
  const Eigen::Matrix2cd prop = es.eigenvectors() *
                                es.eigenvalues().unaryExpr([&](double e) { return std::polar(1.0, -dt * e); }).asDiagonal() *
                                es.eigenvectors().adjoint();
  const Eigen::Vector2cd expect = prop * Eigen::Vector2cd(u[9], v[9]);
  CHECK(std::abs(a[9] - expect[0]) < 1e-14);
  CHECK(std::abs(b[9] - expect[1]) < 1e-14);
}

TEST_CASE("worker count from the environment") {
  unsetenv("FLOQEP_WORKERS");
  CHECK(workers_from_environment() == 0);
  setenv("FLOQEP_WORKERS", "3", 1);
  CHECK(workers_from_environment() == 3);
  for (const char *bad : {"0", "-2", "three", "4x"}) {
    setenv("FLOQEP_WORKERS", bad, 1);
    CHECK_THROWS_AS(workers_from_environment(), ConfigError);
  }
  unsetenv("FLOQEP_WORKERS");
}
