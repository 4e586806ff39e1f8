#include "floqep/kernels.hpp"

#include "floqep/errors.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>

namespace floqep {

Eigen::MatrixXd scan_grid_serial(const GapFunction &f, const std::vector<double> &lambdas,
                                 const std::vector<double> &intensities) {
  Eigen::MatrixXd out(lambdas.size(), intensities.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    for (std::size_t j = 0; j < intensities.size(); ++j) out(i, j) = f({lambdas[i], intensities[j]});
  return out;
}

Eigen::MatrixXd scan_grid_parallel(const GapFunction &f, const std::vector<double> &lambdas,
                                   const std::vector<double> &intensities) {
  const long ni = static_cast<long>(lambdas.size());
  const long nj = static_cast<long>(intensities.size());
  Eigen::MatrixXd out(ni, nj);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < ni * nj; ++k) {
    const long i = k / nj, j = k % nj;
    try {
      out(i, j) = f({lambdas[i], intensities[j]});
    } catch (...) {
#pragma omp critical(floqep_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

// exp(-i dt [[a, c], [c, b]]) applied to (x, y), then damped.
inline double step_point(std::complex<double> &x, std::complex<double> &y, double a, double b, double c,
                         double damp) {
  const double mean = 0.5 * (a + b);
  const double half = 0.5 * (a - b);
  const double omega = std::hypot(half, c);
  const std::complex<double> phase = std::polar(1.0, -mean);
  double cs = 1.0, sn_over = 0.0;
  if (omega > 0.0) {
    cs = std::cos(omega);
    sn_over = std::sin(omega) / omega;
  } else {
    sn_over = 1.0;
  }
  const std::complex<double> mi(0.0, -1.0);
  const std::complex<double> u00 = cs + mi * sn_over * half;
  const std::complex<double> u11 = cs - mi * sn_over * half;
  const std::complex<double> u01 = mi * sn_over * c;
  const std::complex<double> nx = phase * (u00 * x + u01 * y);
  const std::complex<double> ny = phase * (u01 * x + u11 * y);
  const double before = std::norm(nx) + std::norm(ny);
  x = nx * damp;
  y = ny * damp;
  return before * (1.0 - damp * damp);
}

} // namespace

double potential_step_serial(Eigen::Ref<Eigen::VectorXcd> psi_u, Eigen::Ref<Eigen::VectorXcd> psi_g,
                             const Eigen::VectorXd &vu, const Eigen::VectorXd &vg, const Eigen::VectorXd &w,
                             const Eigen::VectorXd &absorb, double dt, double spacing) {
  double lost = 0.0;
  for (Eigen::Index i = 0; i < psi_u.size(); ++i)
    lost += step_point(psi_u[i], psi_g[i], dt * vu[i], dt * vg[i], dt * w[i], std::exp(-dt * absorb[i]));
  return lost * spacing;
}

double potential_step_parallel(Eigen::Ref<Eigen::VectorXcd> psi_u, Eigen::Ref<Eigen::VectorXcd> psi_g,
                               const Eigen::VectorXd &vu, const Eigen::VectorXd &vg, const Eigen::VectorXd &w,
                               const Eigen::VectorXd &absorb, double dt, double spacing) {
  const long n = static_cast<long>(psi_u.size());
  // per-point losses summed in index order keep the result bitwise equal to the serial sum
  Eigen::VectorXd lost(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    lost[i] = step_point(psi_u[i], psi_g[i], dt * vu[i], dt * vg[i], dt * w[i], std::exp(-dt * absorb[i]));
  double total = 0.0;
  for (long i = 0; i < n; ++i) total += lost[i];
  return total * spacing;
}

int workers_from_environment() {
  const char *env = std::getenv("FLOQEP_WORKERS");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    const int n = std::stoi(env, &used);
    if (used != std::string(env).size() || n < 1) throw ConfigError("FLOQEP_WORKERS", "must be a positive integer");
    return n;
  } catch (const std::logic_error &) {
    throw ConfigError("FLOQEP_WORKERS", "must be a positive integer");
  }
}

void set_workers(int workers) {
  if (workers > 0) omp_set_num_threads(workers);
}

} // namespace floqep
