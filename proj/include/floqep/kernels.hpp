#pragma once

#include "floqep/units.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

namespace floqep {

using GapFunction = std::function<double(const LaserPoint &)>;

/// Evaluate f on the tensor grid lambdas x intensities; result(i, j) is
/// f({lambdas[i], intensities[j]}). The parallel version distributes points
/// over OpenMP threads and must give identical results.
Eigen::MatrixXd scan_grid_serial(const GapFunction &f, const std::vector<double> &lambdas,
                                 const std::vector<double> &intensities);
Eigen::MatrixXd scan_grid_parallel(const GapFunction &f, const std::vector<double> &lambdas,
                                   const std::vector<double> &intensities);

/// One potential half-step of the two-channel split-operator propagator:
/// at every grid point psi <- exp(-i dt H(R)) psi with the symmetric 2x2
/// H = [[vu, w], [w, vg]] exponentiated exactly, followed by the absorber
/// damping exp(-dt * absorb). Returns the norm removed by the absorber.
double potential_step_serial(Eigen::Ref<Eigen::VectorXcd> psi_u, Eigen::Ref<Eigen::VectorXcd> psi_g,
                             const Eigen::VectorXd &vu, const Eigen::VectorXd &vg, const Eigen::VectorXd &w,
                             const Eigen::VectorXd &absorb, double dt, double spacing);
double potential_step_parallel(Eigen::Ref<Eigen::VectorXcd> psi_u, Eigen::Ref<Eigen::VectorXcd> psi_g,
                               const Eigen::VectorXd &vu, const Eigen::VectorXd &vg, const Eigen::VectorXd &w,
                               const Eigen::VectorXd &absorb, double dt, double spacing);

/// Worker count from FLOQEP_WORKERS, or 0 when unset (OpenMP default).
int workers_from_environment();
void set_workers(int workers);

} // namespace floqep
