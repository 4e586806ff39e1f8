#include "floqep/eigensolve.hpp"

#include "floqep/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace floqep {

bool c_normalize(Eigen::VectorXcd &v) {
  const double norm2 = v.squaredNorm();
  if (norm2 == 0.0) return false;
  const cplx s = c_product(v, v);
  if (std::abs(s) < 1e-13 * norm2) {
    v /= std::sqrt(norm2);
    return false;
  }
  v /= std::sqrt(s);
  return true;
}

double hermitian_overlap(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(a.dot(b)) / (na * nb);
}

DenseSpectrum dense_eigensystem(const Eigen::MatrixXcd &a, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXcd work = a;
  DenseSpectrum out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
      reinterpret_cast<lapack_complex_double *>(work.data()), n,
      reinterpret_cast<lapack_complex_double *>(out.values.data()), nullptr, 1,
      want_vectors ? reinterpret_cast<lapack_complex_double *>(out.vectors.data()) : nullptr,
      want_vectors ? n : 1);
  if (info != 0) {
    std::ostringstream msg;
    msg << "zgeev failed (info=" << info << ", dimension " << n
        << ", max |a_ij| = " << a.cwiseAbs().maxCoeff() << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

std::vector<Eigenpair> shift_invert(const Eigen::MatrixXcd &a, cplx shift, int count,
                                    const std::vector<Eigen::VectorXcd> &guesses, double tolerance,
                                    int max_iterations) {
  const auto ritz = ritz_refine(a, shift, count, guesses, max_iterations);
  const double scale = a.cwiseAbs().maxCoeff();
  std::vector<Eigenpair> result;
  for (const auto &r : ritz) {
    if (r.residual > tolerance * scale) {
      std::ostringstream msg;
      msg << "shift-invert did not converge near " << shift << " (dimension " << a.rows() << ", residual "
          << r.residual << ")";
      throw NumericalError(msg.str());
    }
    Eigenpair p{r.value, r.vector};
    c_normalize(p.vector);
    result.push_back(std::move(p));
  }
  return result;
}

} // namespace floqep

namespace floqep {

std::vector<RitzPair> ritz_refine(const Eigen::MatrixXcd &a, cplx shift, int count,
                                  const std::vector<Eigen::VectorXcd> &guesses, int max_iterations,
                                  double tolerance) {
  const Eigen::Index n = a.rows();
  const int block = std::min<int>(static_cast<int>(n), 2 * count + 4);
  count = std::min(count, block);
  Eigen::MatrixXcd shifted = a;
  shifted.diagonal().array() -= shift;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);

  Eigen::MatrixXcd v(n, block);
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  for (int j = 0; j < block; ++j) {
    if (j < static_cast<int>(guesses.size()) && guesses[j].size() == n)
      v.col(j) = guesses[j];
    else
      for (Eigen::Index i = 0; i < n; ++i) v(i, j) = {gauss(rng), gauss(rng)};
  }

  // Snapshot with the most pairs below the floor, then the smallest worst
  // residual. Candidates at the edge of the block can swap between
  // iterations and never settle, so iteration stops once the converged count
  // has not grown for a while.
  std::vector<RitzPair> best;
  int best_converged = -1;
  double best_worst = std::numeric_limits<double>::infinity();
  const double floor = tolerance * a.cwiseAbs().maxCoeff();
  int stalled = 0;
  const int stall_limit = 30;
  const int settle_limit = 8;
  int since_growth = 0;
  for (int it = 0; it < max_iterations && stalled < stall_limit; ++it) {
    if (n > block) v = lu.solve(v);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
    v = qr.householderQ() * Eigen::MatrixXcd::Identity(n, block);
    // project the shifted operator so the small matrix carries only the local scale
    const Eigen::MatrixXcd av = shifted * v;
    const Eigen::MatrixXcd small = v.adjoint() * av;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(small);
    if (es.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz eigensolve failed");

    std::vector<int> order(block);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return std::abs(es.eigenvalues()[x]) < std::abs(es.eigenvalues()[y]); });

    std::vector<RitzPair> cur;
    double worst = 0.0;
    int converged = 0;
    for (int k = 0; k < count; ++k) {
      const int j = order[k];
      const Eigen::VectorXcd y = es.eigenvectors().col(j);
      Eigen::VectorXcd x = v * y;
      const double len = x.norm();
      x /= len;
      const cplx theta = es.eigenvalues()[j];
      const double r = (av * y / len - theta * x).norm();
      worst = std::max(worst, r);
      if (r <= floor) ++converged;
      cur.push_back({theta + shift, x, r});
    }
    stalled = worst < 0.99 * best_worst ? 0 : stalled + 1;
    since_growth = converged > best_converged ? 0 : since_growth + 1;
    if (converged > best_converged || (converged == best_converged && worst < best_worst)) {
      best_converged = std::max(best_converged, converged);
      best_worst = worst;
      best = std::move(cur);
    }
    if (n <= block || best_converged == count) break;
    if (best_converged > 0 && since_growth >= settle_limit) break;
    Eigen::MatrixXcd ritz(n, block);
    for (int k = 0; k < block; ++k) ritz.col(k) = v * es.eigenvectors().col(order[k]);
    v = ritz;
  }
  return best;
}

} // namespace floqep
