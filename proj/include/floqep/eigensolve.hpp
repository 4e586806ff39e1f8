#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace floqep {

using cplx = std::complex<double>;

/// Bilinear (non-conjugating) product a^T b used for complex-symmetric operators.
inline cplx c_product(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b) {
  return (a.array() * b.array()).sum();
}

/// Scale v so that v^T v = 1. Returns false (and leaves v unit-norm instead)
/// when v is numerically self-orthogonal.
bool c_normalize(Eigen::VectorXcd &v);

/// |a^H b| / (|a| |b|); bounded by one, well defined at an exceptional point.
double hermitian_overlap(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b);

struct Eigenpair {
  cplx value;
  Eigen::VectorXcd vector; // c-normalized
};

struct DenseSpectrum {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors; // empty when not requested
};

/// Full non-Hermitian eigendecomposition (LAPACK zgeev).
DenseSpectrum dense_eigensystem(const Eigen::MatrixXcd &a, bool want_vectors);

/// Eigenpairs of `a` closest to `shift`, by block inverse iteration on
/// (a - shift)^{-1} with Rayleigh-Ritz extraction. `guesses` seed the block.
/// Throws when a residual stays above tolerance * max |a_ij|.
std::vector<Eigenpair> shift_invert(const Eigen::MatrixXcd &a, cplx shift, int count,
                                    const std::vector<Eigen::VectorXcd> &guesses = {},
                                    double tolerance = 1e-10, int max_iterations = 100);

struct RitzPair {
  cplx value;
  Eigen::VectorXcd vector; // unit 2-norm
  double residual = 0.0;   // |a x - value x|
};

/// Block inverse iteration (block 2 count + 4) on the `count` Ritz pairs
/// nearest the shift. Stops when all residuals fall below tolerance * max |a_ij|,
/// when the number below it has not grown for 8 iterations, or when the
/// residuals stop improving. Never throws on slow convergence; callers judge
/// the returned residuals. Ritz values come from the projection of a - shift,
/// which keeps near-defective pairs resolved to roundoff.
std::vector<RitzPair> ritz_refine(const Eigen::MatrixXcd &a, cplx shift, int count,
                                  const std::vector<Eigen::VectorXcd> &guesses = {},
                                  int max_iterations = 100, double tolerance = 1e-15);

} // namespace floqep
