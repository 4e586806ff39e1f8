#include "floqep/dvr.hpp"

#include "floqep/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>

namespace floqep {

SineDvr::SineDvr(double r_min, double r_max, int points) : r_min_(r_min), r_max_(r_max) {
  if (!(r_max > r_min)) throw DomainError("grid extents must be ordered");
  if (points < 2) throw DomainError("sine DVR needs at least two points");
  spacing_ = (r_max - r_min) / (points + 1);
  nodes_.resize(points);
  for (int i = 0; i < points; ++i) nodes_[i] = r_min + spacing_ * (i + 1);
}

Eigen::MatrixXd SineDvr::transform() const {
  const int n = size();
  const double np1 = n + 1;
  const double norm = std::sqrt(2.0 / np1);
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      c(i, k) = norm * std::sin(std::numbers::pi * (i + 1) * (k + 1) / np1);
  return c;
}

Eigen::MatrixXd SineDvr::kinetic(double mass) const {
  const int n = size();
  const double np1 = n + 1;
  const double pi = std::numbers::pi;
  const double pref = 1.0 / (2.0 * mass * spacing_ * spacing_) * (pi * pi) / (2.0 * np1 * np1);
  Eigen::MatrixXd t(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) {
        const double s = std::sin(pi * i / np1);
        t(i - 1, j - 1) = pref * ((2.0 * np1 * np1 + 1.0) / 3.0 - 1.0 / (s * s));
      } else {
        const double sm = std::sin(pi * (i - j) / (2.0 * np1));
        const double sp = std::sin(pi * (i + j) / (2.0 * np1));
        const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
        t(i - 1, j - 1) = pref * sign * (1.0 / (sm * sm) - 1.0 / (sp * sp));
      }
    }
  }
  return t;
}

Eigen::MatrixXd SineDvr::basis_derivatives(const Eigen::VectorXd &x) const {
  const int n = size();
  const double length = r_max_ - r_min_;
  const double pi = std::numbers::pi;
  // dphi_k/dx at each x, then rotate into the DVR basis.
  Eigen::MatrixXd dphi(n, x.size());
  const double norm = std::sqrt(2.0 / length);
  for (int q = 0; q < x.size(); ++q)
    for (int k = 1; k <= n; ++k) {
      const double kk = k * pi / length;
      dphi(k - 1, q) = norm * kk * std::cos(kk * (x[q] - r_min_));
    }
  return transform() * dphi;
}

bool ScalingSpec::active() const {
  switch (kind) {
  case ScalingKind::none: return false;
  case ScalingKind::exterior: return angle > 0.0;
  case ScalingKind::absorbing: return cap_strength > 0.0;
  }
  return false;
}

void RadialGrid::validate() const {
  if (dvr.size() < 200) throw DomainError("radial grid needs at least 200 points");
  if (scaling.kind == ScalingKind::none) return;
  if (!(scaling.onset > dvr.r_min() && scaling.onset < dvr.r_max()))
    throw DomainError("scaling onset must lie inside the grid");
  if (scaling.kind == ScalingKind::exterior) {
    if (!(scaling.angle >= 0.0 && scaling.angle < std::numbers::pi / 4))
      throw DomainError("scaling angle must lie in [0, pi/4)");
    if (!(scaling.switch_width > 0.0) || scaling.onset + scaling.switch_width >= dvr.r_max())
      throw DomainError("scaling switch must end inside the grid");
  } else {
    if (!(scaling.cap_strength >= 0.0) || !(scaling.cap_power >= 1.0))
      throw DomainError("absorbing potential needs strength >= 0 and power >= 1");
  }
}

double smoothstep5(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double smoothstep5_integral(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 0.5 + (x - 1.0);
  const double x4 = x * x * x * x;
  return x4 * (2.5 + x * (-3.0 + x));
}

ScaledKinetic::ScaledKinetic(const RadialGrid &grid, double mass) : grid_(grid), mass_(mass) {
  grid.validate();
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  const SineDvr &dvr = grid.dvr;
  const int n = dvr.size();
  const Eigen::VectorXd &r = dvr.nodes();
  const ScalingSpec &sc = grid.scaling;

  matrix_ = dvr.kinetic(mass).cast<std::complex<double>>();
  coordinates_ = r.cast<std::complex<double>>();
  absorber_ = Eigen::VectorXcd::Zero(n);

  if (sc.kind == ScalingKind::absorbing && sc.cap_strength > 0.0) {
    const double span = dvr.r_max() - sc.onset;
    for (int i = 0; i < n; ++i)
      if (r[i] > sc.onset)
        absorber_[i] = {0.0, -sc.cap_strength * std::pow((r[i] - sc.onset) / span, sc.cap_power)};
  }
  if (sc.kind != ScalingKind::exterior || sc.angle == 0.0) return;

  const std::complex<double> phase = std::polar(1.0, sc.angle) - 1.0;
  auto zprime = [&](double x) { return 1.0 + phase * smoothstep5((x - sc.onset) / sc.switch_width); };

  // Gauss-Legendre panels of one grid spacing over the scaled region.
  constexpr int kOrder = 10;
  using Gauss = boost::math::quadrature::gauss<double, kOrder>;
  const auto &abscissa = Gauss::abscissa();
  const auto &weights = Gauss::weights();
  std::vector<double> qx, qw;
  const int panels = static_cast<int>(std::ceil((dvr.r_max() - sc.onset) / dvr.spacing()));
  const double h = (dvr.r_max() - sc.onset) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = sc.onset + (p + 0.5) * h;
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
      // boost stores the non-negative half of a symmetric rule
      const double a = abscissa[k];
      qx.push_back(mid + 0.5 * h * a);
      qw.push_back(0.5 * h * weights[k]);
      if (a != 0.0) {
        qx.push_back(mid - 0.5 * h * a);
        qw.push_back(0.5 * h * weights[k]);
      }
    }
  }
  const Eigen::Map<const Eigen::VectorXd> x(qx.data(), static_cast<Eigen::Index>(qx.size()));
  const Eigen::MatrixXd du = dvr.basis_derivatives(x);
  Eigen::VectorXcd g(x.size());
  for (Eigen::Index q = 0; q < x.size(); ++q) g[q] = qw[q] * (1.0 / zprime(x[q]) - 1.0) / (2.0 * mass);
  const Eigen::MatrixXcd dug = du.cast<std::complex<double>>() * g.asDiagonal();
  matrix_ += dug * du.transpose().cast<std::complex<double>>();

  Eigen::VectorXcd inv_sqrt(n);
  for (int i = 0; i < n; ++i) {
    inv_sqrt[i] = 1.0 / std::sqrt(zprime(r[i]));
    const double s = smoothstep5_integral((r[i] - sc.onset) / sc.switch_width) * sc.switch_width;
    coordinates_[i] = r[i] + phase * s;
  }
  matrix_ = inv_sqrt.asDiagonal() * matrix_ * inv_sqrt.asDiagonal();
  // exact symmetry; the products above agree to rounding only
  const Eigen::MatrixXcd sym = 0.5 * (matrix_ + matrix_.transpose());
  matrix_ = sym;
}

} // namespace floqep
