#include "qtraj/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qtraj {

namespace {

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

} // namespace

std::string to_string(MeasurementAxis axis) {
  return axis == MeasurementAxis::Z ? "z" : "phi";
}

MeasurementAxis axis_from_string(const std::string& name) {
  if (name == "z" || name == "Z") return MeasurementAxis::Z;
  if (name == "phi" || name == "PHI") return MeasurementAxis::PHI;
  throw DomainError("unknown measurement axis '" + name + "' (expected z or phi)");
}

double BlochVector::norm() const { return std::sqrt(norm_squared()); }

bool BlochVector::is_finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

bool BlochVector::is_physical() const {
  return is_finite() && norm_squared() <= 1.0 + kBlochTolerance;
}

void require_physical(const BlochVector& q, const char* what) {
  if (!q.is_physical()) {
    throw DomainError(std::string(what) + ": Bloch vector outside the unit ball or not finite");
  }
}

double MeasurementConfig::a() const { return std::sqrt(tau / dt); }

double MeasurementConfig::Gamma_ensemble() const { return Gamma_meas + 1.0 / T2star; }

double MeasurementConfig::rabi_angle(double duration) const {
  return (flip_rabi_sense ? -1.0 : 1.0) * Omega * duration;
}

MeasurementConfig MeasurementConfig::with_dt(double new_dt) const {
  require(new_dt > 0.0 && std::isfinite(new_dt), "step duration must be positive");
  MeasurementConfig c = *this;
  c.dt = new_dt;
  c.S = 4.0 * new_dt / tau;
  return c;
}

void MeasurementConfig::validate() const {
  require(eta_m > 0.0 && eta_m <= 1.0, "eta_m must lie in (0, 1]");
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive and finite");
  require(tau > 0.0 && std::isfinite(tau), "tau must be positive and finite");
  require(chi_over_kappa > 0.0 && nbar > 0.0 && kappa > 0.0,
          "chi/kappa, nbar and kappa must be positive");
  require(T2star > 0.0, "T2star must be positive");
  require(std::isfinite(Omega) && Omega >= 0.0, "Omega must be finite and non-negative");
  const double k2 = chi_over_kappa * chi_over_kappa;
  require(close_rel(S, 64.0 * k2 * kappa * nbar * eta_m * dt, 1e-9), "S inconsistent with physical parameters");
  require(close_rel(tau, 4.0 * dt / S, 1e-9), "tau inconsistent with S");
  require(close_rel(Gamma_meas, 8.0 * k2 * kappa * nbar, 1e-9), "Gamma_meas inconsistent");
  require(close_rel(1.0 / (2.0 * tau), eta_m * Gamma_meas, 1e-9), "1/(2 tau) != eta_m Gamma_meas");
  require(gamma >= 0.0 && close_rel(gamma, Gamma_meas * (1.0 - eta_m) + 1.0 / T2star, 1e-9),
          "gamma inconsistent with Gamma_meas, eta_m and T2star");
}

MeasurementConfig config_from_physical(double chi_over_kappa, double nbar, double eta_m,
                                       double kappa, double dt, double T2star,
                                       double Omega, MeasurementAxis axis) {
  require(chi_over_kappa > 0.0 && std::isfinite(chi_over_kappa), "chi/kappa must be positive");
  require(nbar > 0.0 && std::isfinite(nbar), "nbar must be positive (no photons, no measurement)");
  require(eta_m > 0.0 && eta_m <= 1.0, "eta_m must lie in (0, 1]");
  require(kappa > 0.0 && std::isfinite(kappa), "kappa must be positive");
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
  require(T2star > 0.0, "T2star must be positive");
  require(std::isfinite(Omega) && Omega >= 0.0, "Omega must be finite and non-negative");

  MeasurementConfig c;
  c.chi_over_kappa = chi_over_kappa;
  c.nbar = nbar;
  c.eta_m = eta_m;
  c.kappa = kappa;
  c.dt = dt;
  c.T2star = T2star;
  c.Omega = Omega;
  c.axis = axis;
  const double k2 = chi_over_kappa * chi_over_kappa;
  c.S = 64.0 * k2 * kappa * nbar * eta_m * dt;
  c.tau = 4.0 * dt / c.S;
  c.Gamma_meas = 8.0 * k2 * kappa * nbar;
  c.gamma = c.Gamma_meas * (1.0 - eta_m) + 1.0 / T2star;
  return c;
}

MeasurementConfig config_from_timescale(double tau, double dt, double eta_m, double T2star,
                                        double Omega, MeasurementAxis axis,
                                        double chi_over_kappa, double kappa) {
  require(tau > 0.0 && std::isfinite(tau), "tau must be positive and finite");
  require(eta_m > 0.0 && eta_m <= 1.0, "eta_m must lie in (0, 1]");
  require(chi_over_kappa > 0.0 && kappa > 0.0, "chi/kappa and kappa must be positive");
  // 1/(2 tau) = eta_m * 8 (chi/kappa)^2 kappa nbar
  const double nbar = 1.0 / (2.0 * tau * eta_m * 8.0 * chi_over_kappa * chi_over_kappa * kappa);
  MeasurementConfig c = config_from_physical(chi_over_kappa, nbar, eta_m, kappa, dt, T2star, Omega, axis);
  // Pin tau to the requested value; the recomputed one differs by round-off only.
  c.tau = tau;
  c.S = 4.0 * dt / tau;
  c.Gamma_meas = 1.0 / (2.0 * tau * eta_m);
  c.gamma = c.Gamma_meas * (1.0 - eta_m) + 1.0 / T2star;
  return c;
}

double phase_shift(const MeasurementConfig& config) { return 4.0 * config.chi_over_kappa; }

double MeasurementRecord::mean() const {
  if (samples.empty()) return 0.0;
  return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

void MeasurementRecord::validate() const {
  require(!samples.empty(), "measurement record is empty");
  require(dt > 0.0 && std::isfinite(dt), "record dt must be positive");
  for (double r : samples) require(std::isfinite(r), "measurement record contains a non-finite sample");
}

double Trajectory::dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }

void Trajectory::validate() const {
  require(states.size() == times.size(), "trajectory states and times differ in length");
  require(!states.empty(), "trajectory is empty");
  const double step = dt();
  for (std::size_t k = 1; k < times.size(); ++k) {
    require(times[k] > times[k - 1], "trajectory times not strictly increasing");
    require(std::abs((times[k] - times[k - 1]) - step) <= 1e-9 * std::abs(step) + 1e-18,
            "trajectory times not uniformly spaced");
  }
  for (const auto& q : states) require_physical(q, "trajectory state");
}

std::vector<double> time_grid(std::size_t n_points, double dt) {
  std::vector<double> t(n_points);
  for (std::size_t k = 0; k < n_points; ++k) t[k] = static_cast<double>(k) * dt;
  return t;
}

HermitianMatrix2 HermitianMatrix2::from_bloch(const BlochVector& q) {
  // rho = (I + x sx + y sy + z sz) / 2
  return {0.5 * (1.0 + q.z), std::complex<double>(0.5 * q.x, -0.5 * q.y), 0.5 * (1.0 - q.z)};
}

HermitianMatrix2 HermitianMatrix2::from_matrix(const Eigen::Matrix2cd& m) {
  return {m(0, 0).real(), 0.5 * (m(0, 1) + std::conj(m(1, 0))), m(1, 1).real()};
}

std::pair<double, double> HermitianMatrix2::eigenvalues() const {
  const double mean = 0.5 * (a_ + d_);
  const double half_diff = 0.5 * (a_ - d_);
  const double radius = std::sqrt(half_diff * half_diff + std::norm(b_));
  return {mean - radius, mean + radius};
}

Eigen::Matrix2cd HermitianMatrix2::matrix() const {
  Eigen::Matrix2cd m;
  m << a_, b_, std::conj(b_), d_;
  return m;
}

BlochVector HermitianMatrix2::to_bloch() const {
  const double tr = trace();
  return {2.0 * b_.real() / tr, -2.0 * b_.imag() / tr, (a_ - d_) / tr};
}

} // namespace qtraj
