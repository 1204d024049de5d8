#include "qtraj/measurement_model.hpp"

#include <algorithm>
#include <cmath>

namespace qtraj {

namespace {

double gaussian(double r, double centre, double variance) {
  const double d = r - centre;
  return std::exp(-d * d / (2.0 * variance)) / std::sqrt(2.0 * kPi * variance);
}

// log(cosh(v)) without overflow.
double log_cosh(double v) {
  const double av = std::abs(v);
  return av + std::log1p(std::exp(-2.0 * av)) - std::log(2.0);
}

} // namespace

double povm_weight(double r, int eigen, const MeasurementConfig& config) {
  return gaussian(r, static_cast<double>(eigen), config.tau / config.dt);
}

double phi_outcome_density(double r, const MeasurementConfig& config) {
  return gaussian(r, 0.0, config.tau / config.dt);
}

double marginal_density(const BlochVector& q, double r, const MeasurementConfig& config) {
  if (config.axis == MeasurementAxis::PHI) return phi_outcome_density(r, config);
  const double p0 = 0.5 * (1.0 + q.z);
  const double p1 = 0.5 * (1.0 - q.z);
  return p0 * povm_weight(r, +1, config) + p1 * povm_weight(r, -1, config);
}

BlochVector update_z(const BlochVector& q, double r, const MeasurementConfig& config) {
  const double damping = std::exp(-config.gamma * config.dt);
  const double p0 = std::clamp(0.5 * (1.0 + q.z), 0.0, 1.0);
  const double p1 = std::clamp(0.5 * (1.0 - q.z), 0.0, 1.0);
  if (p0 == 0.0 || p1 == 0.0) {
    // Eigenstate: the measurement is QND, only residual coherence decays.
    return {q.x * damping, q.y * damping, q.z};
  }
  // h = atanh(z) is half the log-odds log(rho00/rho11); each step shifts it by r dt/tau.
  const double h = 0.5 * (std::log(p0) - std::log(p1));
  const double h_new = h + r * config.dt / config.tau;
  // sqrt(1 - z'^2) / sqrt(1 - z^2) = cosh(h) / cosh(h')
  const double coherence_ratio = std::exp(log_cosh(h) - log_cosh(h_new)) * damping;
  return {q.x * coherence_ratio, q.y * coherence_ratio, std::tanh(h_new)};
}

BlochVector update_phi(const BlochVector& q, double r, const MeasurementConfig& config) {
  const double damping = std::exp(-config.gamma * config.dt);
  const double angle = r * config.dt / config.tau;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {(q.x * c + q.y * s) * damping, (q.y * c - q.x * s) * damping, q.z};
}

BlochVector bayes_update(const BlochVector& q, double r, const MeasurementConfig& config) {
  return config.axis == MeasurementAxis::Z ? update_z(q, r, config) : update_phi(q, r, config);
}

BlochVector rabi_rotate(const BlochVector& q, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {q.x * c + q.z * s, q.y, q.z * c - q.x * s};
}

} // namespace qtraj
