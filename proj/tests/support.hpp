#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qtraj/core.hpp"

namespace qtraj::testing {

inline MeasurementConfig tau_config(double tau, double dt, double eta = 1.0, double T2star = kInf,
                                    double Omega = 0.0, MeasurementAxis axis = MeasurementAxis::Z) {
  return config_from_timescale(tau, dt, eta, T2star, Omega, axis);
}

inline double gaussian_pdf(double x, double mean, double sd) {
  const double u = (x - mean) / sd;
  return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * kPi));
}

/// Integral of f over the real line, by adaptive Gauss-Kronrod on a window of
/// +/- 12 sd around `centre`.
inline double integrate_around(const std::function<double(double)>& f, double centre, double sd) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, centre - 12.0 * sd, centre + 12.0 * sd,
                                                                       15, 1e-14, &err);
}

/// E[g(r)] for r drawn from the z-measurement mixture of a state with
/// population difference z, computed branch by branch.
inline double mixture_expectation(const std::function<double(double)>& g, double z, double sd) {
  const double w0 = 0.5 * (1.0 + z);
  const double w1 = 0.5 * (1.0 - z);
  double total = 0.0;
  if (w0 > 0.0) total += w0 * integrate_around([&](double r) { return g(r) * gaussian_pdf(r, 1.0, sd); }, 1.0, sd);
  if (w1 > 0.0) total += w1 * integrate_around([&](double r) { return g(r) * gaussian_pdf(r, -1.0, sd); }, -1.0, sd);
  return total;
}

/// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
inline std::pair<double, double> binomial_interval(std::size_t successes, std::size_t trials, double alpha) {
  using boost::math::binomial_distribution;
  const double n = static_cast<double>(trials);
  const double k = static_cast<double>(successes);
  const double lo = binomial_distribution<>::find_lower_bound_on_p(n, k, alpha / 2.0);
  const double hi = binomial_distribution<>::find_upper_bound_on_p(n, k, alpha / 2.0);
  return {lo, hi};
}

/// Whether p lies in the (1 - alpha) Clopper-Pearson interval of successes / trials.
inline bool in_binomial_interval(double p, std::size_t successes, std::size_t trials, double alpha) {
  const auto [lo, hi] = binomial_interval(successes, trials, alpha);
  return p >= lo && p <= hi;
}

/// Two-sided normal quantile, e.g. 2.5758 for alpha = 0.01.
inline double normal_quantile(double alpha) {
  return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<>(), alpha / 2.0));
}

/// Unconditioned Bloch equations of a qubit under z-dephasing at rate
/// gamma_ens and a Rabi drive about y at angular rate omega (sign +1 carries
/// +z toward +x):
///   dx/dt = -gamma_ens x + s omega z,  dy/dt = -gamma_ens y,  dz/dt = -s omega x.
/// Integrated with classical RK4 at `substeps` per output step.
struct BlochOde {
  double gamma_ens = 0.0;
  double omega = 0.0;
  double sense = 1.0;

  std::array<double, 3> rhs(const std::array<double, 3>& q) const {
    return {-gamma_ens * q[0] + sense * omega * q[2], -gamma_ens * q[1], -sense * omega * q[0]};
  }

  std::array<double, 3> step(std::array<double, 3> q, double h) const {
    auto add = [](std::array<double, 3> a, const std::array<double, 3>& b, double s) {
      for (int i = 0; i < 3; ++i) a[i] += s * b[i];
      return a;
    };
    const auto k1 = rhs(q);
    const auto k2 = rhs(add(q, k1, h / 2));
    const auto k3 = rhs(add(q, k2, h / 2));
    const auto k4 = rhs(add(q, k3, h));
    for (int i = 0; i < 3; ++i) q[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return q;
  }

  std::array<double, 3> evolve(std::array<double, 3> q, double duration, int substeps) const {
    const double h = duration / substeps;
    for (int i = 0; i < substeps; ++i) q = step(q, h);
    return q;
  }
};

} // namespace qtraj::testing
