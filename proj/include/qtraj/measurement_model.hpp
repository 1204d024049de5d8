#pragma once

#include "qtraj/core.hpp"

namespace qtraj {

/// Gaussian outcome density P(r | eigen) for one step of a z-measurement:
/// centre eigen (+1 for |0>, -1 for |1>), variance a^2 = tau/dt.
double povm_weight(double r, int eigen, const MeasurementConfig& config);

/// Density of a zero-centred outcome of variance tau/dt (phi-measurement).
double phi_outcome_density(double r, const MeasurementConfig& config);

/// Outcome density for the state q: the +/-1 mixture for z-measurements,
/// the state-independent zero-centred Gaussian for phi-measurements.
double marginal_density(const BlochVector& q, double r, const MeasurementConfig& config);

/// Bayesian update after a z-measurement outcome r over one step of config.dt.
///
/// Populations follow rho11/rho00 -> (rho11/rho00) exp(-2 r dt/tau), evaluated
/// in log-odds form. The coherence magnitude is rescaled by
/// sqrt(1 - z'^2) / sqrt(1 - z^2) and damped by exp(-gamma dt); its azimuthal
/// phase is kept. The poles z = +/-1 are fixed points.
BlochVector update_z(const BlochVector& q, double r, const MeasurementConfig& config);

/// Bayesian update after a phi-measurement outcome r: rotation about z by
/// -r dt/tau followed by damping of (x, y) by exp(-gamma dt). z is untouched.
BlochVector update_phi(const BlochVector& q, double r, const MeasurementConfig& config);

/// Dispatches on config.axis.
BlochVector bayes_update(const BlochVector& q, double r, const MeasurementConfig& config);

/// Rotation about the y axis: +z turns toward +x for theta > 0.
BlochVector rabi_rotate(const BlochVector& q, double theta);

} // namespace qtraj
