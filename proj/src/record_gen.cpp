#include "qtraj/record_gen.hpp"

#include <cmath>
#include <string>

#include "qtraj/measurement_model.hpp"

namespace qtraj {

void GeneratorSettings::validate() const {
  config.validate();
  if (n_steps == 0) throw DomainError("generator needs at least one step");
  if (substeps_per_dt == 0) throw DomainError("substeps_per_dt must be at least 1");
  const double step = substep();
  if (config.Omega > 0.0 && config.Omega * step > kMaxRabiAnglePerStep * (1.0 + 1e-12)) {
    throw DomainError("Rabi angle per substep " + std::to_string(config.Omega * step) +
                      " rad exceeds 0.1 rad; increase substeps_per_dt");
  }
  if (substeps_per_dt > 1 && step > config.tau / 10.0 * (1.0 + 1e-12)) {
    throw DomainError("substep exceeds tau/10; increase substeps_per_dt");
  }
  if (T1 && !(*T1 > 0.0)) throw DomainError("T1 must be positive");
  require_physical(initial_state, "generator initial state");
}

double sample_outcome(const BlochVector& q, const MeasurementConfig& config, Rng& rng) {
  const double sigma = config.a();
  if (config.axis == MeasurementAxis::PHI) return sigma * standard_normal(rng);
  const double p_ground = 0.5 * (1.0 + q.z);
  const double branch = uniform01(rng) < p_ground ? 1.0 : -1.0;
  return branch + sigma * standard_normal(rng);
}

GeneratedRecord generate_record(const GeneratorSettings& settings) {
  Rng rng(settings.seed);
  return generate_record(settings, rng);
}

GeneratedRecord generate_record(const GeneratorSettings& settings, Rng& rng) {
  settings.validate();
  const MeasurementConfig sub = settings.config.with_dt(settings.substep());
  const double angle = sub.rabi_angle(sub.dt);
  const bool drive = settings.config.Omega > 0.0;

  GeneratedRecord out;
  out.record.dt = settings.config.dt;
  out.record.seed = settings.seed;
  out.record.axis = settings.config.axis;
  out.record.samples.reserve(settings.n_steps);
  out.truth.states.reserve(settings.n_steps + 1);
  out.truth.times = time_grid(settings.n_steps + 1, settings.config.dt);

  BlochVector q = settings.initial_state;
  out.truth.states.push_back(q);
  for (std::size_t k = 0; k < settings.n_steps; ++k) {
    double sum = 0.0;
    for (std::size_t s = 0; s < settings.substeps_per_dt; ++s) {
      const double r = sample_outcome(q, sub, rng);
      sum += r;
      q = bayes_update(q, r, sub);
      if (drive) q = rabi_rotate(q, angle);
      if (settings.T1) q = relax_map(q, sub.dt, *settings.T1);
    }
    out.record.samples.push_back(sum / static_cast<double>(settings.substeps_per_dt));
    out.truth.states.push_back(q);
  }
  return out;
}

BlochVector relax_map(const BlochVector& q, double dt, double T1) {
  if (!(T1 > 0.0)) throw DomainError("T1 must be positive");
  const double decay = std::exp(-dt / T1);
  const double half = std::exp(-dt / (2.0 * T1));
  return {q.x * half, q.y * half, 1.0 - (1.0 - q.z) * decay};
}

} // namespace qtraj
