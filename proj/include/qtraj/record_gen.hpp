#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "qtraj/core.hpp"
#include "qtraj/random.hpp"

namespace qtraj {

/// Largest Rabi angle allowed per update step.
inline constexpr double kMaxRabiAnglePerStep = 0.1;

struct GeneratorSettings {
  MeasurementConfig config;
  std::size_t n_steps = 0;
  std::uint64_t seed = 0;
  std::size_t substeps_per_dt = 1;
  std::optional<double> T1; // s; absent means no relaxation
  BlochVector initial_state{0.0, 0.0, 1.0};

  double substep() const { return config.dt / static_cast<double>(substeps_per_dt); }
  void validate() const;
};

struct GeneratedRecord {
  MeasurementRecord record;
  /// The conditioned state after every dt, starting with the initial state.
  Trajectory truth;
};

/// Samples one step outcome for the state q at the step resolution of config:
/// branch +/-1 with probability (1 +/- z)/2 plus Gaussian noise of variance
/// tau/dt (z-measurement), or pure zero-centred noise (phi-measurement).
double sample_outcome(const BlochVector& q, const MeasurementConfig& config, Rng& rng);

/// Simulates the measured qubit at substep resolution and emits the
/// dt-averaged record together with the ground-truth trajectory.
GeneratedRecord generate_record(const GeneratorSettings& settings);

/// Same as generate_record but draws from a caller-owned generator.
GeneratedRecord generate_record(const GeneratorSettings& settings, Rng& rng);

/// Amplitude damping toward the ground pole z = +1 over a duration dt.
BlochVector relax_map(const BlochVector& q, double dt, double T1);

} // namespace qtraj
