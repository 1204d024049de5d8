#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "qtraj/core.hpp"
#include "qtraj/random.hpp"
#include "qtraj/record_gen.hpp"

namespace qtraj {

enum class TomographyAxis { X, Y, Z };

char to_char(TomographyAxis axis);
TomographyAxis tomography_axis_from_char(char c);

/// One experimental iteration: a weak record of k steps, then a pre-rotated
/// projective readout.
struct TomographyShot {
  MeasurementRecord record;
  TomographyAxis axis = TomographyAxis::Z;
  int outcome = +1;
};

/// Pre-rotation that brings the chosen axis onto +z before readout: a quarter
/// turn about y for x, a quarter turn about x for y, identity for z.
BlochVector tomography_prerotation(const BlochVector& q, TomographyAxis axis);

/// Projective readout after the pre-rotation: +1 with probability (1 + q_axis)/2.
int projective_sample(const BlochVector& q, TomographyAxis axis, Rng& rng);

/// Thrown when a conditioned sub-ensemble is too small to estimate from.
class InsufficientStatistics : public std::runtime_error {
public:
  InsufficientStatistics(const std::string& what, std::size_t count)
      : std::runtime_error(what), count_(count) {}
  std::size_t count() const { return count_; }

private:
  std::size_t count_;
};

/// Keeps shots whose time-averaged record lies in center +/- eps.
struct ScalarWindow {
  double center = 0.0;
  double eps = 0.05;
};

/// Keeps shots whose reconstructed (x, z) at step k lies within eps of the
/// target; y is assumed zero and not checked.
struct MatchingWindow {
  BlochVector target;
  double eps = 0.05;
  MeasurementConfig config;
  BlochVector initial{0.0, 0.0, 1.0};
};

struct Unconditioned {};

using TomographyCondition = std::variant<Unconditioned, ScalarWindow, MatchingWindow>;

struct TomographyEstimate {
  BlochVector mean;
  BlochVector standard_error;
  std::array<std::size_t, 3> counts{}; // x, y, z
  double eps = 0.0;                    // window half-width, 0 if unconditioned
};

/// Per-axis mean outcome over the shots with a k-step record that satisfy the
/// condition. Throws InsufficientStatistics if any axis is left without shots.
TomographyEstimate conditional_tomography(const std::vector<TomographyShot>& shots,
                                          const TomographyCondition& condition, std::size_t k);

struct AdaptedWindow {
  ScalarWindow window;
  bool widened = false;
};

/// Doubles eps until every axis holds at least min_per_axis shots with k-step
/// records. Throws InsufficientStatistics if even the full range falls short.
AdaptedWindow adapt_scalar_window(const std::vector<TomographyShot>& shots, double center, double eps,
                                  std::size_t k, std::size_t min_per_axis = 200);

/// n_per_axis shots per tomography axis, each with a gen.n_steps record.
/// Shot i is seeded by derive_seed(seed, i); deterministic for any thread count.
std::vector<TomographyShot> generate_shots(const GeneratorSettings& gen, std::size_t n_per_axis,
                                           std::uint64_t seed, unsigned threads = 0);

} // namespace qtraj
