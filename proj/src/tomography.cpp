#include "qtraj/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtraj/measurement_model.hpp"
#include "qtraj/parallel.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj {

char to_char(TomographyAxis axis) {
  switch (axis) {
    case TomographyAxis::X: return 'x';
    case TomographyAxis::Y: return 'y';
    case TomographyAxis::Z: return 'z';
  }
  return 'z';
}

TomographyAxis tomography_axis_from_char(char c) {
  switch (c) {
    case 'x': case 'X': return TomographyAxis::X;
    case 'y': case 'Y': return TomographyAxis::Y;
    case 'z': case 'Z': return TomographyAxis::Z;
    default: throw DomainError(std::string("unknown tomography axis '") + c + "'");
  }
}

BlochVector tomography_prerotation(const BlochVector& q, TomographyAxis axis) {
  switch (axis) {
    case TomographyAxis::X:
      // quarter turn about y carrying +x onto +z
      return rabi_rotate(q, -kPi / 2.0);
    case TomographyAxis::Y:
      // quarter turn about x carrying +y onto +z
      return {q.x, -q.z, q.y};
    case TomographyAxis::Z:
      return q;
  }
  return q;
}

int projective_sample(const BlochVector& q, TomographyAxis axis, Rng& rng) {
  const BlochVector rotated = tomography_prerotation(q, axis);
  return uniform01(rng) < 0.5 * (1.0 + rotated.z) ? +1 : -1;
}

namespace {

std::size_t axis_index(TomographyAxis a) { return static_cast<std::size_t>(a); }

bool shot_matches(const TomographyShot& shot, const TomographyCondition& condition, std::size_t k) {
  if (shot.record.size() != k) return false;
  if (std::holds_alternative<Unconditioned>(condition)) return true;
  if (const auto* w = std::get_if<ScalarWindow>(&condition)) {
    return std::abs(shot.record.mean() - w->center) <= w->eps;
  }
  const auto& m = std::get<MatchingWindow>(condition);
  const Trajectory t = reconstruct(shot.record, m.initial, m.config);
  const BlochVector& q = t.states[k];
  return std::abs(q.x - m.target.x) <= m.eps && std::abs(q.z - m.target.z) <= m.eps;
}

double condition_eps(const TomographyCondition& condition) {
  if (const auto* w = std::get_if<ScalarWindow>(&condition)) return w->eps;
  if (const auto* m = std::get_if<MatchingWindow>(&condition)) return m->eps;
  return 0.0;
}

std::array<std::size_t, 3> window_counts(const std::vector<TomographyShot>& shots, const ScalarWindow& w,
                                         std::size_t k) {
  std::array<std::size_t, 3> counts{};
  const TomographyCondition cond = w;
  for (const auto& s : shots) {
    if (shot_matches(s, cond, k)) ++counts[axis_index(s.axis)];
  }
  return counts;
}

} // namespace

TomographyEstimate conditional_tomography(const std::vector<TomographyShot>& shots,
                                          const TomographyCondition& condition, std::size_t k) {
  if (const auto* w = std::get_if<ScalarWindow>(&condition); w && !(w->eps > 0.0)) {
    throw DomainError("tomography window eps must be positive");
  }
  if (const auto* m = std::get_if<MatchingWindow>(&condition); m && !(m->eps > 0.0)) {
    throw DomainError("tomography window eps must be positive");
  }
  std::array<double, 3> sum{};
  std::array<double, 3> sum_sq{};
  TomographyEstimate est;
  est.eps = condition_eps(condition);
  for (const auto& shot : shots) {
    if (!shot_matches(shot, condition, k)) continue;
    const std::size_t a = axis_index(shot.axis);
    sum[a] += shot.outcome;
    sum_sq[a] += 1.0;
    ++est.counts[a];
  }
  double mean[3];
  double se[3];
  for (std::size_t a = 0; a < 3; ++a) {
    const std::size_t n = est.counts[a];
    if (n == 0) {
      throw InsufficientStatistics("no shots satisfy the condition for tomography axis " +
                                       std::string(1, to_char(static_cast<TomographyAxis>(a))) +
                                       " at step " + std::to_string(k),
                                   est.counts[0] + est.counts[1] + est.counts[2]);
    }
    const double nn = static_cast<double>(n);
    mean[a] = sum[a] / nn;
    const double var = n > 1 ? std::max(0.0, (sum_sq[a] - nn * mean[a] * mean[a]) / (nn - 1.0)) : 0.0;
    se[a] = std::sqrt(var / nn);
  }
  est.mean = {mean[0], mean[1], mean[2]};
  est.standard_error = {se[0], se[1], se[2]};
  return est;
}

AdaptedWindow adapt_scalar_window(const std::vector<TomographyShot>& shots, double center, double eps,
                                  std::size_t k, std::size_t min_per_axis) {
  if (!(eps > 0.0)) throw DomainError("tomography window eps must be positive");
  AdaptedWindow out{{center, eps}, false};
  double widest = 0.0;
  for (const auto& s : shots) {
    if (s.record.size() == k) widest = std::max(widest, std::abs(s.record.mean() - center));
  }
  for (;;) {
    const auto counts = window_counts(shots, out.window, k);
    const std::size_t least = std::min({counts[0], counts[1], counts[2]});
    if (least >= min_per_axis) return out;
    if (out.window.eps > widest) {
      throw InsufficientStatistics("fewer than " + std::to_string(min_per_axis) +
                                       " shots per axis even with the widest window",
                                   least);
    }
    out.window.eps *= 2.0;
    out.widened = true;
  }
}

std::vector<TomographyShot> generate_shots(const GeneratorSettings& gen, std::size_t n_per_axis,
                                           std::uint64_t seed, unsigned threads) {
  gen.validate();
  const std::size_t total = 3 * n_per_axis;
  std::vector<TomographyShot> shots(total);
  constexpr std::size_t chunk = 256;
  const std::size_t n_chunks = (total + chunk - 1) / chunk;
  parallel_chunks(n_chunks, threads, [&](std::size_t c) {
    const std::size_t end = std::min(total, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      GeneratorSettings s = gen;
      s.seed = derive_seed(seed, i);
      Rng rng(s.seed);
      GeneratedRecord g = generate_record(s, rng);
      const auto axis = static_cast<TomographyAxis>(i / n_per_axis);
      const int outcome = projective_sample(g.truth.states.back(), axis, rng);
      shots[i] = TomographyShot{std::move(g.record), axis, outcome};
    }
  });
  return shots;
}

} // namespace qtraj
