#include "qtraj/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtraj/measurement_model.hpp"

namespace qtraj {

Trajectory reconstruct(const MeasurementRecord& record, const BlochVector& initial,
                       const MeasurementConfig& config) {
  record.validate();
  config.validate();
  require_physical(initial, "reconstruction initial state");
  if (std::abs(record.dt - config.dt) > 1e-12 * config.dt) {
    throw DomainError("record dt does not match the configuration dt");
  }
  if (record.axis != config.axis) throw DomainError("record axis does not match the configuration axis");
  if (config.Omega > 0.0 && config.Omega * config.dt > kMaxRabiAnglePerStep * (1.0 + 1e-12)) {
    throw DomainError("two-step update needs Omega*dt <= 0.1 rad (got " +
                      std::to_string(config.Omega * config.dt) + ")");
  }
  const double angle = config.rabi_angle(config.dt);
  const bool drive = config.Omega > 0.0;

  Trajectory t;
  t.times = time_grid(record.size() + 1, config.dt);
  t.states.reserve(record.size() + 1);
  BlochVector q = initial;
  t.states.push_back(q);
  for (double r : record.samples) {
    q = bayes_update(q, r, config);
    if (drive) q = rabi_rotate(q, angle);
    t.states.push_back(q);
  }
  return t;
}

double component_of(const BlochVector& q, Component c) {
  switch (c) {
    case Component::X: return q.x;
    case Component::Y: return q.y;
    case Component::Z: return q.z;
  }
  return q.z;
}

Component component_from_char(char c) {
  switch (c) {
    case 'x': case 'X': return Component::X;
    case 'y': case 'Y': return Component::Y;
    case 'z': case 'Z': return Component::Z;
    default: throw DomainError(std::string("unknown Bloch component '") + c + "'");
  }
}

char to_char(Component c) {
  switch (c) {
    case Component::X: return 'x';
    case Component::Y: return 'y';
    case Component::Z: return 'z';
  }
  return 'z';
}

GeneratorSettings member_settings(const GeneratorSettings& gen, std::size_t index) {
  GeneratorSettings s = gen;
  s.seed = derive_seed(gen.seed, index);
  return s;
}

EnsembleMember make_member(const GeneratorSettings& gen, std::size_t index, EnsembleSource source) {
  GeneratedRecord g = generate_record(member_settings(gen, index));
  EnsembleMember m{std::move(g.record), std::move(g.truth), {}};
  if (source == EnsembleSource::Reconstructed) {
    m.reconstructed = reconstruct(m.record, gen.initial_state, gen.config);
  }
  return m;
}

namespace {

const Trajectory& selected(const EnsembleMember& m, EnsembleSource source) {
  return source == EnsembleSource::Truth ? m.truth : m.reconstructed;
}

} // namespace

std::vector<EnsembleMember> run_ensemble_members(std::size_t n_traj, const GeneratorSettings& gen,
                                                 const EnsembleOptions& options) {
  if (n_traj == 0) throw DomainError("ensemble needs at least one trajectory");
  gen.validate();
  std::vector<EnsembleMember> members(n_traj);
  const std::size_t n_chunks = (n_traj + kEnsembleChunk - 1) / kEnsembleChunk;
  parallel_chunks(n_chunks, options.threads, [&](std::size_t c) {
    const std::size_t begin = c * kEnsembleChunk;
    const std::size_t end = std::min(n_traj, begin + kEnsembleChunk);
    for (std::size_t i = begin; i < end; ++i) members[i] = make_member(gen, i, options.source);
  });
  return members;
}

std::vector<Trajectory> run_ensemble(std::size_t n_traj, const GeneratorSettings& gen,
                                     const EnsembleOptions& options) {
  auto members = run_ensemble_members(n_traj, gen, options);
  std::vector<Trajectory> out;
  out.reserve(members.size());
  for (auto& m : members) {
    out.push_back(options.source == EnsembleSource::Truth ? std::move(m.truth) : std::move(m.reconstructed));
  }
  return out;
}

EnsembleMoments::EnsembleMoments(std::size_t n_points) : sum_(n_points, {0, 0, 0}), sum_sq_(n_points, {0, 0, 0}) {}

void EnsembleMoments::add(const Trajectory& t) {
  if (t.size() != sum_.size()) throw DomainError("trajectory length does not match the moment accumulator");
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& q = t.states[k];
    const double v[3] = {q.x, q.y, q.z};
    for (int c = 0; c < 3; ++c) {
      sum_[k][c] += v[c];
      sum_sq_[k][c] += v[c] * v[c];
    }
  }
  ++count_;
}

void EnsembleMoments::merge(const EnsembleMoments& other) {
  if (other.count_ == 0) return;
  if (sum_.empty()) {
    *this = other;
    return;
  }
  if (other.sum_.size() != sum_.size()) throw DomainError("cannot merge moments of different lengths");
  for (std::size_t k = 0; k < sum_.size(); ++k) {
    for (int c = 0; c < 3; ++c) {
      sum_[k][c] += other.sum_[k][c];
      sum_sq_[k][c] += other.sum_sq_[k][c];
    }
  }
  count_ += other.count_;
}

BlochVector EnsembleMoments::mean(std::size_t k) const {
  const double n = static_cast<double>(count_);
  return {sum_[k][0] / n, sum_[k][1] / n, sum_[k][2] / n};
}

BlochVector EnsembleMoments::standard_error(std::size_t k) const {
  const double n = static_cast<double>(count_);
  double se[3];
  for (int c = 0; c < 3; ++c) {
    if (count_ < 2) {
      se[c] = 0.0;
      continue;
    }
    const double m = sum_[k][c] / n;
    const double var = std::max(0.0, (sum_sq_[k][c] - n * m * m) / (n - 1.0));
    se[c] = std::sqrt(var / n);
  }
  return {se[0], se[1], se[2]};
}

EnsembleMoments ensemble_moments(std::size_t n_traj, const GeneratorSettings& gen, const EnsembleOptions& options) {
  const EnsembleMoments init(gen.n_steps + 1);
  return reduce_ensemble(n_traj, gen, options, init,
                         [&](EnsembleMoments& acc, std::size_t, const EnsembleMember& m) {
                           acc.add(selected(m, options.source));
                         });
}

std::size_t histogram_bin(double v, std::size_t bins) {
  const double width = 2.0 / static_cast<double>(bins);
  const double pos = (v + 1.0) / width;
  const double idx = std::ceil(pos) - 1.0;
  if (!(idx > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(idx), bins - 1);
}

EnsembleHistogram::EnsembleHistogram(Component comp, std::vector<double> times, std::size_t n_bins)
    : component(comp), time_bins(std::move(times)) {
  if (n_bins == 0) throw DomainError("histogram needs at least one bin");
  value_edges.resize(n_bins + 1);
  for (std::size_t b = 0; b <= n_bins; ++b) {
    value_edges[b] = -1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(n_bins);
  }
  counts.assign(time_bins.size() * n_bins, 0.0);
}

void EnsembleHistogram::add(const Trajectory& t) {
  if (t.size() != time_bins.size()) throw DomainError("trajectory length does not match histogram time bins");
  const std::size_t nb = bins();
  for (std::size_t k = 0; k < t.size(); ++k) {
    at(k, histogram_bin(component_of(t.states[k], component), nb)) += 1.0;
  }
}

void EnsembleHistogram::merge(const EnsembleHistogram& other) {
  if (other.counts.size() != counts.size()) throw DomainError("cannot merge histograms of different shapes");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

void EnsembleHistogram::normalize() {
  const std::size_t nb = bins();
  for (std::size_t k = 0; k < time_bins.size(); ++k) {
    double peak = 0.0;
    for (std::size_t b = 0; b < nb; ++b) peak = std::max(peak, at(k, b));
    if (peak > 0.0) {
      for (std::size_t b = 0; b < nb; ++b) at(k, b) /= peak;
    }
  }
  normalized = true;
}

double EnsembleHistogram::column_mean(std::size_t time_index) const {
  const std::size_t nb = bins();
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    const double centre = 0.5 * (value_edges[b] + value_edges[b + 1]);
    total += at(time_index, b);
    weighted += at(time_index, b) * centre;
  }
  return total > 0.0 ? weighted / total : 0.0;
}

EnsembleHistogram histogram(const std::vector<Trajectory>& trajs, Component component, std::size_t bins,
                            bool normalize) {
  if (trajs.empty()) throw DomainError("histogram of an empty ensemble");
  EnsembleHistogram h(component, trajs.front().times, bins);
  for (const auto& t : trajs) h.add(t);
  if (normalize) h.normalize();
  return h;
}

void PostSelectionWindow::validate() const {
  if (x_half_width < 0.0 || z_half_width < 0.0) throw DomainError("post-selection half-widths must be non-negative");
  if (std::abs(x_center) > 1.0 || std::abs(z_center) > 1.0) {
    throw DomainError("post-selection centres must lie in [-1, 1]");
  }
  if (y_window && (y_window->second < 0.0 || std::abs(y_window->first) > 1.0)) {
    throw DomainError("invalid y post-selection window");
  }
  if (!(t_final >= 0.0)) throw DomainError("post-selection time must be non-negative");
}

std::size_t grid_index(double t, double dt, std::size_t n_points) {
  if (n_points == 1 && t == 0.0) return 0;
  const double pos = t / dt;
  const double k = std::round(pos);
  if (std::abs(pos - k) > 1e-6 || k < 0.0 || k >= static_cast<double>(n_points)) {
    throw DomainError("time " + std::to_string(t) + " s is not on the trajectory grid");
  }
  return static_cast<std::size_t>(k);
}

bool PostSelectionWindow::accepts(const Trajectory& t) const {
  const std::size_t k = grid_index(t_final, t.dt(), t.size());
  const auto& q = t.states[k];
  if (std::abs(q.x - x_center) > x_half_width) return false;
  if (std::abs(q.z - z_center) > z_half_width) return false;
  if (y_window && std::abs(q.y - y_window->first) > y_window->second) return false;
  return true;
}

std::vector<Trajectory> post_select(const std::vector<Trajectory>& trajs, const PostSelectionWindow& window) {
  window.validate();
  std::vector<Trajectory> out;
  for (const auto& t : trajs) {
    if (window.accepts(t)) out.push_back(t);
  }
  return out;
}

} // namespace qtraj
