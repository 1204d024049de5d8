#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "qtraj/core.hpp"
#include "qtraj/parallel.hpp"
#include "qtraj/record_gen.hpp"

namespace qtraj {

/// Two-step filter: for each outcome r_k apply the Bayesian update, then the
/// Rabi rotation over dt. Requires Omega*dt <= 0.1 rad.
Trajectory reconstruct(const MeasurementRecord& record, const BlochVector& initial,
                       const MeasurementConfig& config);

enum class Component { X, Y, Z };

double component_of(const BlochVector& q, Component c);
Component component_from_char(char c);
char to_char(Component c);

/// Which trajectory of each (record, reconstruction) pair feeds the statistics.
enum class EnsembleSource { Reconstructed, Truth };

struct EnsembleOptions {
  unsigned threads = 0; // 0: hardware concurrency
  EnsembleSource source = EnsembleSource::Reconstructed;
};

struct EnsembleMember {
  MeasurementRecord record;
  Trajectory truth;
  Trajectory reconstructed; // empty when the source is Truth
};

/// Members are generated in fixed-size chunks; partial results are merged in
/// chunk order, which makes every reduction independent of the worker count.
inline constexpr std::size_t kEnsembleChunk = 64;

/// Settings for member `index`: same as gen, seeded by derive_seed(gen.seed, index).
GeneratorSettings member_settings(const GeneratorSettings& gen, std::size_t index);

/// Generates (and, for the Reconstructed source, reconstructs) member `index`.
EnsembleMember make_member(const GeneratorSettings& gen, std::size_t index, EnsembleSource source);

/// Streams all members through visit(partial, index, member) and merges the
/// chunk partials with Partial::merge. Partial must be copyable from `init`.
template <typename Partial, typename Visit>
Partial reduce_ensemble(std::size_t n_traj, const GeneratorSettings& gen, const EnsembleOptions& options,
                        const Partial& init, Visit&& visit) {
  if (n_traj == 0) throw DomainError("ensemble needs at least one trajectory");
  gen.validate();
  const std::size_t n_chunks = (n_traj + kEnsembleChunk - 1) / kEnsembleChunk;
  std::vector<std::optional<Partial>> partials(n_chunks);
  parallel_chunks(n_chunks, options.threads, [&](std::size_t c) {
    Partial part = init;
    const std::size_t begin = c * kEnsembleChunk;
    const std::size_t end = std::min(n_traj, begin + kEnsembleChunk);
    for (std::size_t i = begin; i < end; ++i) {
      visit(part, i, make_member(gen, i, options.source));
    }
    partials[c].emplace(std::move(part));
  });
  Partial total = init;
  for (auto& p : partials) total.merge(*p);
  return total;
}

/// n_traj independent members, deterministic in gen.seed.
std::vector<EnsembleMember> run_ensemble_members(std::size_t n_traj, const GeneratorSettings& gen,
                                                 const EnsembleOptions& options = {});

/// The trajectories selected by options.source for n_traj independent members.
std::vector<Trajectory> run_ensemble(std::size_t n_traj, const GeneratorSettings& gen,
                                     const EnsembleOptions& options = {});

/// Per-step running sums of x, y, z and their squares.
class EnsembleMoments {
public:
  EnsembleMoments() = default;
  explicit EnsembleMoments(std::size_t n_points);

  void add(const Trajectory& t);
  void merge(const EnsembleMoments& other);

  std::size_t count() const { return count_; }
  std::size_t n_points() const { return sum_.size(); }
  BlochVector mean(std::size_t k) const;
  /// Standard error of the mean, sample std / sqrt(N).
  BlochVector standard_error(std::size_t k) const;

private:
  std::size_t count_ = 0;
  std::vector<std::array<double, 3>> sum_;
  std::vector<std::array<double, 3>> sum_sq_;
};

EnsembleMoments ensemble_moments(std::size_t n_traj, const GeneratorSettings& gen,
                                 const EnsembleOptions& options = {});

/// Value-versus-time histogram of one Bloch component.
struct EnsembleHistogram {
  Component component = Component::Z;
  std::vector<double> time_bins;
  std::vector<double> value_edges; // bins + 1 uniform edges on [-1, 1]
  std::vector<double> counts;      // row-major [time][value]
  bool normalized = false;

  EnsembleHistogram() = default;
  EnsembleHistogram(Component component, std::vector<double> times, std::size_t bins);

  std::size_t bins() const { return value_edges.empty() ? 0 : value_edges.size() - 1; }
  double& at(std::size_t time_index, std::size_t bin) { return counts[time_index * bins() + bin]; }
  double at(std::size_t time_index, std::size_t bin) const { return counts[time_index * bins() + bin]; }

  void add(const Trajectory& t);
  void merge(const EnsembleHistogram& other);
  /// Scales every time column so its most populated bin equals 1.
  void normalize();
  /// Mean value of the column at time_index, from bin centres.
  double column_mean(std::size_t time_index) const;
};

inline constexpr std::size_t kDefaultHistogramBins = 101;

/// Bin of value v among `bins` uniform bins on [-1, 1]; values on an interior
/// edge go to the lower bin, values outside are clamped.
std::size_t histogram_bin(double v, std::size_t bins);

EnsembleHistogram histogram(const std::vector<Trajectory>& trajs, Component component,
                            std::size_t bins = kDefaultHistogramBins, bool normalize = true);

struct PostSelectionWindow {
  double x_center = 0.0;
  double x_half_width = 1.0;
  double z_center = 0.0;
  double z_half_width = 1.0;
  double t_final = 0.0; // s
  std::optional<std::pair<double, double>> y_window; // (center, half-width)

  void validate() const;
  /// Whether t ends inside the window at t_final; t_final must lie on t's grid.
  bool accepts(const Trajectory& t) const;
};

std::vector<Trajectory> post_select(const std::vector<Trajectory>& trajs, const PostSelectionWindow& window);

/// Index of time t on a uniform grid of spacing dt and n points; throws if off-grid.
std::size_t grid_index(double t, double dt, std::size_t n_points);

} // namespace qtraj
