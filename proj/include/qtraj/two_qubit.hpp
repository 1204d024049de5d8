#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qtraj/core.hpp"
#include "qtraj/random.hpp"

namespace qtraj {

/// Computational basis index for the two-qubit states, in the order 00, 01, 10, 11.
enum class Basis2 : int { S00 = 0, S01 = 1, S10 = 2, S11 = 3 };

/// Unordered basis pairs tracked for coherences:
/// (00,01) (00,10) (00,11) (01,10) (01,11) (10,11).
inline constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Position of the (i, j) pair in kPairs; order of i and j does not matter.
std::size_t pair_index(int i, int j);

/// Record centres c_ij of the cascaded readout: -2 for 00, 0 for 01 and 10, +2 for 11.
inline constexpr std::array<double, 4> kCascadeCentres{-2.0, 0.0, 0.0, 2.0};

/// Populations and coherence magnitudes of the cascaded two-qubit state in the
/// measurement basis.
struct TwoQubitBayesState {
  std::array<double, 4> p{};
  std::array<double, 6> m{}; // |rho_{ij,lm}| indexed like kPairs

  double coherence(int i, int j) const { return m[pair_index(i, j)]; }

  /// Both qubits in (|0> + |1>)/sqrt(2): all populations and coherences 1/4.
  static TwoQubitBayesState product_superposition();
  /// (|01> + |10>)/sqrt(2).
  static TwoQubitBayesState odd_bell();
  static TwoQubitBayesState basis(Basis2 b);

  /// Trace, non-negativity and m <= sqrt(p p') (+1e-9); throws DomainError.
  void validate() const;
};

struct CascadeConfig {
  double tau = 0.0; // s
  double dt = 0.0;  // s
  double eta_m = 1.0;
  std::array<double, 6> gamma_pair{}; // s^-1, indexed like kPairs

  double sigma() const;
  void validate() const;
};

/// Draws a record value: centre -2 / 0 / +2 with probability p00 / p01 + p10 / p11,
/// plus Gaussian noise of variance tau/dt.
double cascade_sample(const TwoQubitBayesState& state, const CascadeConfig& config, Rng& rng);

/// Bayes' rule on the populations; the coherences are carried unchanged.
TwoQubitBayesState cascade_update_diag(const TwoQubitBayesState& state, double r, const CascadeConfig& config);

/// Coherence update for a state whose populations already absorbed r:
/// each |rho_{ij,lm}| scales with sqrt(p'_ij p'_lm / (p_ij p_lm)), intrinsic
/// dephasing exp(-gamma_pair dt) and the uncollected-signal factor
/// exp(-(1 - eta_m) (c_ij - c_lm)^2 dt / (8 tau eta_m)).
TwoQubitBayesState cascade_update_offdiag(const TwoQubitBayesState& state, double r, const CascadeConfig& config);

/// exp(-(1 - eta_m) (c_ij - c_lm)^2 dt / (8 tau eta_m)) for pair (i, j).
double uncollected_dephasing_factor(int i, int j, const CascadeConfig& config);

/// 2 max(0, |rho_{01,10}| - sqrt(p00 p11)).
double concurrence(const TwoQubitBayesState& state);

struct CascadeStep {
  double t = 0.0;
  double r = 0.0; // outcome that produced this state (0 for the initial entry)
  TwoQubitBayesState state;
  double C = 0.0;
};

/// Sample, diagonal update, coherence update; n_steps + 1 entries including the start.
std::vector<CascadeStep> cascade_trajectory(const TwoQubitBayesState& initial, std::size_t n_steps,
                                            const CascadeConfig& config, std::uint64_t seed);

} // namespace qtraj
