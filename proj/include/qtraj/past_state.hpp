#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qtraj/core.hpp"

namespace qtraj {

/// Forward density matrix and backward effect matrix at time t.
struct SmoothedState {
  HermitianMatrix2 rho; // unit trace
  HermitianMatrix2 E;   // positive, unit trace by convention
  double t = 0.0;

  void validate() const;
};

/// One filtering step for a z-measurement outcome r: measurement operator,
/// then the gamma dephasing, then the Rabi unitary; renormalized to unit trace.
/// Bloch-equivalent to rabi_rotate(update_z(q, r), Omega dt).
HermitianMatrix2 forward_step(const HermitianMatrix2& rho, double r, const MeasurementConfig& config);

/// Adjoint of forward_step's unnormalized map applied to E_next, rescaled to
/// unit trace (predictions are invariant under the scale of E).
HermitianMatrix2 backward_step(const HermitianMatrix2& E_next, double r, const MeasurementConfig& config);

/// rho_k for k = 0..n, where rho_k has absorbed outcomes 0..k-1.
std::vector<HermitianMatrix2> forward_sweep(const std::vector<double>& record, const HermitianMatrix2& rho0,
                                            const MeasurementConfig& config);

/// E_k for k = 0..n, where E_k accounts for outcomes k..n-1; E_n = terminal.
std::vector<HermitianMatrix2> backward_sweep(const std::vector<double>& record, const MeasurementConfig& config,
                                             const HermitianMatrix2& terminal = HermitianMatrix2::identity().scaled(0.5));

/// Smoothed pairs (rho_k, E_k) at t_k = k dt.
std::vector<SmoothedState> smooth(const MeasurementRecord& record, const HermitianMatrix2& rho0,
                                  const MeasurementConfig& config);

/// Past-state prediction P(m) = Tr(O_m rho O_m^dag E) / sum_m (same).
/// The operators must be complete: sum O_m^dag O_m = I to 1e-9.
std::vector<double> predict_hidden(const HermitianMatrix2& rho, const HermitianMatrix2& E,
                                   const std::vector<Eigen::Matrix2cd>& povm);

/// Born-rule prediction from rho alone (E proportional to I).
std::vector<double> predict_forward(const HermitianMatrix2& rho, const std::vector<Eigen::Matrix2cd>& povm);

/// {|0><0|, |1><1|}: outcome +1 (ground) first, then -1.
std::vector<Eigen::Matrix2cd> projective_z_povm();

/// Gaussian weak measurement of one step of config, coarse-grained into the
/// bins (-inf, e_0], (e_0, e_1], ..., (e_last, inf). Edges must increase.
std::vector<Eigen::Matrix2cd> binned_gaussian_povm(const MeasurementConfig& config, const std::vector<double>& edges);

struct GuessingGameSettings {
  MeasurementConfig config;
  std::size_t steps_before = 0;
  std::size_t steps_after = 0;
  BlochVector initial{0.0, 0.0, 1.0};
};

struct GuessingGameResult {
  std::size_t games = 0;
  std::size_t forward_correct = 0;
  std::size_t smoothed_correct = 0;
  std::size_t smoothed_only = 0; // smoothed right, forward wrong
  std::size_t forward_only = 0;  // forward right, smoothed wrong
  /// One-sided exact sign test on the discordant games.
  double p_value = 1.0;
};

/// A hidden projective z-measurement between a weak record before and after
/// it. The forward guesser sees only the earlier record, the smoothed guesser
/// sees both.
GuessingGameResult play_guessing_game(const GuessingGameSettings& settings, std::size_t n_games,
                                      std::uint64_t seed, unsigned threads = 0);

/// P(X >= successes) for X ~ Binomial(trials, 1/2).
double sign_test_p_value(std::size_t successes, std::size_t trials);

} // namespace qtraj
