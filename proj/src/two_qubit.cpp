#include "qtraj/two_qubit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtraj {

namespace {

// Gaussian log-likelihoods of r for each basis state, shifted so the largest is 0.
std::array<double, 4> shifted_log_likelihood(double r, const CascadeConfig& config) {
  const double two_var = 2.0 * config.tau / config.dt;
  std::array<double, 4> l{};
  for (int i = 0; i < 4; ++i) {
    const double d = r - kCascadeCentres[i];
    l[i] = -d * d / two_var;
  }
  const double top = *std::max_element(l.begin(), l.end());
  for (double& v : l) v -= top;
  return l;
}

} // namespace

std::size_t pair_index(int i, int j) {
  if (i > j) std::swap(i, j);
  for (std::size_t k = 0; k < kPairs.size(); ++k) {
    if (kPairs[k][0] == i && kPairs[k][1] == j) return k;
  }
  throw DomainError("invalid basis pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
}

TwoQubitBayesState TwoQubitBayesState::product_superposition() {
  TwoQubitBayesState s;
  s.p.fill(0.25);
  s.m.fill(0.25);
  return s;
}

TwoQubitBayesState TwoQubitBayesState::odd_bell() {
  TwoQubitBayesState s;
  s.p = {0.0, 0.5, 0.5, 0.0};
  s.m[pair_index(1, 2)] = 0.5;
  return s;
}

TwoQubitBayesState TwoQubitBayesState::basis(Basis2 b) {
  TwoQubitBayesState s;
  s.p[static_cast<int>(b)] = 1.0;
  return s;
}

void TwoQubitBayesState::validate() const {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("two-qubit population negative or not finite");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("two-qubit populations do not sum to 1");
  for (std::size_t k = 0; k < kPairs.size(); ++k) {
    const double bound = std::sqrt(p[kPairs[k][0]] * p[kPairs[k][1]]);
    if (!(m[k] >= 0.0) || m[k] > bound + 1e-9) {
      throw DomainError("two-qubit coherence violates 0 <= |rho_ij,lm| <= sqrt(p_ij p_lm)");
    }
  }
}

double CascadeConfig::sigma() const { return std::sqrt(tau / dt); }

void CascadeConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("cascade tau must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("cascade dt must be positive");
  if (!(eta_m > 0.0 && eta_m <= 1.0)) throw DomainError("cascade eta_m must lie in (0, 1]");
  for (double g : gamma_pair) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("pair dephasing rates must be non-negative");
  }
}

double cascade_sample(const TwoQubitBayesState& state, const CascadeConfig& config, Rng& rng) {
  const double u = uniform01(rng);
  double centre = 0.0;
  if (u < state.p[0]) {
    centre = -2.0;
  } else if (u < state.p[0] + state.p[1] + state.p[2]) {
    centre = 0.0;
  } else {
    centre = 2.0;
  }
  return centre + config.sigma() * standard_normal(rng);
}

TwoQubitBayesState cascade_update_diag(const TwoQubitBayesState& state, double r, const CascadeConfig& config) {
  const auto l = shifted_log_likelihood(r, config);
  std::array<double, 4> log_w{};
  double top = -kInf;
  for (int i = 0; i < 4; ++i) {
    log_w[i] = state.p[i] > 0.0 ? std::log(state.p[i]) + l[i] : -kInf;
    top = std::max(top, log_w[i]);
  }
  if (!std::isfinite(top)) throw DomainError("cascade update on a state with no population");
  TwoQubitBayesState out = state;
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    out.p[i] = std::exp(log_w[i] - top);
    total += out.p[i];
  }
  for (double& v : out.p) v /= total;
  return out;
}

double uncollected_dephasing_factor(int i, int j, const CascadeConfig& config) {
  const double dc = kCascadeCentres[i] - kCascadeCentres[j];
  if (dc == 0.0) return 1.0;
  return std::exp(-(1.0 - config.eta_m) * dc * dc * config.dt / (8.0 * config.tau * config.eta_m));
}

TwoQubitBayesState cascade_update_offdiag(const TwoQubitBayesState& state, double r, const CascadeConfig& config) {
  // With p' = p w / Z, the population ratio of a pair is sqrt(w_i w_j) / Z, and
  // Z = 1 / sum_{p' > 0} p'/w.
  const auto l = shifted_log_likelihood(r, config);
  std::array<double, 4> w{};
  double inv_z = 0.0;
  for (int i = 0; i < 4; ++i) {
    w[i] = std::exp(l[i]);
    if (state.p[i] > 0.0) inv_z += state.p[i] / w[i];
  }
  TwoQubitBayesState out = state;
  for (std::size_t k = 0; k < kPairs.size(); ++k) {
    const int i = kPairs[k][0];
    const int j = kPairs[k][1];
    if (state.p[i] * state.p[j] == 0.0) {
      out.m[k] = 0.0;
      continue;
    }
    const double ratio = std::sqrt(w[i] * w[j]) * inv_z;
    const double bound = std::sqrt(state.p[i] * state.p[j]);
    out.m[k] = std::min(bound, state.m[k] * ratio * std::exp(-config.gamma_pair[k] * config.dt) *
                                   uncollected_dephasing_factor(i, j, config));
  }
  return out;
}

double concurrence(const TwoQubitBayesState& state) {
  return 2.0 * std::max(0.0, state.coherence(1, 2) - std::sqrt(state.p[0] * state.p[3]));
}

std::vector<CascadeStep> cascade_trajectory(const TwoQubitBayesState& initial, std::size_t n_steps,
                                            const CascadeConfig& config, std::uint64_t seed) {
  config.validate();
  initial.validate();
  Rng rng(seed);
  std::vector<CascadeStep> out;
  out.reserve(n_steps + 1);
  out.push_back({0.0, 0.0, initial, concurrence(initial)});
  TwoQubitBayesState s = initial;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const double r = cascade_sample(s, config, rng);
    s = cascade_update_offdiag(cascade_update_diag(s, r, config), r, config);
    out.push_back({static_cast<double>(k) * config.dt, r, s, concurrence(s)});
  }
  return out;
}

} // namespace qtraj
