#include "qtraj/past_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/binomial.hpp>

#include "qtraj/parallel.hpp"
#include "qtraj/random.hpp"
#include "qtraj/record_gen.hpp"

namespace qtraj {

namespace {

// Measurement operator diag(k0, k1) for outcome r, scaled so max(k0, k1) = 1.
std::pair<double, double> relative_kraus(double r, const MeasurementConfig& config) {
  const double four_a2 = 4.0 * config.tau / config.dt;
  const double l0 = -(r - 1.0) * (r - 1.0) / four_a2;
  const double l1 = -(r + 1.0) * (r + 1.0) / four_a2;
  const double top = std::max(l0, l1);
  return {std::exp(l0 - top), std::exp(l1 - top)};
}

// R M R^T with R = [[c, -s], [s, c]].
HermitianMatrix2 rotate(const HermitianMatrix2& m, double c, double s) {
  const double A = m.a();
  const double D = m.d();
  const std::complex<double> B = m.b();
  const double two_re_b = 2.0 * B.real();
  const double a = c * c * A - c * s * two_re_b + s * s * D;
  const double d = s * s * A + c * s * two_re_b + c * c * D;
  const std::complex<double> b = c * s * (A - D) + c * c * B - s * s * std::conj(B);
  return {a, b, d};
}

HermitianMatrix2 measure_and_dephase(const HermitianMatrix2& m, double k0, double k1, double damping) {
  return {k0 * k0 * m.a(), k0 * k1 * damping * m.b(), k1 * k1 * m.d()};
}

void require_axis_z(const MeasurementConfig& config) {
  if (config.axis != MeasurementAxis::Z) throw DomainError("past-state propagation supports z-measurements only");
}

HermitianMatrix2 unit_trace(const HermitianMatrix2& m, const char* what) {
  const double tr = m.trace();
  if (!(tr > 0.0) || !std::isfinite(tr)) {
    throw DomainError(std::string(what) + ": outcome has zero probability (trace underflow)");
  }
  return m.scaled(1.0 / tr);
}

} // namespace

void SmoothedState::validate() const {
  if (std::abs(rho.trace() - 1.0) > 1e-12) throw DomainError("rho does not have unit trace");
  if (rho.eigenvalues().first < -1e-9) throw DomainError("rho is not positive semidefinite");
  if (E.eigenvalues().first < -1e-9) throw DomainError("E is not positive semidefinite");
}

HermitianMatrix2 forward_step(const HermitianMatrix2& rho, double r, const MeasurementConfig& config) {
  require_axis_z(config);
  const auto [k0, k1] = relative_kraus(r, config);
  const double damping = std::exp(-config.gamma * config.dt);
  HermitianMatrix2 m = measure_and_dephase(rho, k0, k1, damping);
  if (config.Omega > 0.0) {
    const double half = 0.5 * config.rabi_angle(config.dt);
    m = rotate(m, std::cos(half), std::sin(half));
  }
  return unit_trace(m, "forward_step");
}

HermitianMatrix2 backward_step(const HermitianMatrix2& E_next, double r, const MeasurementConfig& config) {
  require_axis_z(config);
  const auto [k0, k1] = relative_kraus(r, config);
  const double damping = std::exp(-config.gamma * config.dt);
  HermitianMatrix2 m = E_next;
  if (config.Omega > 0.0) {
    const double half = 0.5 * config.rabi_angle(config.dt);
    m = rotate(m, std::cos(half), -std::sin(half));
  }
  return unit_trace(measure_and_dephase(m, k0, k1, damping), "backward_step");
}

std::vector<HermitianMatrix2> forward_sweep(const std::vector<double>& record, const HermitianMatrix2& rho0,
                                            const MeasurementConfig& config) {
  std::vector<HermitianMatrix2> out;
  out.reserve(record.size() + 1);
  out.push_back(unit_trace(rho0, "forward_sweep"));
  for (double r : record) out.push_back(forward_step(out.back(), r, config));
  return out;
}

std::vector<HermitianMatrix2> backward_sweep(const std::vector<double>& record, const MeasurementConfig& config,
                                             const HermitianMatrix2& terminal) {
  std::vector<HermitianMatrix2> out(record.size() + 1);
  out[record.size()] = unit_trace(terminal, "backward_sweep");
  for (std::size_t k = record.size(); k-- > 0;) out[k] = backward_step(out[k + 1], record[k], config);
  return out;
}

std::vector<SmoothedState> smooth(const MeasurementRecord& record, const HermitianMatrix2& rho0,
                                  const MeasurementConfig& config) {
  record.validate();
  const auto rhos = forward_sweep(record.samples, rho0, config);
  const auto effects = backward_sweep(record.samples, config);
  std::vector<SmoothedState> out(rhos.size());
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    out[k] = SmoothedState{rhos[k], effects[k], static_cast<double>(k) * config.dt};
  }
  return out;
}

std::vector<double> predict_hidden(const HermitianMatrix2& rho, const HermitianMatrix2& E,
                                   const std::vector<Eigen::Matrix2cd>& povm) {
  if (povm.empty()) throw DomainError("empty POVM");
  Eigen::Matrix2cd completeness = Eigen::Matrix2cd::Zero();
  for (const auto& op : povm) completeness += op.adjoint() * op;
  if ((completeness - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw DomainError("POVM is incomplete: sum of O^dag O differs from the identity");
  }
  const Eigen::Matrix2cd r = rho.matrix();
  const Eigen::Matrix2cd e = E.matrix();
  std::vector<double> p(povm.size());
  double total = 0.0;
  for (std::size_t m = 0; m < povm.size(); ++m) {
    p[m] = std::max(0.0, (povm[m] * r * povm[m].adjoint() * e).trace().real());
    total += p[m];
  }
  if (!(total > 0.0)) throw DomainError("past-state prediction is degenerate (all outcomes impossible)");
  for (double& v : p) v /= total;
  return p;
}

std::vector<double> predict_forward(const HermitianMatrix2& rho, const std::vector<Eigen::Matrix2cd>& povm) {
  return predict_hidden(rho, HermitianMatrix2::identity(), povm);
}

std::vector<Eigen::Matrix2cd> projective_z_povm() {
  Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd p1 = Eigen::Matrix2cd::Zero();
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return {p0, p1};
}

std::vector<Eigen::Matrix2cd> binned_gaussian_povm(const MeasurementConfig& config, const std::vector<double>& edges) {
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw DomainError("POVM bin edges must be strictly increasing");
  }
  const double sigma = config.a();
  // Probability that N(centre, sigma^2) lies in (lo, hi].
  auto mass = [&](double centre, double lo, double hi) {
    const auto cdf = [&](double v) { return 0.5 * std::erfc(-(v - centre) / (sigma * std::sqrt(2.0))); };
    return cdf(hi) - cdf(lo);
  };
  std::vector<double> bounds;
  bounds.push_back(-kInf);
  bounds.insert(bounds.end(), edges.begin(), edges.end());
  bounds.push_back(kInf);
  std::vector<Eigen::Matrix2cd> out;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    Eigen::Matrix2cd op = Eigen::Matrix2cd::Zero();
    op(0, 0) = std::sqrt(std::max(0.0, mass(+1.0, bounds[i], bounds[i + 1])));
    op(1, 1) = std::sqrt(std::max(0.0, mass(-1.0, bounds[i], bounds[i + 1])));
    out.push_back(op);
  }
  return out;
}

double sign_test_p_value(std::size_t successes, std::size_t trials) {
  if (successes == 0) return 1.0;
  if (successes > trials) throw DomainError("more successes than trials");
  boost::math::binomial_distribution<double> dist(static_cast<double>(trials), 0.5);
  return boost::math::cdf(boost::math::complement(dist, static_cast<double>(successes - 1)));
}

namespace {

struct GameOutcome {
  bool forward_correct = false;
  bool smoothed_correct = false;
};

int argmax_outcome(const std::vector<double>& p) { return p[0] >= p[1] ? +1 : -1; }

GameOutcome play_one(const GuessingGameSettings& settings, std::uint64_t seed) {
  Rng rng(seed);
  GeneratorSettings before;
  before.config = settings.config;
  before.n_steps = settings.steps_before;
  before.seed = seed;
  before.initial_state = settings.initial;
  const GeneratedRecord pre = generate_record(before, rng);

  const BlochVector hidden_state = pre.truth.states.back();
  const int hidden = uniform01(rng) < 0.5 * (1.0 + hidden_state.z) ? +1 : -1;

  GeneratorSettings after = before;
  after.n_steps = settings.steps_after;
  after.initial_state = {0.0, 0.0, static_cast<double>(hidden)};
  const GeneratedRecord post = generate_record(after, rng);

  const auto povm = projective_z_povm();
  const HermitianMatrix2 rho =
      forward_sweep(pre.record.samples, HermitianMatrix2::from_bloch(settings.initial), settings.config).back();
  const HermitianMatrix2 E = backward_sweep(post.record.samples, settings.config).front();
  return {argmax_outcome(predict_forward(rho, povm)) == hidden,
          argmax_outcome(predict_hidden(rho, E, povm)) == hidden};
}

} // namespace

GuessingGameResult play_guessing_game(const GuessingGameSettings& settings, std::size_t n_games,
                                      std::uint64_t seed, unsigned threads) {
  if (n_games == 0) throw DomainError("guessing game needs at least one game");
  if (settings.steps_before == 0 || settings.steps_after == 0) {
    throw DomainError("guessing game needs weak records before and after the hidden measurement");
  }
  require_axis_z(settings.config);
  std::vector<GameOutcome> outcomes(n_games);
  constexpr std::size_t chunk = 64;
  parallel_chunks((n_games + chunk - 1) / chunk, threads, [&](std::size_t c) {
    const std::size_t end = std::min(n_games, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) outcomes[i] = play_one(settings, derive_seed(seed, i));
  });
  GuessingGameResult res;
  res.games = n_games;
  for (const auto& o : outcomes) {
    res.forward_correct += o.forward_correct;
    res.smoothed_correct += o.smoothed_correct;
    res.smoothed_only += (o.smoothed_correct && !o.forward_correct);
    res.forward_only += (o.forward_correct && !o.smoothed_correct);
  }
  res.p_value = sign_test_p_value(res.smoothed_only, res.smoothed_only + res.forward_only);
  return res;
}

} // namespace qtraj
