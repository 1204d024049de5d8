// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qtraj/io.hpp"
#include "qtraj/measurement_model.hpp"
#include "qtraj/parallel.hpp"
#include "qtraj/past_state.hpp"
#include "qtraj/record_gen.hpp"
#include "qtraj/tomography.hpp"
#include "qtraj/trajectory.hpp"
#include "qtraj/two_qubit.hpp"
#include "support.hpp"

using namespace qtraj;
namespace oracle = qtraj::testing;

namespace {

// Pinned tolerances.
constexpr double kClosedFormTol = 1e-12;
constexpr double kMartingaleTol = 1e-9;
constexpr double kEnsembleSigmas = 4.0;
constexpr double kBinomialAlpha = 0.01;
constexpr double kTomographyEps = 0.05;
constexpr double kTomographySigmas = 3.0;
constexpr double kReductionTol = 1e-12;
constexpr double kGamePValue = 1e-3;
constexpr double kConcurrenceTarget = 0.99;
constexpr double kBlochSlack = 1e-9;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenSlack = 1e-12;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

template <typename... Args>
std::string fmtn(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

MeasurementConfig tau_cfg(double tau, double dt, double eta = 1.0, double t2 = kInf, double omega = 0.0) {
  return oracle::tau_config(tau, dt, eta, t2, omega);
}

// 1. Closed form of the z update from the equator.
Outcome closed_form() {
  double worst = 0.0;
  for (double ratio : {0.1, 2.0 / 3.0, 1.0, 5.0}) {
    const auto c = tau_cfg(1e-6, ratio * 1e-6);
    for (int i = 0; i <= 2000; ++i) {
      const double r = -5.0 + 10.0 * i / 2000.0;
      const auto q = update_z({1, 0, 0}, r, c);
      worst = std::max(worst, std::abs(q.z - std::tanh(r * ratio)));
    }
  }
  // The single-step measurement at tau = 600 ns, dt = 400 ns.
  const auto f3 = tau_cfg(600e-9, 400e-9);
  for (int i = 0; i <= 200; ++i) {
    const double r = -5.0 + 10.0 * i / 200.0;
    worst = std::max(worst, std::abs(update_z({1, 0, 0}, r, f3).z - std::tanh(r * 400.0 / 600.0)));
  }
  return {worst < kClosedFormTol, fmt("max |z - tanh(r dt/tau)| = %.2e", worst)};
}

// 2. Martingale by quadrature, one and two qubits.
Outcome martingale() {
  const std::vector<double> ratios{0.05, 0.1, 0.25, 0.5, 2.0 / 3.0, 1.0, 2.0, 5.0};
  double worst1 = 0.0, worst2 = 0.0;
  for (double ratio : ratios) {
    const auto c = tau_cfg(1e-6, ratio * 1e-6);
    CascadeConfig cc;
    cc.tau = 1e-6;
    cc.dt = ratio * 1e-6;
    for (int i = 0; i <= 20; ++i) {
      const double z = -1.0 + 2.0 * i / 20.0;
      const BlochVector q{std::sqrt(std::max(0.0, 1.0 - z * z)), 0.0, z};
      const double e = oracle::mixture_expectation([&](double r) { return update_z(q, r, c).z; }, z, c.a());
      worst1 = std::max(worst1, std::abs(e - z));

      TwoQubitBayesState s;
      s.p = {0.25 * (1.0 + z), 0.25, 0.25, 0.25 * (1.0 - z)};
      for (int k = 0; k < 4; ++k) {
        double ek = 0.0;
        for (int b = 0; b < 4; ++b) {
          if (s.p[b] == 0.0) continue;
          ek += s.p[b] * oracle::integrate_around(
                             [&](double r) {
                               return cascade_update_diag(s, r, cc).p[k] *
                                      oracle::gaussian_pdf(r, kCascadeCentres[b], cc.sigma());
                             },
                             kCascadeCentres[b], cc.sigma());
        }
        worst2 = std::max(worst2, std::abs(ek - s.p[k]));
      }
    }
  }
  return {worst1 < kMartingaleTol && worst2 < kMartingaleTol,
          fmtn("21x8 grid, max |E[z']-z| = %.2e, max |E[p']-p| = %.2e", worst1, worst2)};
}

// Largest deviation from the oracle in units of the standard error.
struct SigmaCheck {
  double worst = 0.0;
  bool ok = true;
  void add(double value, double expected, double se) {
    const double dev = std::abs(value - expected);
    if (se > 0.0) worst = std::max(worst, dev / se);
    if (dev > kEnsembleSigmas * se + 1e-12) ok = false;
  }
};

// 3. Unconditioned dephasing and conserved z.
Outcome unconditioned() {
  GeneratorSettings gen;
  gen.config = tau_cfg(1.28e-6, 20e-9, 0.4, 20e-6);
  gen.n_steps = 100;
  gen.seed = 3;
  gen.initial_state = {0.8, 0.0, 0.6};
  const auto m = ensemble_moments(50000, gen, {0, EnsembleSource::Truth});
  const double rate = gen.config.Gamma_ensemble();
  SigmaCheck x, z;
  for (std::size_t k = 0; k < m.n_points(); ++k) {
    const double t = static_cast<double>(k) * gen.config.dt;
    x.add(m.mean(k).x, 0.8 * std::exp(-rate * t), m.standard_error(k).x);
    z.add(m.mean(k).z, 0.6, m.standard_error(k).z);
  }
  return {x.ok && z.ok, fmtn("N=50000, 101 steps, worst x %.2f se, worst z %.2f se", x.worst, z.worst)};
}

struct Count {
  std::size_t up = 0;
  void merge(const Count& o) { up += o.up; }
};

// 4. Born rule in the projective limit.
Outcome born_limit() {
  GeneratorSettings gen;
  gen.config = tau_cfg(100e-9, 10e-9);
  gen.n_steps = 200; // 20 tau
  gen.seed = 4;
  gen.initial_state = {0.8, 0.0, 0.6};
  const std::size_t n = 100000;
  const auto c = reduce_ensemble(n, gen, {0, EnsembleSource::Truth}, Count{},
                                 [](Count& p, std::size_t, const EnsembleMember& m) { p.up += m.truth.states.back().z > 0; });
  const auto [lo, hi] = oracle::binomial_interval(c.up, n, kBinomialAlpha);
  return {0.8 >= lo && 0.8 <= hi,
          fmtn("P(z>0) = %.4f, 99%% interval [%.4f, %.4f] contains 0.8", static_cast<double>(c.up) / n, lo, hi)};
}

// 5. Driven ensemble against the Bloch equations.
Outcome rabi_ensemble() {
  GeneratorSettings gen;
  gen.config = tau_cfg(1.28e-6, 2e-9, 1.0, kInf, 2.0 * kPi * 0.4e6);
  gen.n_steps = 1000;
  gen.seed = 5;
  gen.initial_state = {1.0, 0.0, 0.0};
  const auto m = ensemble_moments(50000, gen, {0, EnsembleSource::Truth});
  oracle::BlochOde ode{gen.config.Gamma_ensemble(), gen.config.Omega, 1.0};
  std::array<double, 3> q{1.0, 0.0, 0.0};
  SigmaCheck x, z;
  for (std::size_t k = 0; k < m.n_points(); ++k) {
    if (k > 0) q = ode.evolve(q, gen.config.dt, 4);
    x.add(m.mean(k).x, q[0], m.standard_error(k).x);
    z.add(m.mean(k).z, q[2], m.standard_error(k).z);
  }
  return {x.ok && z.ok, fmtn("N=50000, dt=2ns, 1001 points, worst x %.2f se, worst z %.2f se", x.worst, z.worst)};
}

bool within(const BlochVector& est, const BlochVector& se, const BlochVector& pred, double eps, double* worst) {
  bool ok = true;
  for (auto [e, s, p] : {std::tuple{est.x, se.x, pred.x}, std::tuple{est.y, se.y, pred.y}, std::tuple{est.z, se.z, pred.z}}) {
    const double dev = std::abs(e - p);
    *worst = std::max(*worst, (dev - eps) / std::max(s, 1e-300));
    ok = ok && dev <= eps + kTomographySigmas * s;
  }
  return ok;
}

bool unconditioned_matches(const TomographyEstimate& u, const EnsembleMoments& m, std::size_t k, double* worst) {
  const auto mu = m.mean(k);
  const auto se = m.standard_error(k);
  bool ok = true;
  for (auto [a, sa, b, sb] : {std::tuple{u.mean.x, u.standard_error.x, mu.x, se.x},
                              std::tuple{u.mean.y, u.standard_error.y, mu.y, se.y},
                              std::tuple{u.mean.z, u.standard_error.z, mu.z, se.z}}) {
    const double s = std::hypot(sa, sb);
    const double dev = std::abs(a - b);
    if (s > 0) *worst = std::max(*worst, dev / s);
    ok = ok && dev <= kEnsembleSigmas * s + 1e-12;
  }
  return ok;
}

// 6. Closed-loop conditional tomography.
Outcome tomography() {
  bool ok = true;
  double worst_cond = -kInf, worst_plain = 0.0;
  std::size_t checks = 0;

  // Single step, scalar window on the averaged record.
  {
    const auto gen = io::parse_run_config(io::json{{"preset", "fig3"}}).generator;
    const auto shots = generate_shots(gen, 100000, 61);
    const auto aw = adapt_scalar_window(shots, 1.7, kTomographyEps, 1, 200);
    const auto est = conditional_tomography(shots, aw.window, 1);
    ok = ok && within(est.mean, est.standard_error, update_z(gen.initial_state, 1.7, gen.config), aw.window.eps, &worst_cond);
    const auto plain = conditional_tomography(shots, Unconditioned{}, 1);
    const auto m = ensemble_moments(100000, gen, {0, EnsembleSource::Truth});
    ok = ok && unconditioned_matches(plain, m, 1, &worst_plain);
    ++checks;
  }

  // Driven record, matching window around a reconstructed reference trajectory.
  {
    const auto rc = io::parse_run_config(io::json{{"preset", "fig4"}});
    GeneratorSettings gen = rc.generator;
    GeneratorSettings ref = gen;
    ref.seed = 62;
    const auto target = reconstruct(generate_record(ref).record, gen.initial_state, gen.config);
    const auto m = ensemble_moments(90000, gen, {0, EnsembleSource::Truth});
    for (double t : rc.tomography.check_times) {
      const std::size_t k = grid_index(t, gen.config.dt, rc.generator.n_steps + 1);
      gen.n_steps = k;
      const auto shots = generate_shots(gen, rc.tomography.shots_per_axis, derive_seed(63, k));
      const auto est =
          conditional_tomography(shots, MatchingWindow{target.states[k], kTomographyEps, gen.config, gen.initial_state}, k);
      ok = ok && within(est.mean, est.standard_error, target.states[k], kTomographyEps, &worst_cond);
      const auto plain = conditional_tomography(shots, Unconditioned{}, k);
      ok = ok && unconditioned_matches(plain, m, k, &worst_plain);
      ++checks;
    }
  }
  return {ok, fmtn("%zu checked times, worst conditioned excess %.2f se beyond eps, worst unconditioned %.2f se", checks,
                   std::max(0.0, worst_cond), worst_plain)};
}

HermitianMatrix2 random_state(std::mt19937_64& rng, double max_norm) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BlochVector q;
  do {
    q = {u(rng), u(rng), u(rng)};
  } while (q.norm() > max_norm);
  return HermitianMatrix2::from_bloch(q);
}

// 7. Past-state reductions and the guessing game.
Outcome past_state() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logscale(-6.0, 6.0);
  const auto c = tau_cfg(1e-6, 0.3e-6);
  const std::vector<std::vector<Eigen::Matrix2cd>> povms{projective_z_povm(),
                                                          binned_gaussian_povm(c, {-1.0, -0.2, 0.0, 0.5, 1.7})};
  double born = 0.0, scale = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto rho = random_state(rng, 1.0);
    const auto E = random_state(rng, 0.999);
    for (const auto& povm : povms) {
      const auto p = predict_hidden(rho, HermitianMatrix2::identity().scaled(std::exp(logscale(rng))), povm);
      for (std::size_t m = 0; m < povm.size(); ++m) {
        born = std::max(born, std::abs(p[m] - (povm[m] * rho.matrix() * povm[m].adjoint()).trace().real()));
      }
      const auto a = predict_hidden(rho, E, povm);
      const auto b = predict_hidden(rho, E.scaled(std::exp(logscale(rng))), povm);
      for (std::size_t m = 0; m < povm.size(); ++m) scale = std::max(scale, std::abs(a[m] - b[m]));
    }
  }
  const auto rc = io::parse_run_config(io::json{{"preset", "fig4"}});
  const std::size_t before = static_cast<std::size_t>(std::llround(rc.smoothing.hidden_at * rc.generator.n_steps));
  const GuessingGameSettings gs{rc.generator.config, before, rc.generator.n_steps - before, rc.generator.initial_state};
  const auto g = play_guessing_game(gs, 10000, 71);
  const bool ok = born < kReductionTol && scale < kReductionTol && g.smoothed_correct > g.forward_correct &&
                  g.p_value < kGamePValue;
  return {ok, fmtn("Born %.1e, scale %.1e; games %zu: smoothed %zu vs forward %zu correct, p = %.2e", born, scale,
                   g.games, g.smoothed_correct, g.forward_correct, g.p_value)};
}

struct CascadeTally {
  std::size_t branch[3] = {0, 0, 0};
  std::size_t odd_final_above = 0;
  std::size_t odd_reached = 0;
  double odd_min_final = kInf;
  double odd_sum_C = 0.0;
  TwoQubitBayesState odd_sum{{0, 0, 0, 0}, {}};
  void merge(const CascadeTally& o) {
    for (int i = 0; i < 3; ++i) branch[i] += o.branch[i];
    for (int i = 0; i < 4; ++i) odd_sum.p[i] += o.odd_sum.p[i];
    for (std::size_t j = 0; j < kPairs.size(); ++j) odd_sum.m[j] += o.odd_sum.m[j];
    odd_sum_C += o.odd_sum_C;
    odd_final_above += o.odd_final_above;
    odd_reached += o.odd_reached;
    odd_min_final = std::min(odd_min_final, o.odd_min_final);
  }
};

// 8. Entanglement genesis from a half-parity measurement.
Outcome entanglement() {
  // Symbolic check: the odd pair shares one centre, so the factor is 1 for any efficiency.
  static_assert(kCascadeCentres[1] == kCascadeCentres[2]);
  bool symbolic = true;
  for (double eta : {1e-3, 0.1, 0.4, 0.75, 1.0}) {
    CascadeConfig c;
    c.tau = 0.75e-6;
    c.dt = 10e-9;
    c.eta_m = eta;
    symbolic = symbolic && uncollected_dephasing_factor(1, 2, c) == 1.0;
  }

  const auto rc = io::parse_run_config(io::json{{"preset", "fig6"}});
  const CascadeConfig cfg = rc.cascade->config;
  const std::size_t n_steps = static_cast<std::size_t>(std::llround(10.0 * cfg.tau / cfg.dt));
  const std::size_t n = 100000;
  constexpr std::size_t chunk = 256;
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<CascadeTally> parts(n_chunks);
  parallel_chunks(n_chunks, 0, [&](std::size_t ch) {
    CascadeTally& t = parts[ch];
    for (std::size_t i = ch * chunk; i < std::min(n, (ch + 1) * chunk); ++i) {
      const auto run = cascade_trajectory(TwoQubitBayesState::product_superposition(), n_steps, cfg, derive_seed(81, i));
      const auto& p = run.back().state.p;
      const double odd = p[1] + p[2];
      const int b = (p[0] >= odd && p[0] >= p[3]) ? 0 : (odd >= p[3] ? 1 : 2);
      ++t.branch[b];
      if (b == 1) {
        const double c_final = run.back().C;
        double c_max = 0.0;
        for (const auto& s : run) c_max = std::max(c_max, s.C);
        t.odd_final_above += c_final > kConcurrenceTarget;
        t.odd_reached += c_max > kConcurrenceTarget;
        t.odd_min_final = std::min(t.odd_min_final, c_final);
        t.odd_sum_C += c_final;
        for (int j = 0; j < 4; ++j) t.odd_sum.p[j] += p[j];
        for (std::size_t j = 0; j < kPairs.size(); ++j) t.odd_sum.m[j] += run.back().state.m[j];
      }
    }
  });
  CascadeTally total;
  for (const auto& p : parts) total.merge(p);

  // Simultaneous 99% intervals: Clopper-Pearson at alpha / 3 per branch.
  const double weights[3] = {0.25, 0.5, 0.25};
  bool in_ci = true;
  for (int b = 0; b < 3; ++b) {
    in_ci = in_ci && oracle::in_binomial_interval(weights[b], total.branch[b], n, kBinomialAlpha / 3.0);
  }
  // The odd-branch conditioned state is the average over the trajectories
  // that end in that branch.
  const std::size_t odd = total.branch[1];
  TwoQubitBayesState conditioned = total.odd_sum;
  for (double& p : conditioned.p) p /= static_cast<double>(odd);
  for (double& m : conditioned.m) m /= static_cast<double>(odd);
  const double c_conditioned = concurrence(conditioned);
  const double c_mean = total.odd_sum_C / static_cast<double>(odd);
  const bool reached = odd > 0 && c_conditioned > kConcurrenceTarget && c_mean > kConcurrenceTarget;
  return {symbolic && in_ci && reached,
          fmtn("branches %zu/%zu/%zu of %zu (in CI: %s); odd branch at 10 tau: C(conditioned state) = %.4f, "
               "mean C = %.4f, per trajectory C>0.99 at 10 tau %zu/%zu, at any t <= 10 tau %zu/%zu; odd factor == 1: %s",
               total.branch[0], total.branch[1], total.branch[2], n, in_ci ? "yes" : "no", c_conditioned, c_mean,
               total.odd_final_above, odd, total.odd_reached, odd, symbolic ? "yes" : "no")};
}

struct FuzzTally {
  std::size_t cases = 0;
  std::size_t bloch = 0;
  std::size_t trace = 0;
  std::size_t positivity = 0;
  std::size_t determinism = 0;
  void merge(const FuzzTally& o) {
    cases += o.cases;
    bloch += o.bloch;
    trace += o.trace;
    positivity += o.positivity;
    determinism += o.determinism;
  }
  std::size_t violations() const { return bloch + trace + positivity + determinism; }
};

bool positive(const HermitianMatrix2& m) { return m.eigenvalues().first >= -kEigenSlack * std::max(1.0, m.trace()); }

void fuzz_case(std::uint64_t seed, FuzzTally& t) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double tau = std::exp(std::log(20e-9) + u(rng) * std::log(5e-6 / 20e-9));
  const double dt = tau * std::exp(std::log(0.01) + u(rng) * std::log(5.0 / 0.01));
  const double eta = 0.05 + 0.95 * u(rng);
  const double t2 = u(rng) < 0.3 ? kInf : std::exp(std::log(1e-6) + u(rng) * std::log(1e-3 / 1e-6));
  const double omega = u(rng) < 0.3 ? 0.0 : u(rng) * 0.1 / dt;
  const auto axis = u(rng) < 0.2 ? MeasurementAxis::PHI : MeasurementAxis::Z;
  GeneratorSettings gen;
  gen.config = oracle::tau_config(tau, dt, eta, t2, omega, axis);
  gen.config.flip_rabi_sense = u(rng) < 0.5;
  gen.n_steps = 1 + static_cast<std::size_t>(u(rng) * 60);
  gen.substeps_per_dt = 1 + static_cast<std::size_t>(u(rng) * 4);
  while (gen.substep() > tau / 10.0 && gen.substeps_per_dt < 4096) gen.substeps_per_dt *= 2;
  if (u(rng) < 0.3) gen.T1 = std::exp(std::log(1e-6) + u(rng) * std::log(1e-3 / 1e-6));
  BlochVector q;
  do {
    q = {2 * u(rng) - 1, 2 * u(rng) - 1, 2 * u(rng) - 1};
  } while (q.norm() > 1.0);
  if (u(rng) < 0.3) q = {q.x / q.norm(), q.y / q.norm(), q.z / q.norm()};
  gen.initial_state = q;
  gen.seed = seed;
  ++t.cases;

  const auto a = generate_record(gen);
  const auto b = generate_record(gen);
  if (a.record.samples != b.record.samples || a.truth.states != b.truth.states) ++t.determinism;
  for (const auto& s : a.truth.states) t.bloch += !(s.is_finite() && s.norm() <= 1.0 + kBlochSlack);

  if (gen.config.axis == MeasurementAxis::Z && gen.config.rabi_angle(dt) <= 0.1 + 1e-12) {
    const auto r1 = reconstruct(a.record, q, gen.config);
    const auto r2 = reconstruct(a.record, q, gen.config);
    if (r1.states != r2.states) ++t.determinism;
    for (const auto& s : r1.states) t.bloch += !(s.is_finite() && s.norm() <= 1.0 + kBlochSlack);

    const auto rhos = forward_sweep(a.record.samples, HermitianMatrix2::from_bloch(q), gen.config);
    const auto effects = backward_sweep(a.record.samples, gen.config);
    for (std::size_t k = 0; k < rhos.size(); ++k) {
      t.trace += std::abs(rhos[k].trace() - 1.0) > kTraceTol;
      t.trace += std::abs(effects[k].trace() - 1.0) > kTraceTol;
      t.positivity += !positive(rhos[k]);
      t.positivity += !positive(effects[k]);
      t.bloch += rhos[k].to_bloch().norm() > 1.0 + kBlochSlack;
    }
  }

  CascadeConfig cc;
  cc.tau = tau;
  cc.dt = std::min(dt, 2.0 * tau);
  cc.eta_m = eta;
  for (double& g : cc.gamma_pair) g = u(rng) < 0.5 ? 0.0 : u(rng) * 1e6;
  const char* names[] = {"product", "odd_bell", "00", "01", "10", "11"};
  const auto init = io::cascade_initial_state(names[static_cast<std::size_t>(u(rng) * 6) % 6]);
  const auto c1 = cascade_trajectory(init, 1 + static_cast<std::size_t>(u(rng) * 40), cc, seed);
  const auto c2 = cascade_trajectory(init, c1.size() - 1, cc, seed);
  for (std::size_t k = 0; k < c1.size(); ++k) {
    if (c1[k].r != c2[k].r || c1[k].state.m != c2[k].state.m) ++t.determinism;
    double sum = 0.0;
    for (double p : c1[k].state.p) {
      sum += p;
      t.positivity += !(p >= 0.0);
    }
    t.trace += std::abs(sum - 1.0) > kTraceTol;
    for (std::size_t j = 0; j < kPairs.size(); ++j) {
      const double bound = std::sqrt(c1[k].state.p[kPairs[j][0]] * c1[k].state.p[kPairs[j][1]]);
      t.positivity += !(c1[k].state.m[j] >= 0.0 && c1[k].state.m[j] <= bound * (1.0 + 1e-12) + 1e-300);
    }
    t.bloch += !(c1[k].C >= 0.0 && c1[k].C <= 1.0 + kBlochSlack);
  }
}

// 9. Invariant sweep over random configurations and records.
Outcome invariant_sweep() {
  const std::size_t n = 10000;
  constexpr std::size_t chunk = 64;
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<FuzzTally> parts(n_chunks);
  parallel_chunks(n_chunks, 0, [&](std::size_t ch) {
    for (std::size_t i = ch * chunk; i < std::min(n, (ch + 1) * chunk); ++i) fuzz_case(derive_seed(91, i), parts[ch]);
  });
  FuzzTally total;
  for (const auto& p : parts) total.merge(p);
  return {total.cases == n && total.violations() == 0,
          fmtn("%zu cases; violations: Bloch %zu, trace %zu, positivity %zu, determinism %zu", total.cases, total.bloch,
               total.trace, total.positivity, total.determinism)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double time_limit_s; // 0: none
};

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "z-update closed form", closed_form, 1.0},
      {2, "martingale quadrature", martingale, 5.0},
      {3, "unconditioned ensemble", unconditioned, 60.0},
      {4, "Born-rule projective limit", born_limit, 60.0},
      {5, "Rabi ensemble vs Bloch equations", rabi_ensemble, 0.0},
      {6, "conditional tomography", tomography, 0.0},
      {7, "past-state reductions and guessing game", past_state, 0.0},
      {8, "two-qubit entanglement genesis", entanglement, 0.0},
      {9, "invariant sweep", invariant_sweep, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = out.pass;
    std::string timing = fmt("%.2f s", secs);
    if (c.time_limit_s > 0.0) {
      timing += fmt(", limit %.0f s", c.time_limit_s);
      pass = pass && secs < c.time_limit_s;
    }
    failed += !pass;
    std::printf("%s criterion %d (%s): %s [%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  return failed;
}
