// qtraj: command-line front end for record generation, reconstruction,
// ensembles, conditional tomography, past-state smoothing and the two-qubit
// cascade.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qtraj/io.hpp"
#include "qtraj/measurement_model.hpp"
#include "qtraj/past_state.hpp"
#include "qtraj/record_gen.hpp"
#include "qtraj/tomography.hpp"
#include "qtraj/trajectory.hpp"
#include "qtraj/two_qubit.hpp"

namespace fs = std::filesystem;
using namespace qtraj;
using io::json;

namespace {

enum ExitCode : int { kOk = 0, kInternal = 1, kConfig = 2, kIo = 3, kStatistics = 4 };

struct Flags {
  std::string preset;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::string out_dir = ".";
  unsigned threads = 0;
  std::optional<double> hidden_at;
  std::string window;
  std::string axis;
  std::string input; // record.json for reconstruct / smooth
};

struct Context {
  io::RunConfig rc;
  json resolved;
  std::string hash;
  std::string command;
};

std::vector<double> parse_window(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw io::ConfigError("--window expects x,z,eps with numeric entries");
    }
  }
  if (v.size() != 3 || !(v[2] > 0.0)) throw io::ConfigError("--window expects x,z,eps with eps > 0");
  return v;
}

// Base document from --config and/or --preset, with command-line overrides applied.
json build_document(const Flags& f, const std::string& command, const json* embedded) {
  json doc = json::object();
  if (!f.config_path.empty()) {
    doc = io::read_json_file(f.config_path);
    if (!doc.is_object()) throw io::ConfigError("configuration file must hold a JSON object");
  } else if (embedded != nullptr && f.preset.empty()) {
    doc = *embedded;
  }
  if (!f.preset.empty()) doc["preset"] = f.preset;
  if (doc.empty()) throw io::ConfigError("give a configuration with --preset or --config");

  if (f.seed) doc["seed"] = *f.seed;
  if (!f.axis.empty()) {
    if (f.axis != "z" && f.axis != "phi") throw io::ConfigError("--axis must be z or phi");
    doc["measurement"]["axis"] = f.axis;
  }
  if (f.hidden_at) doc["smoothing"]["hidden_at"] = *f.hidden_at;
  if (f.n) {
    if (command == "tomo") {
      doc["tomography"]["shots_per_axis"] = *f.n;
    } else if (command == "smooth") {
      doc["smoothing"]["games"] = *f.n;
    } else {
      doc["ensemble"]["n"] = *f.n;
    }
  }
  return doc;
}

Context make_context(const Flags& f, const std::string& command, const json* embedded = nullptr) {
  Context ctx;
  ctx.command = command;
  json doc = build_document(f, command, embedded);
  // A preset merged under a resolved document must not be merged twice.
  if (doc.contains("preset") && doc.contains("preset_origin")) doc.erase("preset_origin");
  ctx.rc = io::parse_run_config(doc);
  ctx.resolved = io::resolved_json(ctx.rc);
  ctx.hash = io::config_hash(ctx.resolved);
  return ctx;
}

void require_measurement(const Context& ctx) {
  if (ctx.rc.generator.n_steps == 0) {
    throw io::ConfigError("'" + ctx.command + "' needs a measurement section");
  }
}

std::vector<std::string> csv_header(const Context& ctx) {
  return {"qtraj " + ctx.command + " config_hash=" + ctx.hash + " seed=" + std::to_string(ctx.rc.generator.seed),
          "config=" + ctx.resolved.dump()};
}

json metadata(const Context& ctx) {
  return {{"command", ctx.command}, {"config_hash", ctx.hash}, {"seed", ctx.rc.generator.seed}, {"config", ctx.resolved}};
}

fs::path out_path(const Flags& f, const std::string& name) {
  std::error_code ec;
  fs::create_directories(f.out_dir, ec);
  if (ec) throw io::IoError("cannot create output directory '" + f.out_dir + "': " + ec.message());
  return fs::path(f.out_dir) / name;
}

void write_json(const Flags& f, const std::string& name, const json& j) {
  io::write_text_file(out_path(f, name).string(), j.dump(2) + "\n");
}

template <typename Writer>
void write_csv(const Flags& f, const std::string& name, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  io::write_text_file(out_path(f, name).string(), os.str());
}

json bloch_json(const BlochVector& q) { return json::array({q.x, q.y, q.z}); }

// ---------------------------------------------------------------- generate

int cmd_generate(const Flags& f) {
  const Context ctx = make_context(f, "generate");
  require_measurement(ctx);
  const GeneratedRecord g = generate_record(ctx.rc.generator);
  json rec = metadata(ctx);
  rec["record"] = io::record_to_json(g.record);
  write_json(f, "record.json", rec);
  write_csv(f, "truth.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, g.truth, csv_header(ctx)); });
  std::cout << "wrote record.json and truth.csv (" << g.record.size() << " steps)\n";
  return kOk;
}

// ---------------------------------------------------------------- reconstruct

json load_record_file(const Flags& f) {
  if (f.input.empty()) throw io::ConfigError("missing record file argument");
  json j = io::read_json_file(f.input);
  if (!j.contains("record")) throw io::IoError("'" + f.input + "' holds no 'record'");
  return j;
}

int cmd_reconstruct(const Flags& f) {
  const json file = load_record_file(f);
  const json* embedded = file.contains("config") ? &file.at("config") : nullptr;
  const Context ctx = make_context(f, "reconstruct", embedded);
  require_measurement(ctx);
  const MeasurementRecord record = io::record_from_json(file.at("record"));
  const Trajectory t = reconstruct(record, ctx.rc.generator.initial_state, ctx.rc.generator.config);
  write_csv(f, "trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, t, csv_header(ctx)); });
  std::cout << "wrote trajectory.csv (" << t.size() << " points)\n";
  return kOk;
}

// ---------------------------------------------------------------- ensemble

struct EnsemblePartial {
  EnsembleHistogram hx, hz, post_x, post_z;
  EnsembleMoments moments;
  std::optional<PostSelectionWindow> window;
  std::size_t accepted = 0;

  void merge(const EnsemblePartial& o) {
    hx.merge(o.hx);
    hz.merge(o.hz);
    post_x.merge(o.post_x);
    post_z.merge(o.post_z);
    moments.merge(o.moments);
    accepted += o.accepted;
  }
};

int cmd_ensemble(const Flags& f) {
  const Context ctx = make_context(f, "ensemble");
  require_measurement(ctx);
  const auto& rc = ctx.rc;
  const auto& gen = rc.generator;
  const std::size_t n_points = gen.n_steps + 1;
  const auto times = time_grid(n_points, gen.config.dt);

  std::optional<PostSelectionWindow> window = rc.ensemble.post_select;
  if (!f.window.empty()) {
    const auto w = parse_window(f.window);
    PostSelectionWindow pw;
    pw.x_center = w[0];
    pw.z_center = w[1];
    pw.x_half_width = pw.z_half_width = w[2];
    pw.t_final = window ? window->t_final : times.back();
    window = pw;
  }
  if (window) {
    window->validate();
    grid_index(window->t_final, gen.config.dt, n_points);
  }

  EnsemblePartial init{EnsembleHistogram(Component::X, times, rc.ensemble.bins),
                       EnsembleHistogram(Component::Z, times, rc.ensemble.bins),
                       EnsembleHistogram(Component::X, times, rc.ensemble.bins),
                       EnsembleHistogram(Component::Z, times, rc.ensemble.bins),
                       EnsembleMoments(n_points),
                       window,
                       0};
  EnsembleOptions options{f.threads, rc.ensemble.source};
  EnsemblePartial total = reduce_ensemble(rc.ensemble.n, gen, options, init,
                                          [](EnsemblePartial& p, std::size_t, const EnsembleMember& m) {
                                            const Trajectory& t = m.reconstructed.size() ? m.reconstructed : m.truth;
                                            p.hx.add(t);
                                            p.hz.add(t);
                                            p.moments.add(t);
                                            if (p.window && p.window->accepts(t)) {
                                              p.post_x.add(t);
                                              p.post_z.add(t);
                                              ++p.accepted;
                                            }
                                          });
  total.hx.normalize();
  total.hz.normalize();
  const auto header = csv_header(ctx);
  write_csv(f, "hist_x.csv", [&](std::ostream& os) { io::write_histogram_csv(os, total.hx, header); });
  write_csv(f, "hist_z.csv", [&](std::ostream& os) { io::write_histogram_csv(os, total.hz, header); });
  write_csv(f, "means.csv", [&](std::ostream& os) { io::write_moments_csv(os, total.moments, gen.config.dt, header); });

  json summary = metadata(ctx);
  summary["trajectories"] = rc.ensemble.n;
  summary["final_mean"] = bloch_json(total.moments.mean(n_points - 1));
  summary["final_standard_error"] = bloch_json(total.moments.standard_error(n_points - 1));
  if (window) {
    summary["post_selection"] = {{"x", {window->x_center, window->x_half_width}},
                                 {"z", {window->z_center, window->z_half_width}},
                                 {"t_final", io::format_duration(window->t_final)},
                                 {"accepted", total.accepted}};
    if (total.accepted > 0) {
      total.post_x.normalize();
      total.post_z.normalize();
      write_csv(f, "hist_x_post.csv", [&](std::ostream& os) { io::write_histogram_csv(os, total.post_x, header); });
      write_csv(f, "hist_z_post.csv", [&](std::ostream& os) { io::write_histogram_csv(os, total.post_z, header); });
    }
  }
  write_json(f, "summary.json", summary);
  std::cout << "wrote hist_x.csv, hist_z.csv, means.csv, summary.json";
  if (window) std::cout << " (" << total.accepted << " post-selected)";
  std::cout << '\n';
  return kOk;
}

// ---------------------------------------------------------------- tomo

json estimate_json(const TomographyEstimate& e) {
  return {{"mean", bloch_json(e.mean)},
          {"standard_error", bloch_json(e.standard_error)},
          {"counts", {e.counts[0], e.counts[1], e.counts[2]}},
          {"eps", e.eps}};
}

bool within(const TomographyEstimate& e, const BlochVector& pred, double slack) {
  return std::abs(e.mean.x - pred.x) <= slack + 3.0 * e.standard_error.x &&
         std::abs(e.mean.y - pred.y) <= slack + 3.0 * e.standard_error.y &&
         std::abs(e.mean.z - pred.z) <= slack + 3.0 * e.standard_error.z;
}

int cmd_tomo(const Flags& f) {
  const Context ctx = make_context(f, "tomo");
  require_measurement(ctx);
  const auto& rc = ctx.rc;
  const auto& tomo = rc.tomography;
  const auto& cfg = rc.generator.config;

  std::vector<std::size_t> steps;
  for (double t : tomo.check_times) steps.push_back(grid_index(t, cfg.dt, rc.generator.n_steps + 1));
  if (steps.empty()) steps.push_back(rc.generator.n_steps);

  std::optional<std::vector<double>> window;
  if (!f.window.empty()) window = parse_window(f.window);

  json out = metadata(ctx);
  out["mode"] = tomo.mode;
  out["checks"] = json::array();
  for (std::size_t k : steps) {
    if (k == 0) throw io::ConfigError("tomography check times must lie after t = 0");
    GeneratorSettings gen = rc.generator;
    gen.n_steps = k;
    const auto shots = generate_shots(gen, tomo.shots_per_axis, derive_seed(rc.generator.seed, k), f.threads);
    json check;
    check["t"] = io::format_duration(static_cast<double>(k) * cfg.dt);
    check["step"] = k;

    const TomographyEstimate plain = conditional_tomography(shots, Unconditioned{}, k);
    check["unconditioned"] = estimate_json(plain);

    if (tomo.mode == "scalar" && !window) {
      const AdaptedWindow aw = adapt_scalar_window(shots, tomo.scalar_center, tomo.eps, k, tomo.min_per_axis);
      const TomographyEstimate est = conditional_tomography(shots, aw.window, k);
      // Prediction for a k-step record whose mean equals the window centre.
      BlochVector pred = rc.generator.initial_state;
      const MeasurementConfig whole = cfg.with_dt(static_cast<double>(k) * cfg.dt);
      pred = bayes_update(pred, aw.window.center, whole);
      check["condition"] = {{"record_mean", aw.window.center}, {"eps", aw.window.eps}, {"widened", aw.widened}};
      check["conditioned"] = estimate_json(est);
      check["prediction"] = bloch_json(pred);
      check["consistent"] = within(est, pred, aw.window.eps);
    } else {
      BlochVector target;
      double eps = tomo.eps;
      if (window) {
        target = {(*window)[0], 0.0, (*window)[1]};
        eps = (*window)[2];
      } else {
        // Reference target: the reconstruction of a record outside the shot set.
        GeneratorSettings ref = gen;
        ref.seed = derive_seed(~rc.generator.seed, k);
        const GeneratedRecord g = generate_record(ref);
        target = reconstruct(g.record, rc.generator.initial_state, cfg).states.back();
      }
      const TomographyEstimate est =
          conditional_tomography(shots, MatchingWindow{target, eps, cfg, rc.generator.initial_state}, k);
      check["condition"] = {{"target", bloch_json(target)}, {"eps", eps}};
      check["conditioned"] = estimate_json(est);
      check["prediction"] = bloch_json(target);
      check["consistent"] = within(est, target, eps);
    }
    out["checks"].push_back(check);
  }
  write_json(f, "tomography.json", out);
  std::cout << "wrote tomography.json (" << steps.size() << " check times)\n";
  return kOk;
}

// ---------------------------------------------------------------- smooth

int cmd_smooth(const Flags& f) {
  std::optional<json> file;
  if (!f.input.empty()) file = load_record_file(f);
  const json* embedded = (file && file->contains("config")) ? &file->at("config") : nullptr;
  const Context ctx = make_context(f, "smooth", embedded);
  require_measurement(ctx);
  const auto& rc = ctx.rc;
  const auto& cfg = rc.generator.config;

  const MeasurementRecord record =
      file ? io::record_from_json(file->at("record")) : generate_record(rc.generator).record;
  const auto states = smooth(record, HermitianMatrix2::from_bloch(rc.generator.initial_state), cfg);
  const auto povm = projective_z_povm();

  write_csv(f, "smooth.csv", [&](std::ostream& os) {
    for (const auto& line : csv_header(ctx)) os << "# " << line << '\n';
    os << "t,x,y,z,E_x,E_y,E_z,E_trace,Pp_plus,Pp_minus,P_plus,P_minus\n";
    for (const auto& s : states) {
      const BlochVector q = s.rho.to_bloch();
      const BlochVector e = s.E.normalized().to_bloch();
      const auto pp = predict_hidden(s.rho, s.E, povm);
      const auto pf = predict_forward(s.rho, povm);
      os << io::format_double(s.t);
      for (double v : {q.x, q.y, q.z, e.x, e.y, e.z, s.E.trace(), pp[0], pp[1], pf[0], pf[1]}) {
        os << ',' << io::format_double(v);
      }
      os << '\n';
    }
  });

  const std::size_t n = record.size();
  const auto k = static_cast<std::size_t>(std::llround(rc.smoothing.hidden_at * static_cast<double>(n)));
  const auto& s = states[k];
  const auto pp = predict_hidden(s.rho, s.E, povm);
  const auto pf = predict_forward(s.rho, povm);
  json out = metadata(ctx);
  out["hidden_step"] = k;
  out["hidden_t"] = io::format_duration(s.t);
  out["past_state"] = {{"P_plus", pp[0]}, {"P_minus", pp[1]}};
  out["forward"] = {{"P_plus", pf[0]}, {"P_minus", pf[1]}};

  if (rc.smoothing.games > 0) {
    if (k == 0 || k == n) throw io::ConfigError("guessing game needs records before and after the hidden time");
    GuessingGameSettings gs{cfg, k, n - k, rc.generator.initial_state};
    const auto res = play_guessing_game(gs, rc.smoothing.games, rc.generator.seed, f.threads);
    out["guessing_game"] = {{"games", res.games},
                            {"forward_correct", res.forward_correct},
                            {"smoothed_correct", res.smoothed_correct},
                            {"smoothed_only", res.smoothed_only},
                            {"forward_only", res.forward_only},
                            {"p_value", res.p_value}};
  }
  write_json(f, "smooth.json", out);
  std::cout << "wrote smooth.csv and smooth.json\n";
  return kOk;
}

// ---------------------------------------------------------------- cascade

int cmd_cascade(const Flags& f) {
  const Context ctx = make_context(f, "cascade");
  if (!ctx.rc.cascade) throw io::ConfigError("'cascade' needs a cascade section");
  const auto& cs = *ctx.rc.cascade;
  const TwoQubitBayesState initial = io::cascade_initial_state(cs.initial);
  const std::size_t n_traj = f.n.value_or(1);
  if (n_traj == 0) throw io::ConfigError("--n must be at least 1");

  std::vector<std::vector<CascadeStep>> runs(n_traj);
  parallel_chunks(n_traj, f.threads, [&](std::size_t i) {
    runs[i] = cascade_trajectory(initial, cs.n_steps, cs.config, derive_seed(ctx.rc.generator.seed, i));
  });

  write_csv(f, "cascade.csv", [&](std::ostream& os) { io::write_cascade_csv(os, runs.front(), csv_header(ctx)); });

  // Terminal branch: the basis group holding most of the final population.
  std::size_t even_low = 0, odd = 0, even_high = 0, odd_entangled = 0;
  for (const auto& run : runs) {
    const auto& p = run.back().state.p;
    const double po = p[1] + p[2];
    if (po >= p[0] && po >= p[3]) {
      ++odd;
      odd_entangled += run.back().C > 0.99;
    } else if (p[0] >= p[3]) {
      ++even_low;
    } else {
      ++even_high;
    }
  }
  json out = metadata(ctx);
  out["trajectories"] = n_traj;
  out["t_final"] = io::format_duration(runs.front().back().t);
  out["branches"] = {{"00", even_low}, {"01+10", odd}, {"11", even_high}};
  out["odd_branch_final_C_above_0.99"] = odd_entangled;
  out["first_final_C"] = runs.front().back().C;
  write_json(f, "cascade.json", out);
  std::cout << "wrote cascade.csv and cascade.json\n";
  return kOk;
}

int report(int code, const char* kind, const std::string& message) {
  json err = {{"error", {{"kind", kind}, {"code", code}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian filtering of continuously measured qubits"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--preset", f.preset, "named parameter set")->check(CLI::IsMember(io::preset_names()));
    sub->add_option("--config", f.config_path, "JSON configuration file");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--n", f.n, "trajectories, shots per axis or games, depending on the command");
    sub->add_option("--out-dir", f.out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", f.threads, "worker threads (0: all cores)")->capture_default_str();
    sub->add_option("--axis", f.axis, "measured quadrature")->check(CLI::IsMember({"z", "phi"}));
  };

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Flags&);
  };
  const Sub subs[] = {
      {"generate", "simulate a measurement record and its ground-truth trajectory", cmd_generate},
      {"reconstruct", "rebuild the trajectory from a record file", cmd_reconstruct},
      {"ensemble", "histograms, means and post-selection over many trajectories", cmd_ensemble},
      {"tomo", "conditional tomography of the conditioned state", cmd_tomo},
      {"smooth", "past-state predictions for a record", cmd_smooth},
      {"cascade", "two-qubit half-parity measurement and concurrence", cmd_cascade},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> handles;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    const std::string name = s.name;
    if (name == "reconstruct") sub->add_option("record", f.input, "record.json from generate")->required();
    if (name == "smooth") {
      sub->add_option("record", f.input, "record.json from generate (generated afresh if omitted)");
      sub->add_option("--hidden-at", f.hidden_at, "hidden measurement time as a fraction of the record");
    }
    if (name == "ensemble" || name == "tomo") {
      sub->add_option("--window", f.window, "x,z,eps post-selection or matching window");
    }
    handles.emplace_back(sub, &s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(kConfig, "usage", e.what());
  }

  try {
    for (const auto& [sub, s] : handles) {
      if (sub->parsed()) return s->run(f);
    }
    return report(kInternal, "internal", "no subcommand selected");
  } catch (const io::ConfigError& e) {
    return report(kConfig, "config", e.what());
  } catch (const DomainError& e) {
    return report(kConfig, "config", e.what());
  } catch (const io::IoError& e) {
    return report(kIo, "io", e.what());
  } catch (const InsufficientStatistics& e) {
    return report(kStatistics, "statistics", std::string(e.what()) + " (" + std::to_string(e.count()) + " shots)");
  } catch (const std::exception& e) {
    return report(kInternal, "internal", e.what());
  }
}
