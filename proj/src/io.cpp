#include "qtraj/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qtraj::io {

namespace {

struct UnitScale {
  const char* suffix;
  double scale;
};

constexpr UnitScale kDurationUnits[] = {
    {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"\xC2\xB5s", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}};
constexpr UnitScale kRateUnits[] = {{"/s", 1.0}, {"/ms", 1e3}, {"/us", 1e6}, {"/ns", 1e9}};
constexpr UnitScale kFrequencyUnits[] = {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Splits "1.28us" into (1.28, "us"); "inf" parses as infinity.
std::pair<double, std::string> split_quantity(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.rfind("inf", 0) == 0) return {kInf, trim(text.substr(3))};
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw ConfigError("cannot parse quantity '" + raw + "'");
  return {v, trim(std::string(end))};
}

template <std::size_t N>
std::optional<double> lookup(const UnitScale (&units)[N], const std::string& suffix) {
  for (const auto& u : units) {
    if (suffix == u.suffix) return u.scale;
  }
  return std::nullopt;
}

const json& require_key(const json& obj, const char* key, const std::string& section) {
  if (!obj.contains(key)) throw ConfigError("missing '" + std::string(key) + "' in " + section);
  return obj.at(key);
}

std::string quantity_text(const json& v, const std::string& key) {
  if (!v.is_string()) {
    throw ConfigError("'" + key + "' is dimensionful and needs a unit suffix, e.g. \"400ns\" or \"0.4MHz\"");
  }
  return v.get<std::string>();
}

double duration_field(const json& obj, const char* key, const std::string& fallback) {
  const std::string text = obj.contains(key) ? quantity_text(obj.at(key), key) : fallback;
  return parse_duration(text);
}

double rate_field(const json& obj, const char* key, const std::string& fallback) {
  const std::string text = obj.contains(key) ? quantity_text(obj.at(key), key) : fallback;
  return parse_rate(text);
}

template <typename T>
T number_field(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError("'" + std::string(key) + "' must be a non-negative integer");
    }
  }
  return v.get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& section) {
  if (!obj.is_object()) throw ConfigError(section + " must be a JSON object");
  for (const auto& [k, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError("unknown key '" + k + "' in " + section);
  }
}

BlochVector bloch_from_json(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 3) throw ConfigError("'" + key + "' must be an array [x, y, z]");
  BlochVector q{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  if (!q.is_physical()) throw ConfigError("'" + key + "' lies outside the Bloch ball");
  return q;
}

std::pair<double, double> window_from_json(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2) throw ConfigError("'" + key + "' must be [centre, half_width]");
  return {v[0].get<double>(), v[1].get<double>()};
}

EnsembleSource source_from_string(const std::string& s) {
  if (s == "reconstructed") return EnsembleSource::Reconstructed;
  if (s == "truth") return EnsembleSource::Truth;
  throw ConfigError("ensemble source must be 'reconstructed' or 'truth'");
}

const char* to_string(EnsembleSource s) { return s == EnsembleSource::Truth ? "truth" : "reconstructed"; }

json bloch_json(const BlochVector& q) { return json::array({q.x, q.y, q.z}); }

std::string join_csv(std::initializer_list<double> values) {
  std::string out;
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_double(v);
    first = false;
  }
  return out;
}

void write_header(std::ostream& os, const std::vector<std::string>& header) {
  for (const auto& line : header) os << "# " << line << '\n';
}

// clang-format off
const char* const kPresets = R"json({
  "fig2_jump": {
    "measurement": {"tau": "50ns", "dt": "200ns", "eta_m": 1.0, "T2star": "inf", "Omega": "8MHz", "axis": "z"},
    "generator": {"n_steps": 50, "substeps_per_dt": 128, "initial_state": [0, 0, 1]},
    "ensemble": {"n": 1000, "source": "truth"}
  },
  "fig2_diffusive": {
    "measurement": {"tau": "150ns", "dt": "20ns", "eta_m": 1.0, "T2star": "inf", "Omega": "0Hz", "axis": "z"},
    "generator": {"n_steps": 100, "initial_state": [1, 0, 0]}
  },
  "fig3": {
    "measurement": {"tau": "600ns", "dt": "400ns", "eta_m": 0.4, "T2star": "20us", "Omega": "0Hz", "axis": "z"},
    "generator": {"n_steps": 1, "initial_state": [1, 0, 0]},
    "tomography": {"mode": "scalar", "scalar_center": 1.7, "eps": 0.05, "shots_per_axis": 100000}
  },
  "fig3_phi": {
    "measurement": {"tau": "600ns", "dt": "400ns", "eta_m": 0.4, "T2star": "20us", "Omega": "0Hz", "axis": "phi"},
    "generator": {"n_steps": 1, "initial_state": [1, 0, 0]}
  },
  "fig4_static": {
    "measurement": {"tau": "1.28us", "dt": "20ns", "eta_m": 0.4, "T2star": "RESIDUAL_T2", "Omega": "0Hz", "axis": "z"},
    "generator": {"n_steps": 100, "initial_state": [1, 0, 0]},
    "tomography": {"mode": "matching", "eps": 0.05, "check_times": ["0.2us", "0.66us", "1us", "1.48us", "2us"], "shots_per_axis": 30000}
  },
  "fig4": {
    "measurement": {"tau": "1.28us", "dt": "20ns", "eta_m": 0.4, "T2star": "RESIDUAL_T2", "Omega": "0.4MHz", "axis": "z"},
    "generator": {"n_steps": 100, "initial_state": [1, 0, 0]},
    "tomography": {"mode": "matching", "eps": 0.05, "check_times": ["0.2us", "0.66us", "1us", "1.48us", "2us"], "shots_per_axis": 30000},
    "smoothing": {"hidden_at": 0.5, "games": 10000}
  },
  "fig5": {
    "measurement": {"tau": "1.28us", "dt": "20ns", "eta_m": 0.4, "T2star": "RESIDUAL_T2", "Omega": "0.4MHz", "axis": "z"},
    "generator": {"n_steps": 100, "initial_state": [1, 0, 0]},
    "ensemble": {"n": 50000, "bins": 101, "post_select": {"x": [0.1, 0.08], "z": [0.55, 0.08], "t_final": "2us"}}
  },
  "fig6": {
    "cascade": {"tau": "0.75us", "dt": "10ns", "eta_m": 1.0, "gamma_pair": "0/s", "n_steps": 300, "initial": "product"}
  }
})json";
// clang-format on

json load_presets() {
  // Residual dephasing of 2.7e-7 /s, entered as T2star = 1 / gamma.
  std::string text = kPresets;
  const std::string token = "\"RESIDUAL_T2\"";
  const std::string replacement = "\"" + format_duration(1.0 / 2.7e-7) + "\"";
  for (auto pos = text.find(token); pos != std::string::npos; pos = text.find(token)) {
    text.replace(pos, token.size(), replacement);
  }
  return json::parse(text);
}

const json& presets() {
  static const json p = load_presets();
  return p;
}

} // namespace

double parse_duration(const std::string& text) {
  const auto [v, suffix] = split_quantity(text);
  if (std::isinf(v) && v > 0 && (suffix.empty() || lookup(kDurationUnits, suffix))) return kInf;
  const auto scale = lookup(kDurationUnits, suffix);
  if (!scale) throw ConfigError("'" + text + "' needs a duration unit (s, ms, us, ns, ps)");
  return v * *scale;
}

double parse_rate(const std::string& text) {
  const auto [v, suffix] = split_quantity(text);
  if (auto s = lookup(kRateUnits, suffix)) return v * *s;
  if (auto f = lookup(kFrequencyUnits, suffix)) return 2.0 * kPi * v * *f;
  throw ConfigError("'" + text + "' needs a rate unit (/s, /us, ...) or a frequency unit (Hz, kHz, MHz, GHz)");
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_duration(double seconds) {
  if (std::isinf(seconds)) return "inf";
  return format_double(seconds) + "s";
}

std::string format_rate(double per_second) { return format_double(per_second) + "/s"; }

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, _] : presets().items()) names.push_back(k);
  return names;
}

json preset_json(const std::string& name) {
  if (!presets().contains(name)) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  json j = presets().at(name);
  j["preset"] = name;
  return j;
}

TwoQubitBayesState cascade_initial_state(const std::string& name) {
  if (name == "product") return TwoQubitBayesState::product_superposition();
  if (name == "odd_bell") return TwoQubitBayesState::odd_bell();
  if (name == "00") return TwoQubitBayesState::basis(Basis2::S00);
  if (name == "01") return TwoQubitBayesState::basis(Basis2::S01);
  if (name == "10") return TwoQubitBayesState::basis(Basis2::S10);
  if (name == "11") return TwoQubitBayesState::basis(Basis2::S11);
  throw ConfigError("unknown cascade initial state '" + name + "'");
}

RunConfig parse_run_config(const json& input) {
  if (!input.is_object()) throw ConfigError("configuration must be a JSON object");
  json doc = input;
  if (doc.contains("preset")) {
    json base = preset_json(doc.at("preset").get<std::string>());
    base.merge_patch(doc);
    doc = base;
  }
  reject_unknown(doc, {"preset", "preset_origin", "derived", "seed", "measurement", "generator", "ensemble",
                       "tomography", "smoothing", "cascade"},
                 "configuration");

  RunConfig rc;
  rc.preset = doc.value("preset", doc.value("preset_origin", std::string()));
  rc.generator.seed = number_field<std::uint64_t>(doc, "seed", 0);

  try {
    if (doc.contains("measurement")) {
      const json& m = doc.at("measurement");
      reject_unknown(m, {"tau", "nbar", "chi_over_kappa", "kappa", "dt", "eta_m", "T2star", "Omega", "axis",
                         "flip_rabi_sense"},
                     "measurement");
      const double dt = parse_duration(quantity_text(require_key(m, "dt", "measurement"), "dt"));
      const double eta = number_field<double>(m, "eta_m", 1.0);
      const double t2 = duration_field(m, "T2star", "inf");
      const double omega = rate_field(m, "Omega", "0/s");
      const double chi = number_field<double>(m, "chi_over_kappa", 0.05);
      const double kappa = rate_field(m, "kappa", "10MHz");
      const MeasurementAxis axis = axis_from_string(m.value("axis", std::string("z")));
      if (m.contains("tau") == m.contains("nbar")) {
        throw ConfigError("measurement needs exactly one of 'tau' or 'nbar'");
      }
      rc.tau_mode = m.contains("tau");
      MeasurementConfig c =
          rc.tau_mode ? config_from_timescale(parse_duration(quantity_text(m.at("tau"), "tau")), dt, eta, t2, omega,
                                              axis, chi, kappa)
                      : config_from_physical(chi, number_field<double>(m, "nbar", 0.0), eta, kappa, dt, t2, omega, axis);
      c.flip_rabi_sense = m.value("flip_rabi_sense", false);
      rc.generator.config = c;
    }

    const json g = doc.value("generator", json::object());
    reject_unknown(g, {"n_steps", "substeps_per_dt", "T1", "initial_state"}, "generator");
    rc.generator.n_steps = number_field<std::size_t>(g, "n_steps", 100);
    rc.generator.substeps_per_dt = number_field<std::size_t>(g, "substeps_per_dt", 1);
    const double t1 = duration_field(g, "T1", "inf");
    if (std::isfinite(t1)) rc.generator.T1 = t1;
    rc.generator.initial_state =
        g.contains("initial_state") ? bloch_from_json(g.at("initial_state"), "initial_state") : BlochVector{0, 0, 1};
    if (doc.contains("measurement")) rc.generator.validate();

    const json e = doc.value("ensemble", json::object());
    reject_unknown(e, {"n", "bins", "source", "post_select"}, "ensemble");
    rc.ensemble.n = number_field<std::size_t>(e, "n", 1000);
    rc.ensemble.bins = number_field<std::size_t>(e, "bins", kDefaultHistogramBins);
    rc.ensemble.source = source_from_string(e.value("source", std::string("reconstructed")));
    if (e.contains("post_select")) {
      const json& p = e.at("post_select");
      reject_unknown(p, {"x", "z", "y", "t_final"}, "ensemble.post_select");
      PostSelectionWindow w;
      std::tie(w.x_center, w.x_half_width) = window_from_json(require_key(p, "x", "post_select"), "x");
      std::tie(w.z_center, w.z_half_width) = window_from_json(require_key(p, "z", "post_select"), "z");
      if (p.contains("y")) w.y_window = window_from_json(p.at("y"), "y");
      w.t_final = parse_duration(quantity_text(require_key(p, "t_final", "post_select"), "t_final"));
      w.validate();
      rc.ensemble.post_select = w;
    }

    const json t = doc.value("tomography", json::object());
    reject_unknown(t, {"mode", "eps", "check_times", "shots_per_axis", "scalar_center", "min_per_axis"}, "tomography");
    rc.tomography.mode = t.value("mode", std::string("matching"));
    if (rc.tomography.mode != "matching" && rc.tomography.mode != "scalar") {
      throw ConfigError("tomography mode must be 'matching' or 'scalar'");
    }
    rc.tomography.eps = number_field<double>(t, "eps", 0.05);
    if (!(rc.tomography.eps > 0.0)) throw ConfigError("tomography eps must be positive");
    if (t.contains("check_times")) {
      for (const auto& v : t.at("check_times")) rc.tomography.check_times.push_back(parse_duration(quantity_text(v, "check_times")));
    }
    rc.tomography.shots_per_axis = number_field<std::size_t>(t, "shots_per_axis", 20000);
    rc.tomography.scalar_center = number_field<double>(t, "scalar_center", 1.7);
    rc.tomography.min_per_axis = number_field<std::size_t>(t, "min_per_axis", 200);

    const json s = doc.value("smoothing", json::object());
    reject_unknown(s, {"hidden_at", "games"}, "smoothing");
    rc.smoothing.hidden_at = number_field<double>(s, "hidden_at", 0.5);
    if (!(rc.smoothing.hidden_at >= 0.0 && rc.smoothing.hidden_at <= 1.0)) {
      throw ConfigError("smoothing.hidden_at must be a fraction in [0, 1]");
    }
    rc.smoothing.games = number_field<std::size_t>(s, "games", 0);

    if (doc.contains("cascade")) {
      const json& c = doc.at("cascade");
      reject_unknown(c, {"tau", "dt", "eta_m", "gamma_pair", "n_steps", "initial"}, "cascade");
      CascadeSection cs;
      cs.config.tau = parse_duration(quantity_text(require_key(c, "tau", "cascade"), "tau"));
      cs.config.dt = parse_duration(quantity_text(require_key(c, "dt", "cascade"), "dt"));
      cs.config.eta_m = number_field<double>(c, "eta_m", 1.0);
      if (c.contains("gamma_pair")) {
        const json& gp = c.at("gamma_pair");
        if (gp.is_array()) {
          if (gp.size() != 6) throw ConfigError("cascade.gamma_pair needs 6 rates or a single rate");
          for (std::size_t k = 0; k < 6; ++k) cs.config.gamma_pair[k] = parse_rate(quantity_text(gp[k], "gamma_pair"));
        } else {
          cs.config.gamma_pair.fill(parse_rate(quantity_text(gp, "gamma_pair")));
        }
      }
      cs.n_steps = number_field<std::size_t>(c, "n_steps", 100);
      cs.initial = c.value("initial", std::string("product"));
      cascade_initial_state(cs.initial);
      cs.config.validate();
      rc.cascade = cs;
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  if (!doc.contains("measurement") && !rc.cascade) {
    throw ConfigError("configuration needs a 'measurement' or a 'cascade' section");
  }
  if (!doc.contains("measurement")) rc.generator.n_steps = 0; // marks the measurement as absent
  return rc;
}

json resolved_json(const RunConfig& rc) {
  json doc;
  if (!rc.preset.empty()) doc["preset_origin"] = rc.preset;
  doc["seed"] = rc.generator.seed;
  if (rc.generator.n_steps > 0) {
    const MeasurementConfig& c = rc.generator.config;
    json m;
    if (rc.tau_mode) {
      m["tau"] = format_duration(c.tau);
    } else {
      m["nbar"] = c.nbar;
    }
    m["chi_over_kappa"] = c.chi_over_kappa;
    m["kappa"] = format_rate(c.kappa);
    m["dt"] = format_duration(c.dt);
    m["eta_m"] = c.eta_m;
    m["T2star"] = format_duration(c.T2star);
    m["Omega"] = format_rate(c.Omega);
    m["axis"] = to_string(c.axis);
    m["flip_rabi_sense"] = c.flip_rabi_sense;
    doc["measurement"] = m;
    doc["derived"] = {{"tau", format_duration(c.tau)},
                      {"nbar", c.nbar},
                      {"S", c.S},
                      {"Gamma_meas", format_rate(c.Gamma_meas)},
                      {"gamma", format_rate(c.gamma)},
                      {"phase_shift_rad", phase_shift(c)}};

    json g;
    g["n_steps"] = rc.generator.n_steps;
    g["substeps_per_dt"] = rc.generator.substeps_per_dt;
    g["T1"] = format_duration(rc.generator.T1.value_or(kInf));
    g["initial_state"] = bloch_json(rc.generator.initial_state);
    doc["generator"] = g;
  }

  json e;
  e["n"] = rc.ensemble.n;
  e["bins"] = rc.ensemble.bins;
  e["source"] = to_string(rc.ensemble.source);
  if (rc.ensemble.post_select) {
    const auto& w = *rc.ensemble.post_select;
    json p;
    p["x"] = json::array({w.x_center, w.x_half_width});
    p["z"] = json::array({w.z_center, w.z_half_width});
    if (w.y_window) p["y"] = json::array({w.y_window->first, w.y_window->second});
    p["t_final"] = format_duration(w.t_final);
    e["post_select"] = p;
  }
  doc["ensemble"] = e;

  json t;
  t["mode"] = rc.tomography.mode;
  t["eps"] = rc.tomography.eps;
  t["check_times"] = json::array();
  for (double v : rc.tomography.check_times) t["check_times"].push_back(format_duration(v));
  t["shots_per_axis"] = rc.tomography.shots_per_axis;
  t["scalar_center"] = rc.tomography.scalar_center;
  t["min_per_axis"] = rc.tomography.min_per_axis;
  doc["tomography"] = t;

  doc["smoothing"] = {{"hidden_at", rc.smoothing.hidden_at}, {"games", rc.smoothing.games}};

  if (rc.cascade) {
    const auto& cs = *rc.cascade;
    json c;
    c["tau"] = format_duration(cs.config.tau);
    c["dt"] = format_duration(cs.config.dt);
    c["eta_m"] = cs.config.eta_m;
    c["gamma_pair"] = json::array();
    for (double g : cs.config.gamma_pair) c["gamma_pair"].push_back(format_rate(g));
    c["n_steps"] = cs.n_steps;
    c["initial"] = cs.initial;
    doc["cascade"] = c;
  }
  return doc;
}

std::string config_hash(const json& resolved) {
  const std::string text = resolved.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json record_to_json(const MeasurementRecord& record) {
  return {{"dt", format_duration(record.dt)},
          {"seed", record.seed},
          {"axis", to_string(record.axis)},
          {"samples", record.samples}};
}

MeasurementRecord record_from_json(const json& j) {
  try {
    MeasurementRecord r;
    r.dt = parse_duration(j.at("dt").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.axis = axis_from_string(j.at("axis").get<std::string>());
    r.samples = j.at("samples").get<std::vector<double>>();
    r.validate();
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed record: ") + e.what());
  } catch (const DomainError& e) {
    throw IoError(std::string("invalid record: ") + e.what());
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t, const std::vector<std::string>& header) {
  write_header(os, header);
  os << "t,x,y,z\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& q = t.states[k];
    os << join_csv({t.times[k], q.x, q.y, q.z}) << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  Trajectory t;
  std::string line;
  bool seen_header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      if (line != "t,x,y,z") throw IoError("trajectory CSV must start with the header t,x,y,z");
      seen_header = true;
      continue;
    }
    double v[4];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < 4; ++i) {
      const auto res = std::from_chars(p, end, v[i]);
      if (res.ec != std::errc()) throw IoError("bad number in trajectory CSV line: " + line);
      p = res.ptr;
      if (i < 3) {
        if (p == end || *p != ',') throw IoError("expected 4 columns in trajectory CSV line: " + line);
        ++p;
      }
    }
    t.times.push_back(v[0]);
    t.states.push_back({v[1], v[2], v[3]});
  }
  if (!seen_header) throw IoError("empty trajectory CSV");
  return t;
}

void write_histogram_csv(std::ostream& os, const EnsembleHistogram& h, const std::vector<std::string>& header) {
  write_header(os, header);
  os << "# component=" << to_char(h.component) << " bins=" << h.bins()
     << " normalized=" << (h.normalized ? "true" : "false") << '\n';
  os << "t,value,weight\n";
  for (std::size_t k = 0; k < h.time_bins.size(); ++k) {
    for (std::size_t b = 0; b < h.bins(); ++b) {
      const double centre = 0.5 * (h.value_edges[b] + h.value_edges[b + 1]);
      os << join_csv({h.time_bins[k], centre, h.at(k, b)}) << '\n';
    }
  }
}

void write_moments_csv(std::ostream& os, const EnsembleMoments& m, double dt, const std::vector<std::string>& header) {
  write_header(os, header);
  os << "# trajectories=" << m.count() << '\n';
  os << "t,mean_x,mean_y,mean_z,se_x,se_y,se_z\n";
  for (std::size_t k = 0; k < m.n_points(); ++k) {
    const auto mu = m.mean(k);
    const auto se = m.standard_error(k);
    os << join_csv({static_cast<double>(k) * dt, mu.x, mu.y, mu.z, se.x, se.y, se.z}) << '\n';
  }
}

void write_cascade_csv(std::ostream& os, const std::vector<CascadeStep>& steps, const std::vector<std::string>& header) {
  write_header(os, header);
  os << "t,r,p00,p01,p10,p11,m_00_01,m_00_10,m_00_11,m_01_10,m_01_11,m_10_11,C\n";
  for (const auto& s : steps) {
    const auto& p = s.state.p;
    const auto& m = s.state.m;
    os << join_csv({s.t, s.r, p[0], p[1], p[2], p[3], m[0], m[1], m[2], m[3], m[4], m[5], s.C}) << '\n';
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("cannot parse JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw IoError("failed while writing '" + path + "'");
}

} // namespace qtraj::io
