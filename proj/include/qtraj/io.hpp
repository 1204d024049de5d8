#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qtraj/core.hpp"
#include "qtraj/record_gen.hpp"
#include "qtraj/trajectory.hpp"
#include "qtraj/two_qubit.hpp"

namespace qtraj::io {

using nlohmann::json;

/// Invalid or inconsistent configuration input.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File could not be read, written or parsed.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Quantities with units. Bare numbers are rejected for dimensionful fields.
//   durations:   "400ns", "1.28us", "1.28µs", "2ms", "1e-6s", "inf"
//   rates:       "1.3e6/s", "2/us"            (taken as given, s^-1 or rad/s)
//                "0.4MHz", "10kHz", "8e6Hz"   (cycle frequency f, converted to 2*pi*f)
double parse_duration(const std::string& text);
double parse_rate(const std::string& text);
std::string format_duration(double seconds);
std::string format_rate(double per_second);
/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

struct EnsembleSection {
  std::size_t n = 1000;
  std::size_t bins = kDefaultHistogramBins;
  EnsembleSource source = EnsembleSource::Reconstructed;
  std::optional<PostSelectionWindow> post_select;
};

struct TomographySection {
  std::string mode = "matching"; // "matching" or "scalar"
  double eps = 0.05;
  std::vector<double> check_times; // s; empty means the final step
  std::size_t shots_per_axis = 20000;
  double scalar_center = 1.7;
  std::size_t min_per_axis = 200;
};

struct SmoothingSection {
  double hidden_at = 0.5; // fraction of the record duration
  std::size_t games = 0;
};

struct CascadeSection {
  CascadeConfig config;
  std::size_t n_steps = 0;
  std::string initial = "product"; // product | odd_bell | 00 | 01 | 10 | 11
};

/// Everything a run needs, with defaults filled in.
struct RunConfig {
  std::string preset;
  bool tau_mode = true; // measurement given by tau (true) or by nbar (false)
  GeneratorSettings generator;
  EnsembleSection ensemble;
  TomographySection tomography;
  SmoothingSection smoothing;
  std::optional<CascadeSection> cascade;
};

std::vector<std::string> preset_names();
/// Raw JSON of a named preset; throws ConfigError for unknown names.
json preset_json(const std::string& name);

/// Parses a config document. A "preset" key, if present, supplies base values
/// that the remaining keys override (JSON merge patch).
RunConfig parse_run_config(const json& doc);
/// Canonical, fully resolved form; parse_run_config(resolved_json(c)) == c.
json resolved_json(const RunConfig& config);
/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const json& resolved);

TwoQubitBayesState cascade_initial_state(const std::string& name);

// Artifacts.
json record_to_json(const MeasurementRecord& record);
MeasurementRecord record_from_json(const json& j);

/// CSV with columns t,x,y,z; `header` lines are written as '# ' comments.
void write_trajectory_csv(std::ostream& os, const Trajectory& t, const std::vector<std::string>& header);
Trajectory read_trajectory_csv(std::istream& is);

/// Long-format histogram CSV: t,value,weight (value = bin centre).
void write_histogram_csv(std::ostream& os, const EnsembleHistogram& h, const std::vector<std::string>& header);

/// Columns t, mean_x, mean_y, mean_z, se_x, se_y, se_z.
void write_moments_csv(std::ostream& os, const EnsembleMoments& m, double dt, const std::vector<std::string>& header);

/// Columns t, r, p00, p01, p10, p11, m_00_01, m_00_10, m_00_11, m_01_10, m_01_11, m_10_11, C.
void write_cascade_csv(std::ostream& os, const std::vector<CascadeStep>& steps, const std::vector<std::string>& header);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

} // namespace qtraj::io
