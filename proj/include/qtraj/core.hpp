#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qtraj {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerance on |q| above 1 that is still accepted as a physical state.
inline constexpr double kBlochTolerance = 1e-9;

/// Raised when a parameter set or state lies outside the model's domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

enum class MeasurementAxis { Z, PHI };

std::string to_string(MeasurementAxis axis);
MeasurementAxis axis_from_string(const std::string& name);

/// Conditioned single-qubit state (x, y, z) = (<sx>, <sy>, <sz>).
/// The ground state |0> sits at z = +1.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double norm_squared() const { return x * x + y * y + z * z; }
  bool is_finite() const;
  /// Finite and inside the unit ball up to kBlochTolerance.
  bool is_physical() const;

  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

/// Throws DomainError unless q is physical.
void require_physical(const BlochVector& q, const char* what);

/// Physical and derived parameters of a dispersive qubit measurement.
///
/// Construct through config_from_physical() or config_from_timescale(); both
/// populate the derived fields so that
///   S = 64 (chi/kappa)^2 kappa nbar eta_m dt,   tau = 4 dt / S,
///   Gamma_meas = 8 (chi/kappa)^2 kappa nbar,    1/(2 tau) = eta_m Gamma_meas,
///   gamma = Gamma_meas (1 - eta_m) + 1/T2star.
struct MeasurementConfig {
  double chi_over_kappa = 0.0;
  double nbar = 0.0;
  double eta_m = 1.0;
  double kappa = 0.0;      // s^-1
  double dt = 0.0;         // s
  double tau = 0.0;        // s
  double S = 0.0;          // per step of length dt
  double Gamma_meas = 0.0; // s^-1
  double T2star = kInf;    // s
  double gamma = 0.0;      // s^-1
  double Omega = 0.0;      // rad/s
  MeasurementAxis axis = MeasurementAxis::Z;
  /// Flips the sense of the Rabi rotation (+z toward -x for positive angles).
  bool flip_rabi_sense = false;

  /// Standard deviation of a single-step outcome, a = sqrt(tau/dt).
  double a() const;
  /// dt / tau, the per-step kick scale of the Bayesian updates.
  double strength_ratio() const { return dt / tau; }
  /// Ensemble dephasing rate including extra dephasing: Gamma_meas + 1/T2star.
  double Gamma_ensemble() const;
  /// Signed Rabi angle accumulated over a duration.
  double rabi_angle(double duration) const;

  /// Same physics at a different step duration (S and tau rescale consistently).
  MeasurementConfig with_dt(double new_dt) const;

  /// Checks every stored invariant; throws DomainError on violation.
  void validate() const;
};

MeasurementConfig config_from_physical(double chi_over_kappa, double nbar, double eta_m,
                                       double kappa, double dt, double T2star,
                                       double Omega, MeasurementAxis axis);

/// Builds a config from the characteristic projection time tau. The photon
/// number is solved for given chi/kappa and kappa, so all invariants hold.
MeasurementConfig config_from_timescale(double tau, double dt, double eta_m, double T2star,
                                        double Omega, MeasurementAxis axis,
                                        double chi_over_kappa = 0.05,
                                        double kappa = 2.0 * kPi * 1.0e7);

/// Cavity phase difference between the two qubit states, 4 |chi| / kappa.
double phase_shift(const MeasurementConfig& config);

struct MeasurementRecord {
  std::vector<double> samples;
  double dt = 0.0;
  std::uint64_t seed = 0;
  MeasurementAxis axis = MeasurementAxis::Z;

  std::size_t size() const { return samples.size(); }
  double mean() const;
  void validate() const;
};

/// Conditioned states q_k at times t_k = k dt, k = 0..n.
struct Trajectory {
  std::vector<BlochVector> states;
  std::vector<double> times;

  std::size_t size() const { return states.size(); }
  double dt() const;
  void validate() const;
};

/// Uniform time grid t_k = k dt for k = 0..n_points-1.
std::vector<double> time_grid(std::size_t n_points, double dt);

/// 2x2 Hermitian matrix stored as [[a, b], [conj(b), d]].
class HermitianMatrix2 {
public:
  HermitianMatrix2() = default;
  HermitianMatrix2(double a, std::complex<double> b, double d) : a_(a), b_(b), d_(d) {}

  static HermitianMatrix2 identity() { return {1.0, 0.0, 1.0}; }
  static HermitianMatrix2 from_bloch(const BlochVector& q);
  /// Hermitian part of m; the anti-Hermitian part is discarded.
  static HermitianMatrix2 from_matrix(const Eigen::Matrix2cd& m);

  double a() const { return a_; }
  std::complex<double> b() const { return b_; }
  double d() const { return d_; }

  double trace() const { return a_ + d_; }
  /// Eigenvalues in ascending order.
  std::pair<double, double> eigenvalues() const;
  Eigen::Matrix2cd matrix() const;
  /// Bloch vector of the unit-trace normalization.
  BlochVector to_bloch() const;
  HermitianMatrix2 scaled(double factor) const { return {a_ * factor, b_ * factor, d_ * factor}; }
  HermitianMatrix2 normalized() const { return scaled(1.0 / trace()); }

private:
  double a_ = 0.0;
  std::complex<double> b_{0.0, 0.0};
  double d_ = 0.0;
};

} // namespace qtraj
