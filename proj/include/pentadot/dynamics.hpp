#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pentadot/encoding.hpp"
#include "pentadot/gates.hpp"
#include "pentadot/model.hpp"

namespace pentadot {

// Times are in units of hbar/|t0|.

enum class RampShape { Sudden, Linear, Cosine };

std::string to_string(RampShape r);
RampShape ramp_from_string(const std::string& s);

/// Ramp profile on s in [0, 1]: 1 for sudden, s for linear, (1 - cos(pi s))/2 for cosine.
double ramp_profile(RampShape r, double s);

/// One pulse: the delta is scaled by a trapezoid envelope that rises over
/// ramp_time, holds, and falls over the final ramp_time.
struct PulseSegment {
  double duration = 0.0;
  DeviceDelta delta;
  RampShape ramp = RampShape::Cosine;
  double ramp_time = 0.0;

  /// Envelope value in [0, 1] at time t inside the segment.
  double envelope(double t) const;
};

struct PropagatorOptions {
  /// Bound on the a-posteriori Krylov error of each step.
  double tol = 1e-10;
  int krylov_dim = 30;
  /// Ramps are sampled as piecewise-constant pieces of this length (midpoint value).
  double ramp_substep = 0.25;
  std::size_t max_steps = 5'000'000;
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;
  PropagatorOptions options;

  double total_duration() const;
  /// Throws std::invalid_argument for nonpositive durations or ramps longer than half a segment.
  void validate() const;
};

class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ObserverState {
  double time = 0.0;
  std::size_t segment = 0;
  /// Envelope of the active segment's delta.
  double envelope = 0.0;
  const Eigen::MatrixXcd& states;
};

/// Called at the schedule start, at every multiple of the sample interval and
/// at the end.
using Observer = std::function<void(const ObserverState&)>;

struct PropagationStats {
  std::size_t steps = 0;
  std::size_t matvecs = 0;
  /// Largest |norm - 1| seen over the columns at the end.
  double norm_drift = 0.0;
};

/// Evolves each column of `states` under H(g + envelope * delta) segment by
/// segment. Columns must be normalized and belong to sector `b`.
Eigen::MatrixXcd propagate(const Eigen::MatrixXcd& states, const DeviceGraph& g, const SectorBasis& b,
                           const PulseSchedule& sched, PropagationStats* stats = nullptr,
                           const Observer& observer = {}, double sample_interval = 0.0);

struct RealizedGate {
  /// M[j, k] = <basis_j| U |basis_k>.
  Eigen::MatrixXcd matrix;
  /// 1 - min_k ||P U basis_k||^2.
  double leakage = 0.0;
  /// ||M^dag M - 1||_F.
  double unitarity_deficit = 0.0;
  PropagationStats stats;
};

RealizedGate realized_unitary(const QubitSetup& setup, const PulseSchedule& sched);

struct TrajectorySample {
  double time = 0.0;
  /// Mean <H(t)> over the propagated basis vectors.
  double energy = 0.0;
  double leakage = 0.0;
  /// Largest <S^2> over the propagated basis vectors.
  double s2 = 0.0;
};

/// Propagates the encoded basis and samples energy, leakage and S^2.
std::vector<TrajectorySample> trajectory(const QubitSetup& setup, const PulseSchedule& sched, double sample_interval);

/// CSV with header `time,energy,leakage,s2`.
std::string trajectory_csv(const std::vector<TrajectorySample>& samples);

/// Average of the effective Hamiltonian over a ramp, as a multiple of the ramp
/// time: int_0^1 H_eff(profile(s) * delta) ds by Gauss-Legendre quadrature.
Eigen::MatrixXcd ramp_average(const QubitSetup& setup, const DeviceDelta& delta, RampShape ramp, int nodes);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct CPhaseRealizationConfig {
  double couple_dt = 0.3;
  double local_dt = -0.2;
  RampShape ramp = RampShape::Cosine;
  double ramp_time = 50.0;
  int quadrature_nodes = 12;
  std::vector<std::pair<int, int>> coupling_edges = default_coupling_edges();
};

struct CPhaseSchedule {
  PulseSchedule schedule;
  CPhasePlan plan;
  CPhaseRealizationConfig config;
};

/// Plateau generators and ramp phases of a realization. Ramp phases scale
/// linearly with the ramp time, so one calibration serves every ramp time.
struct CPhaseCalibration {
  CPhaseRealizationConfig config;
  Eigen::Matrix4cd g_couple = Eigen::Matrix4cd::Zero();
  Eigen::Matrix2cd h_local = Eigen::Matrix2cd::Zero();
  /// Diagonal phase picked up per unit ramp time by one ramp of every pulse.
  Eigen::Vector4d ramp_phase = Eigen::Vector4d::Zero();
};

CPhaseCalibration calibrate_cphase(const QubitSetup& two, const QubitSetup& one, const CPhaseRealizationConfig& cfg);

/// Builds a controlled-phase pulse sequence: a coupling pulse, then local
/// pulses on (0,1),(0,2) of A and (5,8),(5,9) of B. Plateau generators come
/// from `two` for the coupling and from the single-qubit `one` lifted onto
/// each qubit (the stars are disconnected while the coupling is off). Phases
/// picked up during ramps enter solve_cphase as offsets; A and B share one
/// segment when their areas agree.
CPhaseSchedule build_cphase_schedule(const QubitSetup& two, const QubitSetup& one, const CPhaseRealizationConfig& cfg);
/// Same, from a calibration; cfg.ramp_time is replaced by `ramp_time`.
CPhaseSchedule build_cphase_schedule(const CPhaseCalibration& cal, double ramp_time);

}  // namespace pentadot
