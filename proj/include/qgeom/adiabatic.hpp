#ifndef QGEOM_ADIABATIC_HPP
#define QGEOM_ADIABATIC_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qgeom/model.hpp"

namespace qgeom::adiabatic {

// Time profile for one driven parameter on [0, duration].
struct DriveSchedule {
    std::string param_name;
    std::function<double(double)> lambda;
    std::function<double(double)> lambda_dot;
    double duration = 0;
    double rate_scale = 0; // max |lambda_dot|
};

// Quintic smoothstep ramp from l0 to l1: both lambda_dot and lambda_ddot
// vanish at the endpoints, so runs started in an eigenstate have a soft start.
DriveSchedule smoothstep_schedule(const std::string& param, double l0, double l1, double duration);

struct TrajectoryRecord {
    std::vector<double> times;
    std::map<std::string, std::vector<double>> observables;
    std::vector<CVector> states; // sampled states, aligned with times
    double norm_drift = 0;
    double dt = 0;
};

// Exact midpoint-exponential propagation of the driven model:
// psi -> exp(-i H(t + dt/2) dt / hbar) psi, each step unitary to rounding.
// `observable_names` may name registered observables or "energy"; sampled
// states are stored only when keep_states is set.
TrajectoryRecord propagate(const Model& model, const Params& base, const DriveSchedule& drive,
                           const StateVector& psi0, double dt,
                           const std::vector<std::string>& observable_names = {},
                           int sample_stride = 1, bool keep_states = false);

// <dH/dkappa> in the instantaneous ground state minus hbar * Omega(kappa,
// lambda) * lambda_dot: the adiabatic value of a Hamiltonian-derivative
// observable.
double predict_hf(const Model& model, const Params& at, const std::string& kappa,
                  const std::string& lambda, double lambda_dot);

// Generic-observable form: <O> plus the first-order sum-over-states response
// to the drive.
double predict_generic(const Model& model, const Params& at, const CMatrix& O,
                       const std::string& lambda, double lambda_dot);

struct RatePoint {
    double rate_scale = 0;
    double error = 0; // |O_tdse(t*) - O_adiabatic(t*)|
};

struct RateScalingResult {
    double slope = 0;     // d log(error) / d log(rate)
    double residual = 0;  // max |log-error fit residual|
    std::vector<RatePoint> points;
};

// Drives lambda over the same profile at several durations, measures the
// TDSE-vs-adiabatic error of one observable around measure_frac * duration,
// and fits the log-log slope (2 for a first-order-adiabatic prediction).
// The error is the mean of |O_tdse(t) - O_adiabatic(t)| over one instantaneous
// gap period centered on the measurement time; this averages out the
// transition-amplitude oscillation riding on the smooth power law. A zero
// window width falls back to the pointwise difference.
RateScalingResult rate_scaling_study(const Model& model, const Params& base,
                                     const std::string& lambda, double l0, double l1,
                                     const std::vector<double>& durations,
                                     const std::string& observable_name, double dt,
                                     double measure_frac = 0.5, double window_periods = 1.0);

} // namespace qgeom::adiabatic

#endif
