// dynamics.hpp — exact amplitude dynamics u(t), time-local master-equation
// rates at zero and finite temperature, and reduced-state propagation.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qc/common.hpp"
#include "qc/spectra.hpp"

namespace qc::dynamics {

struct AmplitudeTrajectory {
    double omega0 = 0.0;
    double h = 0.0;                // uniform step
    std::vector<double> t;         // t[k] = k*h
    std::vector<cplx> u;           // u(0) = 1
    std::vector<cplx> udot;        // scheme-exact derivative at each node
    std::vector<double> v;         // thermal noise function, empty at zero T
    std::vector<double> vdot;

    std::size_t size() const { return t.size(); }
    bool has_thermal() const { return !v.empty(); }
};

// Zero-temperature convention: gamma = -2 Re[udot/u], omega = -Im[udot/u], so
// the excited population obeys dP/dt = -gamma P. The finite-temperature decay
// rate of the oscillator master equation is Gamma = gamma/2.
struct RateFunctions {
    std::vector<double> gamma;
    std::vector<double> omega;
    std::vector<double> gamma_beta;   // thermal excitation rate, empty at zero T
    std::vector<std::uint8_t> defined; // 0 where u crossed zero; rates not interpolated

    std::size_t size() const { return gamma.size(); }
};

struct SolverOptions {
    double min_abs_u = 1e-12;      // below this the rates are flagged undefined
    bool validate_step = true;
};

// Volterra integro-differential solve of
//   udot + i omega0 u + \int_0^t f(t-s) u(s) ds = 0,  u(0) = 1
// by a trapezoidal predictor-corrector with the memory integral accumulated
// over the stored history (O(n^2) total).
AmplitudeTrajectory solve_u(const spectra::SpectralDensity& sd, double omega0,
                            double t_end, double h, const SolverOptions& opt = {});

// Laplace-decomposition route: bound-state pole plus band integral,
//   u(t) = Z e^{-i E_b t}
//        + \int_band J(E) e^{-i E t} / ([E - omega0 - Delta(E)]^2 + [pi J(E)]^2) dE.
cplx decompose_u(const spectra::SpectralDensity& sd, double omega0,
                 const std::optional<spectra::BoundState>& bound, double t);

RateFunctions rates_from_u(const AmplitudeTrajectory& traj, const SolverOptions& opt = {});

// Fills traj.v / traj.vdot and rates.gamma_beta for inverse temperature beta:
//   v(t)      = \int_0^t\int_0^t u*(t1) mu(t1-t2) u(t2) dt1 dt2,
//   Gamma_b   = vdot + 2 v Gamma,       mu(x) = \int nbar(w) J(w) e^{-i w x} dw.
// v is accumulated through its exact derivative vdot = 2 Re[u*(t) m(t)] with
// m the running mu*u memory integral, one O(n) update per step.
void solve_thermal(const spectra::SpectralDensity& sd, double omega0, double beta,
                   AmplitudeTrajectory& traj, RateFunctions& rates);

enum class TempStatus { Finite, Divergent, Undefined };

struct EffectiveTemperature {
    TempStatus status = TempStatus::Undefined;
    double value = 0.0;      // k_B T_eff in frequency units, valid when Finite
};

struct AsymptoticRates {
    double Gamma = 0.0;      // tail average of gamma/2
    double Gamma_beta = 0.0;
    bool vanishing = false;  // both below the vanish tolerance
};

// Tail average over the final `window` fraction of the grid; rates count as
// vanishing below vanish_frac * pi * J(omega0).
AsymptoticRates asymptotic_rates(const AmplitudeTrajectory& traj, const RateFunctions& rates,
                                 double pi_J_omega0, double window = 0.1,
                                 double vanish_frac = 1e-3);

// T_eff = omega0 / ln(1 + 2 Gamma / Gamma_beta); divergent when both rates
// vanish, undefined when detailed balance is violated (negative rates).
EffectiveTemperature effective_temperature(const AsymptoticRates& rates, double omega0);

// ---- reduced-state propagation ----

struct SingleQubit {
    Eigen::Matrix2cd rho0; // basis {|e>, |g>}
};
struct TwoQubitBell {};    // (|gg> + |ee>)/sqrt(2), independent identical baths
struct GhzState {
    int n = 1;
};
struct Oscillator {
    double n0 = 0.0;       // initial mean photon number |alpha0|^2
};
using StateSpec = std::variant<SingleQubit, TwoQubitBell, GhzState, Oscillator>;

struct StateSeries {
    std::vector<Eigen::Matrix2cd> qubit;
    std::vector<Eigen::Matrix4cd> bell;
    std::vector<double> photon;
    int ghz_n = 0;
    std::vector<cplx> ghz_u;   // u(t) echo; GHZ matrices built on demand
};

StateSeries propagate(const AmplitudeTrajectory& traj, const RateFunctions* rates,
                      const StateSpec& initial);

// Closed-form n-qubit GHZ-encoded state for amplitude u (Eq.-(15)-type family);
// dimension 2^n, guarded to n <= 10.
Eigen::MatrixXcd ghz_density(cplx u, int n);

// Two-qubit Bell-evolved state at amplitude u (4x4, basis ee,eg,ge,gg).
Eigen::Matrix4cd bell_density(cplx u);

} // namespace qc::dynamics
