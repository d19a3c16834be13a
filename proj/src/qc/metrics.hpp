// metrics.hpp — decoherence and metrology figures of merit
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "qc/common.hpp"
#include "qc/dynamics.hpp"

namespace qc::metrics {

// Wootters concurrence of a two-qubit state.
double concurrence(const Eigen::Matrix4cd& rho, double phys_tol = 1e-8);

// BLP measure for the optimal pair rho1(0)=|g><g|, rho2(0)=|e><e|, for which
// the trace distance is |u(t)|^2. Integrated on the trajectory grid up to tau;
// the sigma>0 form and the closed form are algebraically identical on the
// grid and both are checked.
double non_markovianity(const dynamics::AmplitudeTrajectory& traj, double tau);

struct QslResult {
    double tau_qsl = 0.0;
    bool stationary = false; // |u(tau)| = 1 with zero accumulated variation
};
QslResult qsl_time(const dynamics::AmplitudeTrajectory& traj, double tau);

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi0);

// ---- metrology ----

// u(t) on a fixed time grid, for the encoding parameter shifted by `shift`
// from its working point. The numeric-derivative pipeline re-evaluates the
// provider at shifted parameters; for simulated dynamics this re-solves the
// amplitude equation.
using UProvider = std::function<std::vector<cplx>(double shift)>;

enum class Scheme { MZI, Ramsey };

struct PrecisionCurve {
    Scheme scheme = Scheme::MZI;
    double resource = 0.0; // photons N or atoms n
    std::vector<double> t;
    std::vector<double> delta;
    std::vector<std::uint8_t> defined; // 0 where the derivative denominator vanished
    // analytic limits evaluated on the same grid (empty when not applicable)
    std::vector<double> snl;
    std::vector<double> zeno;
    std::vector<double> hl;
    std::vector<double> bound_form;
    double markov_min = 0.0; // e*kappa/sqrt(2N) or SNL-equivalent scalar, 0 if unset
};

struct MziParams {
    double omega0 = 1.0;
    double n_total = 100.0;   // N
    double beta_frac = 0.0;   // sinh^2(r)/N in [0,1)
    double phase_coh = 0.0;   // varphi of alpha = |alpha| e^{i varphi}
    double phase_sq = 0.0;    // phi of xi = r e^{i phi}; optimal readout at phi = 2 varphi
    double deriv_step = 0.0;  // central-difference step; default 1e-4*omega0
    double markov_kappa = 0.0;
    double bound_residue = 0.0; // Z, enables the bound-state limit column
};

PrecisionCurve mzi_precision(const UProvider& u_of_gamma, const std::vector<double>& tgrid,
                             const MziParams& p);

struct RamseyParams {
    double omega0 = 1.0;
    int n_atoms = 1;
    double t_total = 1.0;     // repetition budget T
    double deriv_step = 0.0;  // default 1e-4*omega0
    double markov_kappa = 0.0;
    double bound_residue = 0.0;
};

PrecisionCurve ramsey_precision(const UProvider& u_of_omega0, const std::vector<double>& tgrid,
                                const RamseyParams& p);

// Golden-section minimizer on [a, b] for smooth unimodal objectives.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-10);

// M-bar and (delta M)^2 of the lossy MZI readout for a given encoded
// amplitude; exposed for oracle-style checks.
double mzi_mean(cplx u, double omega0, double t, const MziParams& p);
double mzi_var(cplx u, double omega0, double t, const MziParams& p);

} // namespace qc::metrics
