// floquet.hpp — piecewise-constant driven models in the single-excitation
// sector: one-period propagators, quasienergy spectra, Floquet-bound-state
// detection, stroboscopic evolution.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "qc/common.hpp"

namespace qc::floquet {

struct PiecewiseModel {
    std::vector<Eigen::MatrixXd> pieces;  // real-symmetric sector Hamiltonians
    std::vector<double> durations;
    std::vector<Eigen::Index> system_sites; // components whose weight defines localization
    double env_band_min = 0.0;            // static environment band, for plots
    double env_band_max = 0.0;
    double omega_b = 0.0;                 // battery qubit frequency (battery model)

    double period() const;
    Eigen::Index dim() const { return pieces.empty() ? 0 : pieces.front().rows(); }
    void validate() const;
};

// Driven spin-1/2 coupled to an XX chain (system site 0, chain sites 1..L), in
// the frame with the uniform Zeeman background factored out. Two pieces:
// Zeeman modulation a1 for tau, a2 for T - tau.
PiecewiseModel build_spinchain(int L, double lambda, double J, double g, double a1,
                               double a2, double tau, double T);

struct BatteryOptions {
    bool reduce_shells = true; // exact reduction of degenerate lattice shells
    int dim_cap = 8192;
};

// Charger-battery pair, each qubit coupled to its own N x N square-lattice
// bosonic environment with dispersion varpi - 2q(cos kx + cos ky) and uniform
// coupling g/N. Pieces follow the charge (f=1) / store (f=0) / discharge (f=1)
// protocol. Component 0 is the battery qubit, component 1 the charger.
PiecewiseModel build_battery(int N, double omega_b, double omega_c, double kappa,
                             double g, double q, double varpi, double tau_c,
                             double tau_s, double tau_d, const BatteryOptions& opt = {});

Eigen::MatrixXcd one_period_propagator(const PiecewiseModel& model);

struct FbsOptions {
    double gap_factor = 5.0;       // detached if gap > gap_factor * median spacing
    double weight_threshold = 0.1; // system-site weight threshold
};

enum class StateClass : std::uint8_t { Band = 0, FBS = 1, Ambiguous = 2 };

struct FloquetSpectrum {
    double T = 0.0;
    std::vector<double> quasienergy;   // folded into (-pi/T, pi/T]
    Eigen::MatrixXcd modes;            // orthonormal columns (Hermitian models)
    std::vector<double> system_weight;
    std::vector<StateClass> classification;
    std::vector<double> detachment_gap; // circular gap to the band set
    double median_spacing = 0.0;
    double env_band_min = 0.0, env_band_max = 0.0;
};

// Quasienergies and Floquet modes of a unitary one-period propagator.
FloquetSpectrum quasienergy_spectrum(const Eigen::MatrixXcd& UT, double T,
                                     const PiecewiseModel& model,
                                     const FbsOptions& opt = {});

std::vector<std::size_t> detect_fbs(const FloquetSpectrum& spectrum);

// Exact piecewise evolution, invoking `sample` at every sampled time
// (samples_per_period per period, plus t = 0).
void stroboscopic_evolve(const PiecewiseModel& model, const Eigen::VectorXcd& psi0,
                         int n_periods, int samples_per_period,
                         const std::function<void(double, const Eigen::VectorXcd&)>& sample);

struct ObservableSeries {
    std::vector<double> t;
    std::vector<double> value;
};

// P_t = |c_0(t)|^2 for the excitation starting on the system spin.
ObservableSeries spinchain_population(const PiecewiseModel& model, int n_periods,
                                      int samples_per_period);

// Fidelity of the half-excited initial state (|up_0> + |down_0>)/sqrt(2):
// F_t = 1/2 + Re[c_0(t) b*(t)]/2 with b the vacuum phase in the same frame.
ObservableSeries spinchain_fidelity(const PiecewiseModel& model, double lambda, double a1,
                                    double a2, double tau, int n_periods,
                                    int samples_per_period);

// Battery energy E(t) = omega_b |<b|psi(t)>|^2 from the charged initial state
// |g_b, e_c>.
ObservableSeries battery_energy(const PiecewiseModel& model, int n_periods,
                                int samples_per_period);

struct AsymptoticProjection {
    int n_fbs = 0;
    double mean = 0.0;           // strobe average of the FBS-only reconstruction
    double beat_frequency = 0.0; // |eps_1 - eps_2| for two FBS
    double amplitude = 0.0;      // oscillation amplitude of the two-FBS beat
};

// Long-time observable reconstructed from the FBS components only, for the
// projector onto `site`: 0 FBS -> 0, 1 FBS -> constant, 2 FBS -> beat at the
// quasienergy difference.
AsymptoticProjection asymptotic_projection(const FloquetSpectrum& spectrum,
                                           const Eigen::VectorXcd& psi0,
                                           Eigen::Index site);

} // namespace qc::floquet
