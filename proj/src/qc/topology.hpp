// topology.hpp — Floquet topological invariants for driven two-band models:
// effective Bloch decomposition, gap-closing classification, Chern numbers,
// Kitaev Majorana windings, non-Hermitian GBZ windings, open-boundary spectra.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "qc/common.hpp"

namespace qc::topology {

// ---- effective two-band decomposition ----

struct TwoBandResult {
    double eps = 0.0;          // scalar part of U_T = eps I + i r.sigma
    Eigen::Vector3d r;         // vector part
    Eigen::Vector3d h_eff;     // -acos(eps) rhat / T; undefined when gapless
    bool gapless = false;      // |r| ~ 0, i.e. eps = +-1
};

// One-period propagator of the two-piece drive H_j = h_j . sigma applied in
// the order (h1 for T1, then h2 for T2).
TwoBandResult two_band_floquet(const Eigen::Vector3d& h1, const Eigen::Vector3d& h2,
                               double T1, double T2);

struct ClosingCheck {
    bool at_zero = false;      // closing sits at quasienergy 0 (else pi/T)
    bool cond_resonance = false;   // T_j |h_j| = n_j pi for both pieces
    bool cond_collinear = false;   // hhat1.hhat2 = +-1 with theta1 -+ theta2 = n pi
    double res_resonance = 0.0;    // residual, units of pi
    double res_collinear = 0.0;
};

// Classify a band closing at momentum where eps = +-1 within tol.
ClosingCheck classify_closing(const Eigen::Vector3d& h1, const Eigen::Vector3d& h2,
                              double T1, double T2, double tol = 1e-3);

// ---- models ----

struct KitaevDriven {
    double mu = -10.0;
    double t1 = 1.0;
    double t2 = 0.0;
    double d1 = 1.0;           // |Delta_1|
    double d2 = 2.5;           // |Delta_2|
    double phi1 = pi / 4.0;
    double phi2 = -pi / 4.0;
    double T = 1.0;            // full period; half-period phase swap protocol
};

// Bloch vector of the Kitaev BdG Hamiltonian; piece 2 swaps the pairing
// phases. Phases are gauge-reduced internally to phi1 + phi2 = 0, where the
// swap protocol makes the piece Hamiltonians chiral partners under sigma_x.
Eigen::Vector3d kitaev_h(const KitaevDriven& m, int piece, double k);

struct HaldaneDriven {
    double t1 = 1.0;
    double t2 = 0.8;
    double mass = 0.0;
    double t3_a = 0.75, phi_a = -pi / 6.0;  // piece 1
    double t3_b = -0.75, phi_b = -pi / 2.0; // piece 2
    double T1 = 1.0, T2 = 1.0;
};

Eigen::Vector3d haldane_h(const HaldaneDriven& m, int piece, const Eigen::Vector2d& k);

struct NhsshDriven {
    double t1 = 2.0;
    double gamma = 1.0;
    double f = 1.0;            // intercell hopping, piece 1
    double q = 3.0;            // piece 2 uses q*f
    double T1 = 0.6, T2 = 0.6;
};

// ---- invariants ----

// Chern number of the lower effective band on a Q x Q grid of the primitive
// reciprocal cell (plaquette Berry-flux method; integer-valued by
// construction). Throws numeric_error on a gapless grid point.
int chern_number(const HaldaneDriven& m, int grid = 60);

struct HaldaneGapScan {
    double gap_zero = 0.0;     // min_k quasienergy distance to 0
    double gap_pi = 0.0;       // min_k distance to pi/T
    Eigen::Vector2d k_zero, k_pi;
};
HaldaneGapScan haldane_min_gap(const HaldaneDriven& m, int grid = 120);

struct KitaevInvariants {
    double w_a = 0.0, w_b = 0.0; // chiral-frame windings (piece-boundary frames)
    int n_zero = 0;              // |w_a + w_b| / 2  (MM pairs at quasienergy 0)
    int n_pi = 0;                // |w_a - w_b| / 2  (MM pairs at pi/T)
};
KitaevInvariants kitaev_invariants(const KitaevDriven& m, int contour_points = 4096);

// ---- open-boundary spectra ----

struct OpenSpectrum {
    double T = 0.0;
    std::vector<cplx> quasienergy;    // i ln(lambda)/T, principal branch
    std::vector<double> edge_weight;  // weight on the outer edge_frac sites
    double eigenvector_condition = 1.0;
};

struct EdgeCountOptions {
    double quasienergy_tol = 1e-3;   // fraction of the zone width 2 pi / T
    double weight_min = 0.6;
    double edge_frac = 0.1;
};

OpenSpectrum kitaev_open_spectrum(const KitaevDriven& m, int sites,
                                  const EdgeCountOptions& opt = {});
OpenSpectrum nhssh_open_spectrum(const NhsshDriven& m, int cells,
                                 const EdgeCountOptions& opt = {});

struct EdgeCounts {
    int n_zero = 0;   // mode pairs at quasienergy 0
    int n_pi = 0;     // mode pairs at pi/T
};
EdgeCounts count_edge_modes(const OpenSpectrum& sp, const EdgeCountOptions& opt = {});

// ---- non-Hermitian GBZ ----

// beta(k) on the generalized Brillouin zone; radius sqrt(|t1-g/2| / |t1+g/2|).
cplx gbz_map(double k, double t1, double gamma);
double gbz_radius(double t1, double gamma);

struct NhsshInvariants {
    double w1 = 0.0, w2 = 0.0;         // GBZ windings of the two chiral frames
    double w1_bz = 0.0, w2_bz = 0.0;   // conventional-BZ windings (may be half-integer)
    int n_zero = 0, n_pi = 0;          // edge-state counts predicted by the GBZ pair
};
NhsshInvariants nhssh_invariants(const NhsshDriven& m, int contour_points = 4096);

// Winding number of the undriven model (t2 fixed), on the GBZ or the unit circle.
double nhssh_static_winding(double t1, double gamma, double t2, bool on_gbz,
                            int contour_points = 4096);

// ---- Haldane ribbon ----

struct RibbonSpectrum {
    double T = 0.0;
    std::vector<double> k;                       // momentum along the strip
    std::vector<std::vector<double>> theta;      // eigenphases eps*T in (-pi, pi]
    std::vector<std::vector<double>> edge_weight; // weight on one chosen edge
};

// Zigzag strip of `width` cells, periodic along the a1-a2 direction.
RibbonSpectrum haldane_ribbon(const HaldaneDriven& m, int width, int n_k);

struct ChiralCounts {
    int at_zero = 0;  // net signed crossings of the 0 gap on the tracked edge
    int at_pi = 0;
};
ChiralCounts ribbon_edge_chirality(const RibbonSpectrum& rs, double window = 0.5,
                                   double weight_min = 0.4);

} // namespace qc::topology
