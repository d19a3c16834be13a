// spectra.hpp — environment spectral densities, memory kernels, level shifts,
// and the system-environment bound-state condition.
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "qc/common.hpp"
#include "qc/quad.hpp"

namespace qc::spectra {

// J(w) = eta * w^s * ref^(1-s) * exp(-w/omega_c), ref = omega_ref (or omega_c
// when omega_ref == 0). Both normalizations appear in the literature; the
// reference frequency is part of the model, not a convention hidden in code.
struct OhmicFamily {
    double eta = 0.0;
    double s = 1.0;
    double omega_c = 1.0;
    double omega_ref = 0.0; // 0 -> omega_c

    double ref() const { return omega_ref > 0.0 ? omega_ref : omega_c; }
};

// Quantum emitter at distance dz above a planar Drude-metal interface,
// dipole normal to the surface. All frequencies handed to the generic
// operations are in units of the emitter frequency omega0.
struct PlasmonicInterface {
    double dz_nm = 1.2;
    double omega0_ev = 1.2;
    double gamma0_ev = 1e-4;
    double eps_d = 25.0;
    double eps_inf = 3.7;
    double omega_p_ev = 9.2;
    double gamma_p_ev = 0.021;
    // Band cutoff (units of omega0) used by kernel/level-shift/bound-state
    // integrals; the raw J(w) of the dispersion integral grows like w^3.
    double band_max = 5.0;
};

struct DiscreteModes {
    struct Mode {
        double g = 0.0;     // coupling
        double omega = 0.0; // mode frequency, >= 0
    };
    std::vector<Mode> modes;
};

using SpectralDensity = std::variant<OhmicFamily, PlasmonicInterface, DiscreteModes>;

struct BoundState {
    double energy = 0.0;  // E_b, below the band edge
    double residue = 1.0; // Z in (0, 1]
};

void validate(const SpectralDensity& sd);

// J(w) for w >= 0. Point evaluation of DiscreteModes is 0 almost everywhere.
double evaluate_J(const SpectralDensity& sd, double omega);

// Exponent of the endpoint-regularizing quadrature map for band integrals
// weighted by J (1/s for the Ohmic family), and the natural decay scale.
double band_map_power(const SpectralDensity& sd);
double band_scale(const SpectralDensity& sd);

// Memory kernel f(dt) = \int_0^inf J(w) e^{-i w dt} dw. Conjugate-symmetric:
// f(-dt) = conj(f(dt)). Closed form for the Ohmic family, finite sum for
// discrete modes, quadrature otherwise.
cplx kernel_f(const SpectralDensity& sd, double dt);

// Level shift Delta(E) = P.V. \int_0^inf J(w)/(E-w) dw. Ordinary integral for
// E < 0; symmetric excision with Richardson extrapolation inside the band.
double level_shift(const SpectralDensity& sd, double energy);

// y(E) = omega0 - \int J(w)/(w-E) dw, the left-hand side of the bound-state
// condition y(E) = E. Strictly decreasing for E below the band.
double bound_state_y(const SpectralDensity& sd, double omega0, double energy);

// Unique root E_b < 0 of y(E) = E when y(0) < 0, with residue
// Z = [1 + \int J(w)/(E_b - w)^2 dw]^{-1}; absent otherwise.
std::optional<BoundState> bound_state_solve(const SpectralDensity& sd, double omega0);

// Drude permittivity at omega (units of omega0 of the given interface model).
cplx drude_permittivity(const PlasmonicInterface& p, double omega);

// SPP dispersion k(w) = (w/c) sqrt(eps_m eps_d / (eps_m + eps_d)), returned in
// units of omega0/c, branch Im k >= 0. Throws numeric_error at the
// surface-plasmon resonance pole eps_m + eps_d = 0.
cplx spp_dispersion(const PlasmonicInterface& p, double omega);

} // namespace qc::spectra
