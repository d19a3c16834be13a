#include "qc/spectra.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace qc::spectra {

namespace {

constexpr cplx I{0.0, 1.0};
// (e/hbar)/c: converts eV * nm into a dimensionless phase k*dz.
constexpr double k_ev_nm = 5.0677307e-3;

struct BandInfo {
    double edge_max;  // +inf for true semi-infinite bands
    double scale;     // decay/extent scale for the rational map
    double power;     // endpoint-regularizing map exponent (1/s for Ohmic)
};

BandInfo band_info(const SpectralDensity& sd) {
    if (const auto* o = std::get_if<OhmicFamily>(&sd))
        return {std::numeric_limits<double>::infinity(), o->omega_c,
                std::clamp(1.0 / o->s, 0.125, 8.0)};
    if (const auto* p = std::get_if<PlasmonicInterface>(&sd))
        return {p->band_max, p->band_max, 1.0};
    const auto& d = std::get<DiscreteModes>(sd);
    double m = 0.0;
    for (const auto& md : d.modes) m = std::max(m, md.omega);
    return {m, std::max(m, 1.0), 1.0};
}

double integrate_band(const SpectralDensity& sd,
                      const std::function<double(double)>& f,
                      const quad::Options& opt = {}) {
    const auto b = band_info(sd);
    if (std::isinf(b.edge_max)) return quad::integrate_semi_inf(f, b.scale, opt, b.power);
    return quad::integrate_power_mapped(f, b.edge_max, opt, b.power);
}

// ---- plasmonic dispersion integral ----

cplx fresnel_rp(const PlasmonicInterface& p, cplx eps_m, double s) {
    // axial wavevectors in units of k_d; evanescent branch Im >= 0
    cplx kzd = std::sqrt(cplx(1.0 - s * s, 0.0));
    if (kzd.imag() < 0.0) kzd = -kzd;
    cplx kzm = std::sqrt(eps_m / p.eps_d - s * s);
    if (kzm.imag() < 0.0) kzm = -kzm;
    return (p.eps_d * kzm - eps_m * kzd) / (p.eps_d * kzm + eps_m * kzd);
}

double plasmonic_J(const PlasmonicInterface& p, double omega) {
    if (omega <= 0.0) return 0.0;
    const double omega_ev = omega * p.omega0_ev;
    const cplx eps_m = drude_permittivity(p, omega);
    const double kd_dz = std::sqrt(p.eps_d) * omega_ev * p.dz_nm * k_ev_nm;

    quad::Options opt;
    opt.rel_tol = 1e-10;

    // s in [0, 1): substitute s = sin(theta); the 1/sqrt(1-s^2) factor cancels.
    auto prop = [&](double th) {
        const double s = std::sin(th);
        const double s3 = s * s * s;
        const cplx rp = fresnel_rp(p, eps_m, s);
        const cplx phase = std::exp(2.0 * I * std::cos(th) * kd_dz);
        return s3 * (1.0 - rp * phase);
    };
    const double re_prop = quad::integrate_c(prop, 0.0, 0.5 * pi, opt).real();

    // s in (1, inf): substitute s = cosh(phi); only the reflected term has a
    // real part there, and it decays like exp(-2 kd dz sinh(phi)).
    const double sinh_max = 38.0 / std::max(2.0 * kd_dz, 1e-12);
    const double phi_max = std::asinh(sinh_max);
    auto evan = [&](double phi) {
        const double s = std::cosh(phi);
        const double damp = std::exp(-2.0 * kd_dz * std::sinh(phi));
        const cplx rp = fresnel_rp(p, eps_m, s);
        // Re[(1 - rp*damp)/(i sinh)] integrated in phi: Im(1 - rp*damp)
        return (s * s * s) * std::imag(1.0 - rp * damp);
    };
    const double re_evan = quad::integrate(evan, 0.0, phi_max, opt);

    const double gamma0 = p.gamma0_ev / p.omega0_ev;
    const double pref = 3.0 * gamma0 * std::sqrt(p.eps_d) * omega * omega * omega / (4.0 * pi);
    return pref * (re_prop + re_evan);
}

} // namespace

void validate(const SpectralDensity& sd) {
    if (const auto* o = std::get_if<OhmicFamily>(&sd)) {
        require_finite(o->eta, "ohmic.eta");
        require_finite(o->s, "ohmic.s");
        require_finite(o->omega_c, "ohmic.omega_c");
        require(o->eta >= 0.0, "ohmic.eta must be >= 0");
        require(o->s > 0.0, "ohmic.s must be > 0");
        require(o->omega_c > 0.0, "ohmic.omega_c must be > 0");
        require(o->omega_ref >= 0.0, "ohmic.omega_ref must be >= 0");
    } else if (const auto* p = std::get_if<PlasmonicInterface>(&sd)) {
        for (double v : {p->dz_nm, p->omega0_ev, p->gamma0_ev, p->eps_d, p->eps_inf,
                         p->omega_p_ev, p->gamma_p_ev, p->band_max})
            require_finite(v, "plasmonic parameter");
        require(p->dz_nm > 0.0 && p->omega0_ev > 0.0 && p->gamma0_ev > 0.0,
                "plasmonic geometry/frequency parameters must be positive");
        require(p->eps_d > 0.0 && p->omega_p_ev > 0.0 && p->gamma_p_ev >= 0.0,
                "plasmonic material parameters out of range");
        require(p->band_max > 0.0, "plasmonic.band_max must be > 0");
    } else {
        const auto& d = std::get<DiscreteModes>(sd);
        for (const auto& m : d.modes) {
            require_finite(m.g, "mode coupling");
            require_finite(m.omega, "mode frequency");
            require(m.omega >= 0.0, "mode frequencies must be >= 0");
        }
    }
}

double evaluate_J(const SpectralDensity& sd, double omega) {
    validate(sd);
    require(omega >= 0.0, "evaluate_J requires omega >= 0");
    if (const auto* o = std::get_if<OhmicFamily>(&sd)) {
        if (omega == 0.0) return 0.0;
        // exp-log form: s*log(w) - w/wc underflows cleanly for huge w instead
        // of producing inf * 0
        return o->eta * std::pow(o->ref(), 1.0 - o->s) *
               std::exp(o->s * std::log(omega) - omega / o->omega_c);
    }
    if (const auto* p = std::get_if<PlasmonicInterface>(&sd)) return plasmonic_J(*p, omega);
    return 0.0; // atomic measure: zero almost everywhere
}

double band_map_power(const SpectralDensity& sd) { return band_info(sd).power; }
double band_scale(const SpectralDensity& sd) { return band_info(sd).scale; }

cplx kernel_f(const SpectralDensity& sd, double dt) {
    validate(sd);
    require_finite(dt, "kernel_f dt");
    if (const auto* o = std::get_if<OhmicFamily>(&sd)) {
        // \int w^s e^{-w(1/wc + i dt)} dw = Gamma(s+1) (1/wc + i dt)^{-(s+1)},
        // valid for all real dt (Re of the exponent stays positive).
        const cplx z = cplx(1.0 / o->omega_c, dt);
        return o->eta * std::pow(o->ref(), 1.0 - o->s) *
               boost::math::tgamma(o->s + 1.0) * std::pow(z, -(o->s + 1.0));
    }
    if (const auto* d = std::get_if<DiscreteModes>(&sd)) {
        cplx acc = 0.0;
        for (const auto& m : d->modes) acc += m.g * m.g * std::exp(-I * m.omega * dt);
        return acc;
    }
    const auto& p = std::get<PlasmonicInterface>(sd);
    quad::Options opt;
    opt.rel_tol = 1e-8;
    opt.max_depth = 20;
    auto f = [&](double w) { return plasmonic_J(p, w) * std::exp(-I * w * dt); };
    return quad::integrate_c(f, 0.0, p.band_max, opt);
}

namespace {

// \int J(w)/(w-E) dw over the band, E strictly below the band edge.
double resolvent_integral(const SpectralDensity& sd, double E) {
    if (const auto* d = std::get_if<DiscreteModes>(&sd)) {
        double acc = 0.0;
        for (const auto& m : d->modes) {
            require(m.omega != E, "resolvent evaluated at a mode frequency");
            acc += m.g * m.g / (m.omega - E);
        }
        return acc;
    }
    return integrate_band(sd, [&](double w) { return evaluate_J(sd, w) / (w - E); });
}

} // namespace

double level_shift(const SpectralDensity& sd, double energy) {
    validate(sd);
    require_finite(energy, "level_shift energy");
    if (std::holds_alternative<DiscreteModes>(sd) || energy <= 0.0)
        return -resolvent_integral(sd, energy);

    const auto b = band_info(sd);
    if (!std::isinf(b.edge_max) && energy >= b.edge_max)
        return -resolvent_integral(sd, energy);

    // Principal value by symmetric excision. The excised window [E-d, E+d]
    // contributes 2 d J'(E) + d^3 J'''(E)/9 + ..., odd powers only, so two
    // Richardson steps with ratio 2 leave O(d^5). Excision endpoints are
    // integration limits, never interior nodes, so the pole cannot collide
    // with a quadrature abscissa.
    const double d0 = std::min(0.25 * energy, 0.125 * b.scale);
    auto excised = [&](double d) {
        quad::Options opt;
        opt.rel_tol = 1e-10;
        const double left = quad::integrate_power_mapped(
            [&](double w) { return evaluate_J(sd, w) / (energy - w); }, energy - d, opt,
            b.power);
        auto tail = [&](double w) { return evaluate_J(sd, w) / (energy - w); };
        double right;
        if (std::isinf(b.edge_max)) {
            auto shifted = [&](double x) { return tail(energy + d + x); };
            right = quad::integrate_semi_inf(shifted, b.scale + energy, opt);
        } else {
            right = quad::integrate(tail, energy + d, b.edge_max, opt);
        }
        return left + right;
    };
    const double f0 = excised(d0);
    const double f1 = excised(0.5 * d0);
    const double f2 = excised(0.25 * d0);
    const double r0 = 2.0 * f1 - f0;
    const double r1 = 2.0 * f2 - f1;
    return (8.0 * r1 - r0) / 7.0;
}

double bound_state_y(const SpectralDensity& sd, double omega0, double energy) {
    validate(sd);
    require(energy <= 0.0, "bound_state_y expects energy at or below the band edge");
    if (energy == 0.0) {
        // J(w)/w is integrable at the band edge for all supported models.
        if (const auto* d = std::get_if<DiscreteModes>(&sd)) {
            double acc = 0.0;
            for (const auto& m : d->modes) {
                require(m.omega > 0.0, "band-edge evaluation needs all mode frequencies > 0");
                acc += m.g * m.g / m.omega;
            }
            return omega0 - acc;
        }
        return omega0 - integrate_band(sd, [&](double w) {
                   return w > 0.0 ? evaluate_J(sd, w) / w : 0.0;
               });
    }
    return omega0 - resolvent_integral(sd, energy);
}

std::optional<BoundState> bound_state_solve(const SpectralDensity& sd, double omega0) {
    validate(sd);
    require(omega0 > 0.0, "bound_state_solve requires omega0 > 0");
    if (bound_state_y(sd, omega0, 0.0) >= 0.0) return std::nullopt;

    // g(E) = y(E) - E is strictly decreasing with g(0) < 0; double the lower
    // bracket until g > 0, then bisect.
    auto g = [&](double E) { return bound_state_y(sd, omega0, E) - E; };
    double lo = -std::max(omega0, band_info(sd).scale);
    int guard = 0;
    while (g(lo) <= 0.0) {
        lo *= 2.0;
        if (++guard > 120)
            throw numeric_error("bound_state_solve: bracketing failed although y(0) < 0");
    }
    double hi = 0.0;
    const double tol = 1e-12 * omega0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double eb = 0.5 * (lo + hi);

    double i2;
    if (const auto* d = std::get_if<DiscreteModes>(&sd)) {
        i2 = 0.0;
        for (const auto& m : d->modes) i2 += m.g * m.g / ((eb - m.omega) * (eb - m.omega));
    } else {
        i2 = integrate_band(sd, [&](double w) {
            const double dw = eb - w;
            return evaluate_J(sd, w) / (dw * dw);
        });
    }
    return BoundState{eb, 1.0 / (1.0 + i2)};
}

cplx drude_permittivity(const PlasmonicInterface& p, double omega) {
    require(omega > 0.0, "drude_permittivity requires omega > 0");
    const double w = omega * p.omega0_ev;
    return p.eps_inf - p.omega_p_ev * p.omega_p_ev / (w * cplx(w, p.gamma_p_ev));
}

cplx spp_dispersion(const PlasmonicInterface& p, double omega) {
    validate(SpectralDensity{p});
    const cplx eps_m = drude_permittivity(p, omega);
    const cplx den = eps_m + p.eps_d;
    if (std::abs(den) < 1e-12 * p.eps_d)
        throw numeric_error("spp_dispersion: surface-plasmon resonance pole eps_m = -eps_d");
    cplx k = omega * std::sqrt(eps_m * p.eps_d / den);
    if (k.imag() < 0.0) k = -k;
    return k;
}

} // namespace qc::spectra
