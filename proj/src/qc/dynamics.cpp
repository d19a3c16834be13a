#include "qc/dynamics.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

#include "qc/quad.hpp"

namespace qc::dynamics {

namespace {
constexpr cplx I{0.0, 1.0};
}

AmplitudeTrajectory solve_u(const spectra::SpectralDensity& sd, double omega0,
                            double t_end, double h, const SolverOptions& opt) {
    require(omega0 > 0.0, "solve_u requires omega0 > 0");
    require(h > 0.0 && t_end > 0.0, "solve_u requires positive h and t_end");
    const auto n = static_cast<std::size_t>(std::llround(t_end / h));
    require(n >= 2, "solve_u grid too short");

    // kernel values on the grid; f0 enters every corrector step
    std::vector<cplx> f(n + 1);
    for (std::size_t k = 0; k <= n; ++k) f[k] = spectra::kernel_f(sd, double(k) * h);

    if (opt.validate_step) {
        require(omega0 * h < 0.5, "solve_u: step too large, omega0*h must be < 0.5");
        if (h * std::abs(f[0]) > 0.25)
            throw validation_error("solve_u: step too large for the memory kernel, h*|f(0)| > 0.25");
    }

    AmplitudeTrajectory traj;
    traj.omega0 = omega0;
    traj.h = h;
    traj.t.resize(n + 1);
    traj.u.assign(n + 1, cplx{0.0, 0.0});
    traj.udot.assign(n + 1, cplx{0.0, 0.0});
    for (std::size_t k = 0; k <= n; ++k) traj.t[k] = double(k) * h;
    traj.u[0] = 1.0;
    traj.udot[0] = -I * omega0;

    const cplx* up = traj.u.data();
    const cplx* fp = f.data();
    for (std::size_t m = 0; m + 1 <= n; ++m) {
        const std::size_t idx = m + 1;
        // history part of the memory integral at t_{m+1}: nodes 0..m
        cplx hist = 0.5 * fp[idx] * up[0];
        for (std::size_t j = 1; j <= m; ++j) hist += fp[idx - j] * up[j];
        hist *= h;

        const cplx upred = traj.u[m] + h * traj.udot[m];
        const cplx ipred = hist + 0.5 * h * fp[0] * upred;
        const cplx udpred = -I * omega0 * upred - ipred;

        const cplx unew = traj.u[m] + 0.5 * h * (traj.udot[m] + udpred);
        const cplx inew = hist + 0.5 * h * fp[0] * unew;
        traj.u[idx] = unew;
        traj.udot[idx] = -I * omega0 * unew - inew;
    }
    return traj;
}

cplx decompose_u(const spectra::SpectralDensity& sd, double omega0,
                 const std::optional<spectra::BoundState>& bound, double t) {
    cplx acc = 0.0;
    if (bound) acc = bound->residue * std::exp(-I * bound->energy * t);

    quad::Options opt;
    opt.rel_tol = 1e-9;
    opt.max_depth = 20;
    auto density = [&](double E) -> cplx {
        const double J = spectra::evaluate_J(sd, E);
        if (J == 0.0) return 0.0;
        const double d = E - omega0 - spectra::level_shift(sd, E);
        return J * std::exp(-I * E * t) / (d * d + pi * pi * J * J);
    };
    if (const auto* o = std::get_if<spectra::OhmicFamily>(&sd)) {
        acc += quad::integrate_semi_inf_c(density, o->omega_c, opt, spectra::band_map_power(sd));
    } else if (const auto* p = std::get_if<spectra::PlasmonicInterface>(&sd)) {
        acc += quad::integrate_c(density, 0.0, p->band_max, opt);
    } else {
        throw validation_error("decompose_u requires a continuous spectral density");
    }
    return acc;
}

RateFunctions rates_from_u(const AmplitudeTrajectory& traj, const SolverOptions& opt) {
    const std::size_t n = traj.size();
    require(n >= 3, "rates_from_u needs at least three nodes");
    RateFunctions r;
    r.gamma.assign(n, 0.0);
    r.omega.assign(n, 0.0);
    r.defined.assign(n, 1);

    const bool have_udot = traj.udot.size() == n;
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(traj.u[k]) <= opt.min_abs_u) {
            r.defined[k] = 0;
            r.gamma[k] = r.omega[k] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        cplx ud;
        if (have_udot) {
            ud = traj.udot[k];
        } else if (k == 0) {
            ud = (traj.u[1] - traj.u[0]) / traj.h;
        } else if (k + 1 == n) {
            ud = (traj.u[n - 1] - traj.u[n - 2]) / traj.h;
        } else {
            ud = (traj.u[k + 1] - traj.u[k - 1]) / (2.0 * traj.h);
        }
        const cplx ratio = ud / traj.u[k];
        r.gamma[k] = -2.0 * ratio.real();
        r.omega[k] = -ratio.imag();
    }
    return r;
}

void solve_thermal(const spectra::SpectralDensity& sd, double omega0, double beta,
                   AmplitudeTrajectory& traj, RateFunctions& rates) {
    require(beta > 0.0 && std::isfinite(beta), "solve_thermal requires finite beta > 0");
    require(rates.size() == traj.size(), "solve_thermal: rates/trajectory size mismatch");
    const std::size_t n = traj.size();
    const double h = traj.h;

    // mu(k h) for k = 0..n-1; mu(-x) = conj(mu(x))
    quad::Options mopt;
    mopt.rel_tol = 1e-9;
    mopt.max_depth = 20;
    const double scale = spectra::band_scale(sd);
    const double power = spectra::band_map_power(sd);
    std::vector<cplx> mu(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = double(k) * h;
        auto f = [&](double w) -> cplx {
            if (w <= 0.0) return 0.0;
            const double nbar = 1.0 / std::expm1(beta * w);
            return nbar * spectra::evaluate_J(sd, w) * std::exp(-I * w * x);
        };
        if (std::holds_alternative<spectra::PlasmonicInterface>(sd))
            mu[k] = quad::integrate_c(f, 0.0, scale, mopt);
        else
            mu[k] = quad::integrate_semi_inf_c(f, scale, mopt, power);
    }

    traj.v.assign(n, 0.0);
    traj.vdot.assign(n, 0.0);
    rates.gamma_beta.assign(n, 0.0);
    const cplx* up = traj.u.data();
    for (std::size_t k = 0; k < n; ++k) {
        // m(t_k) = \int_0^{t_k} mu(t_k - s) u(s) ds, trapezoid
        cplx m = 0.0;
        if (k > 0) {
            m = 0.5 * (mu[k] * up[0] + mu[0] * up[k]);
            for (std::size_t j = 1; j < k; ++j) m += mu[k - j] * up[j];
            m *= h;
        }
        traj.vdot[k] = 2.0 * std::real(std::conj(up[k]) * m);
        if (k > 0) traj.v[k] = traj.v[k - 1] + 0.5 * h * (traj.vdot[k - 1] + traj.vdot[k]);
        if (rates.defined[k]) {
            const double Gamma = 0.5 * rates.gamma[k];
            rates.gamma_beta[k] = traj.vdot[k] + 2.0 * traj.v[k] * Gamma;
        } else {
            rates.gamma_beta[k] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    (void)omega0;
}

AsymptoticRates asymptotic_rates(const AmplitudeTrajectory&, const RateFunctions& rates,
                                 double pi_J_omega0, double window, double vanish_frac) {
    const std::size_t n = rates.size();
    require(n > 10, "asymptotic_rates: grid too short");
    const auto start = static_cast<std::size_t>(double(n) * (1.0 - window));
    double g = 0.0, gb = 0.0;
    std::size_t cnt = 0;
    for (std::size_t k = start; k < n; ++k) {
        if (!rates.defined[k]) continue;
        g += 0.5 * rates.gamma[k];
        if (!rates.gamma_beta.empty()) gb += rates.gamma_beta[k];
        ++cnt;
    }
    require(cnt > 0, "asymptotic_rates: all tail nodes undefined");
    AsymptoticRates out;
    out.Gamma = g / double(cnt);
    out.Gamma_beta = gb / double(cnt);
    const double tol = vanish_frac * std::abs(pi_J_omega0);
    out.vanishing = std::abs(out.Gamma) < tol && std::abs(out.Gamma_beta) < tol;
    return out;
}

EffectiveTemperature effective_temperature(const AsymptoticRates& r, double omega0) {
    EffectiveTemperature out;
    if (r.vanishing) {
        out.status = TempStatus::Divergent;
        return out;
    }
    if (r.Gamma < 0.0 || r.Gamma_beta < 0.0) {
        out.status = TempStatus::Undefined; // detailed balance violated
        return out;
    }
    if (r.Gamma_beta == 0.0) {
        out.status = TempStatus::Finite; // zero-temperature limit
        out.value = 0.0;
        return out;
    }
    out.status = TempStatus::Finite;
    out.value = omega0 / std::log1p(2.0 * r.Gamma / r.Gamma_beta);
    return out;
}

Eigen::Matrix4cd bell_density(cplx u) {
    const double p = std::norm(u);
    Eigen::Matrix2cd exc = Eigen::Matrix2cd::Zero();
    exc(0, 0) = p;
    exc(1, 1) = 1.0 - p;
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    rho += 0.5 * Eigen::Matrix4cd(Eigen::kroneckerProduct(exc, exc));
    rho(3, 3) += 0.5;
    rho(0, 3) += 0.5 * u * u;
    rho(3, 0) += 0.5 * std::conj(u * u);
    return rho;
}

Eigen::MatrixXcd ghz_density(cplx u, int n) {
    require(n >= 1 && n <= 10, "ghz_density supports 1 <= n <= 10");
    const double p = std::norm(u);
    const auto dim = std::size_t{1} << n;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    // [(p|e><e| + (1-p)|g><g|)^{\otimes n} + |g><g|^{\otimes n} + (u^n |e><g|^{\otimes n} + h.c.)]/2
    for (std::size_t b = 0; b < dim; ++b) {
        double w = 1.0;
        for (int q = 0; q < n; ++q) w *= (b >> q) & 1u ? (1.0 - p) : p; // bit 0 = |e>
        rho(b, b) += 0.5 * w;
    }
    rho(dim - 1, dim - 1) += 0.5;
    const cplx un = std::pow(u, n);
    rho(0, dim - 1) += 0.5 * un;
    rho(dim - 1, 0) += 0.5 * std::conj(un);
    return rho;
}

StateSeries propagate(const AmplitudeTrajectory& traj, const RateFunctions* rates,
                      const StateSpec& initial) {
    const std::size_t n = traj.size();
    StateSeries out;
    if (const auto* q = std::get_if<SingleQubit>(&initial)) {
        const auto& r0 = q->rho0;
        require(std::abs(r0.trace().real() - 1.0) < 1e-10 && std::abs(r0.trace().imag()) < 1e-10,
                "single-qubit rho0 must have unit trace");
        out.qubit.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            const cplx u = traj.u[k];
            const double p = std::norm(u);
            Eigen::Matrix2cd rho;
            rho(0, 0) = p * r0(0, 0);
            rho(0, 1) = u * r0(0, 1);
            rho(1, 0) = std::conj(u) * r0(1, 0);
            rho(1, 1) = r0(1, 1) + (1.0 - p) * r0(0, 0);
            out.qubit.push_back(rho);
        }
        return out;
    }
    if (std::holds_alternative<TwoQubitBell>(initial)) {
        out.bell.reserve(n);
        for (std::size_t k = 0; k < n; ++k) out.bell.push_back(bell_density(traj.u[k]));
        return out;
    }
    if (const auto* g = std::get_if<GhzState>(&initial)) {
        require(g->n >= 1 && g->n <= 10, "GHZ register size out of range");
        out.ghz_n = g->n;
        out.ghz_u = traj.u;
        return out;
    }
    const auto& osc = std::get<Oscillator>(initial);
    require(osc.n0 >= 0.0, "oscillator initial photon number must be >= 0");
    require(rates != nullptr, "oscillator propagation needs rate functions");
    require(rates->size() == n, "oscillator propagation: rates size mismatch");

    // dN/dt = -2 Gamma N + Gamma_beta (Heun); at nodes where the rates are
    // undefined fall back to the exact identity N = |u|^2 N0 + v.
    const bool thermal = !rates->gamma_beta.empty();
    out.photon.assign(n, 0.0);
    out.photon[0] = osc.n0;
    auto slope = [&](std::size_t k, double N) {
        const double Gb = thermal ? rates->gamma_beta[k] : 0.0;
        return -rates->gamma[k] * N + Gb;
    };
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (!rates->defined[k] || !rates->defined[k + 1]) {
            const double v = traj.has_thermal() ? traj.v[k + 1] : 0.0;
            out.photon[k + 1] = std::norm(traj.u[k + 1]) * osc.n0 + v;
            continue;
        }
        const double f1 = slope(k, out.photon[k]);
        const double pred = out.photon[k] + traj.h * f1;
        const double f2 = slope(k + 1, pred);
        out.photon[k + 1] = out.photon[k] + 0.5 * traj.h * (f1 + f2);
    }
    return out;
}

} // namespace qc::dynamics
