#include "doctest.h"

#include <cmath>

#include "oracle_bath.hpp"
#include "qc/dynamics.hpp"
#include "qc/metrics.hpp"

using namespace qc;
using namespace qc::dynamics;
using spectra::OhmicFamily;
using spectra::SpectralDensity;

namespace {
constexpr cplx I{0.0, 1.0};

SpectralDensity fig2(double eta) { return OhmicFamily{eta, 1.0, 1.0, 0.0}; }

AmplitudeTrajectory synthetic_exponential(double kappa, double Omega, double h, int n) {
    AmplitudeTrajectory tr;
    tr.omega0 = Omega;
    tr.h = h;
    for (int k = 0; k <= n; ++k) {
        const double t = k * h;
        tr.t.push_back(t);
        tr.u.push_back(std::exp(-(kappa + I * Omega) * t));
        tr.udot.push_back(-(kappa + I * Omega) * tr.u.back());
    }
    return tr;
}
} // namespace

TEST_CASE("solve_u: initial condition and free evolution") {
    SpectralDensity sd = fig2(0.0);
    const auto tr = solve_u(sd, 0.1, 50.0, 0.02);
    CHECK(tr.u[0] == cplx(1.0, 0.0));
    // eta = 0: exact free evolution
    for (std::size_t k = 0; k < tr.size(); k += 100)
        CHECK(std::abs(tr.u[k] - std::exp(-I * 0.1 * tr.t[k])) < 5e-6);
}

TEST_CASE("solve_u: step validation") {
    SpectralDensity sd = fig2(0.2);
    CHECK_THROWS_AS(solve_u(sd, 0.1, 10.0, 6.0), validation_error);
    CHECK_THROWS_AS(solve_u(sd, 0.1, 10.0, 2.0), validation_error); // h|f(0)| too large
}

TEST_CASE("solve_u: discrete-bath diagonalization oracle") {
    const double eta = 0.2, w0 = 0.1;
    SpectralDensity sd = fig2(eta);
    const auto tr = solve_u(sd, w0, 150.0, 0.05);
    std::vector<double> ts;
    for (std::size_t k = 0; k < tr.size(); k += 40) ts.push_back(tr.t[k]);
    const auto uo = discrete_bath_u(
        [&](double w) { return spectra::evaluate_J(sd, w); }, w0, 600, 20.0, ts);
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        worst = std::max(worst, std::abs(tr.u[i * 40] - uo[i]));
    CHECK(worst < 1e-3);
}

TEST_CASE("solve_u: dissipation with and without a bound state") {
    const double w0 = 0.1;
    // eta above threshold: |u| approaches the bound-state residue
    const auto bs = spectra::bound_state_solve(fig2(0.2), w0);
    REQUIRE(bs.has_value());
    const auto tr = solve_u(fig2(0.2), w0, 800.0, 0.1);
    double umax = 0.0;
    for (const auto& u : tr.u) umax = std::max(umax, std::abs(u));
    CHECK(umax <= 1.0 + 1e-8);
    CHECK(std::abs(std::abs(tr.u.back()) - bs->residue) < 5e-3);

    // below threshold: complete dissipation, monotone envelope
    const auto tr2 = solve_u(fig2(0.05), w0, 800.0, 0.1);
    CHECK(std::abs(tr2.u.back()) < 0.02);
    double prev = 1.0;
    bool monotone = true;
    for (std::size_t k = 0; k < tr2.size(); k += 25) {
        const double a = std::abs(tr2.u[k]);
        if (a > prev + 1e-6) monotone = false;
        prev = a;
    }
    CHECK(monotone);
}

TEST_CASE("decompose_u: free limit, long-time residue, agreement with solve_u") {
    const double w0 = 0.1;
    CHECK(std::abs(decompose_u(fig2(0.0), w0, std::nullopt, 3.7) - std::exp(-I * w0 * 3.7)) <
          1e-8);

    const auto bs = spectra::bound_state_solve(fig2(0.2), w0);
    REQUIRE(bs.has_value());
    // long time: band part dephased, modulus -> Z
    const double t_long = 2000.0;
    CHECK(std::abs(std::abs(decompose_u(fig2(0.2), w0, bs, t_long)) - bs->residue) < 2e-3);

    // mid-time agreement with the Volterra route
    const auto tr = solve_u(fig2(0.2), w0, 60.0, 0.02);
    for (double t : {10.0, 25.0, 50.0}) {
        const auto k = std::size_t(std::llround(t / tr.h));
        CHECK(std::abs(decompose_u(fig2(0.2), w0, bs, t) - tr.u[k]) < 1e-3);
    }
}

TEST_CASE("rates: exponential input recovers constants; population identity") {
    const auto tr = synthetic_exponential(0.3, 1.1, 0.01, 500);
    const auto r = rates_from_u(tr);
    for (std::size_t k = 0; k < r.size(); k += 50) {
        CHECK(r.gamma[k] == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(r.omega[k] == doctest::Approx(1.1).epsilon(1e-12));
    }
    // d|u|^2/dt = -gamma |u|^2 node-wise to discretization order
    const auto tr2 = solve_u(fig2(0.2), 0.1, 100.0, 0.05);
    const auto r2 = rates_from_u(tr2);
    for (std::size_t k = 1; k + 1 < tr2.size(); k += 100) {
        const double lhs =
            (std::norm(tr2.u[k + 1]) - std::norm(tr2.u[k - 1])) / (2.0 * tr2.h);
        const double rhs = -r2.gamma[k] * std::norm(tr2.u[k]);
        CHECK(lhs == doctest::Approx(rhs).epsilon(5e-3));
    }
}

TEST_CASE("rates: transient negativity with a bound state, positive tail without") {
    const auto withbs = rates_from_u(solve_u(fig2(0.2), 0.1, 400.0, 0.05));
    bool negative_seen = false;
    for (std::size_t k = 0; k < withbs.size(); ++k)
        if (withbs.defined[k] && withbs.gamma[k] < -1e-6) negative_seen = true;
    CHECK(negative_seen);
    // asymptotically approaches zero
    CHECK(std::abs(withbs.gamma[withbs.size() - 2]) < 1e-3);

    const auto nobs = rates_from_u(solve_u(fig2(0.05), 0.1, 400.0, 0.05));
    const double tail = nobs.gamma[nobs.size() - 2];
    CHECK(tail > 0.0);
    // tends to a positive constant after the short-time jolt
    CHECK(tail == doctest::Approx(nobs.gamma[nobs.size() / 2]).epsilon(0.05));
}

TEST_CASE("thermal: zero-temperature limit and Markovian excitation rate") {
    const double w0 = 1.0, wc = 5.0;
    SpectralDensity sd = OhmicFamily{0.01, 1.0, wc, 0.0};
    auto tr = solve_u(sd, w0, 60.0, 0.02);
    auto r = rates_from_u(tr);

    // beta -> inf: v identically 0 within solver noise
    auto tr_cold = tr;
    auto r_cold = r;
    solve_thermal(sd, w0, 5e3, tr_cold, r_cold);
    for (std::size_t k = 0; k < tr_cold.v.size(); k += 300) {
        CHECK(std::abs(tr_cold.v[k]) < 1e-12);
        CHECK(std::abs(r_cold.gamma_beta[k]) < 1e-12);
    }

    // Markovian regime: Gamma_beta -> 2 kappa nbar(omega0)
    solve_thermal(sd, w0, 0.1, tr, r);
    const double kappa = pi * spectra::evaluate_J(sd, w0);
    const double nbar = 1.0 / std::expm1(0.1 * w0);
    const auto asym = asymptotic_rates(tr, r, kappa);
    CHECK(asym.Gamma == doctest::Approx(kappa).epsilon(0.03));
    CHECK(asym.Gamma_beta == doctest::Approx(2.0 * kappa * nbar).epsilon(0.03));

    const auto teff = effective_temperature(asym, w0);
    REQUIRE(teff.status == TempStatus::Finite);
    CHECK(teff.value == doctest::Approx(1.0 / 0.1).epsilon(0.02));
}

TEST_CASE("effective temperature: detailed-balance identity and flags") {
    const double w0 = 1.0, T = 3.7;
    const double nbar = 1.0 / std::expm1(w0 / T);
    AsymptoticRates r;
    r.Gamma = 0.2;
    r.Gamma_beta = 2.0 * 0.2 * nbar;
    const auto t = effective_temperature(r, w0);
    REQUIRE(t.status == TempStatus::Finite);
    CHECK(t.value == doctest::Approx(T).epsilon(1e-12));

    AsymptoticRates zero;
    zero.vanishing = true;
    CHECK(effective_temperature(zero, w0).status == TempStatus::Divergent);
    AsymptoticRates bad;
    bad.Gamma = -0.1;
    bad.Gamma_beta = 0.2;
    CHECK(effective_temperature(bad, w0).status == TempStatus::Undefined);
}

TEST_CASE("propagate: Bell identity at t=0, trace and positivity") {
    const auto tr = solve_u(fig2(0.2), 0.1, 40.0, 0.02);
    const auto series = propagate(tr, nullptr, TwoQubitBell{});
    REQUIRE(series.bell.size() == tr.size());
    // t=0 reproduces the Bell input
    Eigen::Matrix4cd rho0 = series.bell.front();
    CHECK(std::abs(rho0(0, 0).real() - 0.5) < 1e-14);
    CHECK(std::abs(rho0(3, 3).real() - 0.5) < 1e-14);
    CHECK(std::abs(rho0(0, 3).real() - 0.5) < 1e-14);
    for (std::size_t k = 0; k < tr.size(); k += 400) {
        const auto& rho = series.bell[k];
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("propagate: oscillator photon number equals |u|^2 N0 + v") {
    const double w0 = 1.0;
    SpectralDensity sd = OhmicFamily{0.05, 1.0, 10.0, 0.0};
    auto tr = solve_u(sd, w0, 40.0, 0.005);
    auto r = rates_from_u(tr);
    solve_thermal(sd, w0, 0.1, tr, r);
    const double n0 = 2.25; // coherent |alpha|^2
    const auto series = propagate(tr, &r, Oscillator{n0});
    for (std::size_t k = 0; k < tr.size(); k += 1000) {
        const double exact = std::norm(tr.u[k]) * n0 + tr.v[k];
        CHECK(series.photon[k] == doctest::Approx(exact).epsilon(2e-3));
    }
}

TEST_CASE("thermal consistency: finite-T pipeline at beta->inf matches zero-T") {
    SpectralDensity sd = fig2(0.15);
    auto tr = solve_u(sd, 0.1, 30.0, 0.02);
    auto r = rates_from_u(tr);
    auto tr2 = tr;
    auto r2 = r;
    solve_thermal(sd, 0.1, 1e4, tr2, r2);
    const auto cold = propagate(tr2, &r2, Oscillator{1.7});
    for (std::size_t k = 0; k < tr.size(); k += 500)
        CHECK(cold.photon[k] == doctest::Approx(std::norm(tr.u[k]) * 1.7).epsilon(1e-5));
}
