#include "qc/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace qc::floquet {

namespace {
constexpr cplx I{0.0, 1.0};

struct PieceEig {
    Eigen::MatrixXd V;
    Eigen::VectorXd E;
};

std::vector<PieceEig> decompose_pieces(const PiecewiseModel& m) {
    std::vector<PieceEig> out;
    out.reserve(m.pieces.size());
    for (const auto& H : m.pieces) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        if (es.info() != Eigen::Success)
            throw numeric_error("piece eigendecomposition failed");
        out.push_back({es.eigenvectors(), es.eigenvalues()});
    }
    return out;
}

Eigen::MatrixXcd piece_propagator(const PieceEig& pe, double t) {
    const Eigen::VectorXcd phase = (-I * t * pe.E.array()).exp().matrix();
    return pe.V * phase.asDiagonal() * pe.V.transpose();
}

Eigen::VectorXcd apply_piece(const PieceEig& pe, double t, const Eigen::VectorXcd& psi) {
    Eigen::VectorXcd y = pe.V.transpose() * psi;
    y.array() *= (-I * t * pe.E.array()).exp();
    return pe.V * y;
}

double fold(double eps, double zone) {
    // fold into (-zone, zone], ties to +zone
    double x = std::remainder(eps, 2.0 * zone);
    if (x <= -zone) x += 2.0 * zone;
    return x;
}

double circular_gap(double a, double b, double zone) {
    const double d = std::remainder(a - b, 2.0 * zone);
    return std::abs(d);
}
} // namespace

double PiecewiseModel::period() const {
    return std::accumulate(durations.begin(), durations.end(), 0.0);
}

void PiecewiseModel::validate() const {
    require(!pieces.empty(), "piecewise model has no pieces");
    require(pieces.size() == durations.size(), "pieces/durations mismatch");
    for (double d : durations) require(d > 0.0, "piece durations must be positive");
    const auto n = pieces.front().rows();
    for (const auto& H : pieces) {
        require(H.rows() == n && H.cols() == n, "piece dimension mismatch");
        require((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + H.cwiseAbs().maxCoeff()),
                "piece Hamiltonians must be symmetric");
    }
}

PiecewiseModel build_spinchain(int L, double lambda, double J, double g, double a1,
                               double a2, double tau, double T) {
    require(L >= 2, "spin chain needs L >= 2");
    require(T > 0.0 && tau > 0.0 && tau < T, "invalid piece durations");
    const int n = L + 1;
    auto make = [&](double a) {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
        H(0, 0) = 0.5 * (lambda + a);
        for (int i = 1; i < n; ++i) H(i, i) = 0.5 * (lambda - a);
        H(0, 1) = H(1, 0) = g;
        for (int i = 1; i + 1 < n; ++i) H(i, i + 1) = H(i + 1, i) = J;
        return H;
    };
    PiecewiseModel m;
    m.pieces = {make(a1), make(a2)};
    m.durations = {tau, T - tau};
    m.system_sites = {0};
    // static chain band (relative to the factored frame): (lambda - a)/2 +- 2J;
    // report for the undriven a2 piece, which dominates the period
    m.env_band_min = 0.5 * (lambda - a2) - 2.0 * std::abs(J);
    m.env_band_max = 0.5 * (lambda - a2) + 2.0 * std::abs(J);
    m.validate();
    return m;
}

PiecewiseModel build_battery(int N, double omega_b, double omega_c, double kappa,
                             double g, double q, double varpi, double tau_c,
                             double tau_s, double tau_d, const BatteryOptions& opt) {
    require(N >= 2, "battery lattice needs N >= 2");
    require(tau_c > 0.0 && tau_s > 0.0 && tau_d > 0.0, "invalid protocol durations");

    // Periodic lattice momenta k = 2 pi m / N. The qubit couples with g/N to
    // every mode, i.e. only to the uniform combination inside each degenerate
    // frequency shell; grouping shells is an exact unitary reduction.
    std::vector<std::pair<double, int>> shells; // (omega_k, multiplicity)
    {
        std::vector<double> ws;
        ws.reserve(std::size_t(N) * std::size_t(N));
        for (int mx = 0; mx < N; ++mx)
            for (int my = 0; my < N; ++my)
                ws.push_back(varpi - 2.0 * q * (std::cos(2.0 * pi * mx / N) +
                                                std::cos(2.0 * pi * my / N)));
        std::sort(ws.begin(), ws.end());
        const double tol = 1e-10 * (1.0 + std::abs(varpi) + 4.0 * std::abs(q));
        if (opt.reduce_shells) {
            for (double w : ws) {
                if (!shells.empty() && std::abs(w - shells.back().first) < tol)
                    ++shells.back().second;
                else
                    shells.emplace_back(w, 1);
            }
        } else {
            for (double w : ws) shells.emplace_back(w, 1);
        }
    }
    const int M = int(shells.size());
    const int dim = 2 + 2 * M;
    require(dim <= opt.dim_cap, "battery sector dimension exceeds the configured cap");

    auto make = [&](double f) {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
        H(0, 0) = omega_b;
        H(1, 1) = omega_c;
        H(0, 1) = H(1, 0) = kappa * f;
        for (int i = 0; i < M; ++i) {
            const double gw = g / double(N) * std::sqrt(double(shells[i].second));
            H(2 + i, 2 + i) = shells[i].first;
            H(0, 2 + i) = H(2 + i, 0) = gw;
            H(2 + M + i, 2 + M + i) = shells[i].first;
            H(1, 2 + M + i) = H(2 + M + i, 1) = gw;
        }
        return H;
    };
    PiecewiseModel m;
    m.pieces = {make(1.0), make(0.0), make(1.0)};
    m.durations = {tau_c, tau_s, tau_d};
    m.system_sites = {0, 1};
    m.env_band_min = varpi - 4.0 * std::abs(q);
    m.env_band_max = varpi + 4.0 * std::abs(q);
    m.omega_b = omega_b;
    m.validate();
    return m;
}

Eigen::MatrixXcd one_period_propagator(const PiecewiseModel& model) {
    model.validate();
    const auto eigs = decompose_pieces(model);
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(model.dim(), model.dim());
    for (std::size_t j = 0; j < eigs.size(); ++j)
        U = piece_propagator(eigs[j], model.durations[j]) * U;
    return U;
}

FloquetSpectrum quasienergy_spectrum(const Eigen::MatrixXcd& UT, double T,
                                     const PiecewiseModel& model, const FbsOptions& opt) {
    require(T > 0.0, "quasienergy_spectrum requires T > 0");
    const auto n = UT.rows();
    require(UT.cols() == n, "propagator must be square");

    // Hermitian pieces give a unitary (hence normal) propagator: the Schur
    // form is diagonal and the Schur basis is the orthonormal Floquet basis.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(UT, true);
    if (schur.info() != Eigen::Success)
        throw numeric_error("Schur decomposition of the propagator failed");
    const auto& Tm = schur.matrixT();
    double offdiag = 0.0;
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < c; ++r) offdiag = std::max(offdiag, std::abs(Tm(r, c)));
    if (offdiag > 1e-8)
        throw validation_error("quasienergy_spectrum: propagator is not unitary/normal");

    FloquetSpectrum sp;
    sp.T = T;
    sp.modes = schur.matrixU();
    sp.env_band_min = model.env_band_min;
    sp.env_band_max = model.env_band_max;
    const double zone = pi / T;
    sp.quasienergy.resize(n);
    sp.system_weight.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx lam = Tm(i, i);
        sp.quasienergy[i] = fold(-std::arg(lam) / T, zone);
        double w = 0.0;
        for (auto s : model.system_sites) w += std::norm(sp.modes(s, i));
        sp.system_weight[i] = w;
    }

    // classification: candidates by system weight, detachment by circular gap
    // to the non-candidate set versus its median level spacing
    std::vector<double> band;
    for (Eigen::Index i = 0; i < n; ++i)
        if (sp.system_weight[i] <= opt.weight_threshold) band.push_back(sp.quasienergy[i]);
    std::sort(band.begin(), band.end());
    std::vector<double> spacings;
    for (std::size_t i = 0; i + 1 < band.size(); ++i) spacings.push_back(band[i + 1] - band[i]);
    if (!spacings.empty()) {
        auto mid = spacings.begin() + std::ptrdiff_t(spacings.size() / 2);
        std::nth_element(spacings.begin(), mid, spacings.end());
        sp.median_spacing = *mid;
    }

    sp.classification.assign(std::size_t(n), StateClass::Band);
    sp.detachment_gap.assign(std::size_t(n), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (sp.system_weight[i] <= opt.weight_threshold) continue;
        double gap = 2.0 * zone;
        for (double b : band) gap = std::min(gap, circular_gap(sp.quasienergy[i], b, zone));
        sp.detachment_gap[i] = gap;
        if (band.empty() || gap > opt.gap_factor * sp.median_spacing)
            sp.classification[i] = StateClass::FBS;
        else if (gap > sp.median_spacing)
            sp.classification[i] = StateClass::Ambiguous;
    }
    return sp;
}

std::vector<std::size_t> detect_fbs(const FloquetSpectrum& spectrum) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < spectrum.classification.size(); ++i)
        if (spectrum.classification[i] == StateClass::FBS) out.push_back(i);
    return out;
}

void stroboscopic_evolve(const PiecewiseModel& model, const Eigen::VectorXcd& psi0,
                         int n_periods, int samples_per_period,
                         const std::function<void(double, const Eigen::VectorXcd&)>& sample) {
    model.validate();
    require(psi0.size() == model.dim(), "initial state dimension mismatch");
    require(n_periods >= 1 && samples_per_period >= 1, "invalid evolution request");

    const auto eigs = decompose_pieces(model);
    const double T = model.period();
    const double norm0 = psi0.norm();

    std::vector<double> edges(model.durations.size() + 1, 0.0);
    for (std::size_t j = 0; j < model.durations.size(); ++j)
        edges[j + 1] = edges[j] + model.durations[j];

    Eigen::VectorXcd psi = psi0;
    sample(0.0, psi);
    for (int p = 0; p < n_periods; ++p) {
        const double t0 = double(p) * T;
        // sample times strictly inside (t0, t0+T]
        int s = 1;
        Eigen::VectorXcd piece_start = psi;
        for (std::size_t j = 0; j < eigs.size(); ++j) {
            const double a = edges[j], b = edges[j + 1];
            while (s <= samples_per_period) {
                const double ts = T * double(s) / double(samples_per_period);
                if (ts > b + 1e-12 * T) break;
                sample(t0 + ts, apply_piece(eigs[j], ts - a, piece_start));
                ++s;
            }
            piece_start = apply_piece(eigs[j], b - a, piece_start);
        }
        psi = piece_start;
        if (std::abs(psi.norm() - norm0) > 1e-10 * norm0)
            throw numeric_error("stroboscopic_evolve: norm drift exceeded 1e-10");
    }
}

ObservableSeries spinchain_population(const PiecewiseModel& model, int n_periods,
                                      int samples_per_period) {
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(model.dim());
    psi0(0) = 1.0;
    ObservableSeries out;
    stroboscopic_evolve(model, psi0, n_periods, samples_per_period,
                        [&](double t, const Eigen::VectorXcd& psi) {
                            out.t.push_back(t);
                            out.value.push_back(std::norm(psi(0)));
                        });
    return out;
}

ObservableSeries spinchain_fidelity(const PiecewiseModel& model, double lambda, double a1,
                                    double a2, double tau, int n_periods,
                                    int samples_per_period) {
    const double T = model.period();
    // vacuum phase accumulated in the same frame as the sector Hamiltonian:
    // b(t) = exp(+i/2 \int_0^t (lambda + A(s)) ds), A piecewise constant
    auto vacuum_phase = [&](double t) {
        const double n_full = std::floor(t / T + 1e-15);
        double rem = t - n_full * T;
        double integral = n_full * (lambda * T + a1 * tau + a2 * (T - tau));
        const double d1 = std::min(rem, tau);
        integral += (lambda + a1) * d1;
        rem -= d1;
        if (rem > 0.0) integral += (lambda + a2) * rem;
        return std::exp(I * 0.5 * integral);
    };
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(model.dim());
    psi0(0) = 1.0;
    ObservableSeries out;
    stroboscopic_evolve(model, psi0, n_periods, samples_per_period,
                        [&](double t, const Eigen::VectorXcd& psi) {
                            const cplx b = vacuum_phase(t);
                            out.t.push_back(t);
                            out.value.push_back(0.5 + 0.5 * std::real(psi(0) * std::conj(b)));
                        });
    return out;
}

ObservableSeries battery_energy(const PiecewiseModel& model, int n_periods,
                                int samples_per_period) {
    require(model.omega_b > 0.0, "battery_energy requires a battery model");
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(model.dim());
    psi0(1) = 1.0; // charger excited
    ObservableSeries out;
    stroboscopic_evolve(model, psi0, n_periods, samples_per_period,
                        [&](double t, const Eigen::VectorXcd& psi) {
                            out.t.push_back(t);
                            out.value.push_back(model.omega_b * std::norm(psi(0)));
                        });
    return out;
}

AsymptoticProjection asymptotic_projection(const FloquetSpectrum& spectrum,
                                           const Eigen::VectorXcd& psi0, Eigen::Index site) {
    require(psi0.size() == spectrum.modes.rows(), "asymptotic_projection: dimension mismatch");
    const auto fbs = detect_fbs(spectrum);
    AsymptoticProjection out;
    out.n_fbs = int(fbs.size());
    if (fbs.empty()) return out;

    std::vector<cplx> amp; // c_j * phi_j(site)
    for (auto j : fbs) {
        const cplx cj = spectrum.modes.col(Eigen::Index(j)).dot(psi0); // <phi_j|psi0>
        amp.push_back(cj * spectrum.modes(site, Eigen::Index(j)));
    }
    for (const auto& a : amp) out.mean += std::norm(a);
    if (fbs.size() == 2) {
        out.beat_frequency =
            std::abs(spectrum.quasienergy[fbs[0]] - spectrum.quasienergy[fbs[1]]);
        out.amplitude = 2.0 * std::abs(amp[0]) * std::abs(amp[1]);
    }
    return out;
}

} // namespace qc::floquet
