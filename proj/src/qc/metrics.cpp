#include "qc/metrics.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

namespace qc::metrics {

namespace {
constexpr cplx I{0.0, 1.0};

std::size_t grid_index(const dynamics::AmplitudeTrajectory& traj, double tau) {
    require(tau > 0.0 && tau <= traj.t.back() * (1.0 + 1e-12),
            "horizon outside the trajectory grid");
    auto idx = static_cast<std::size_t>(std::llround(tau / traj.h));
    return std::min(idx, traj.size() - 1);
}
} // namespace

double concurrence(const Eigen::Matrix4cd& rho, double phys_tol) {
    require((rho - rho.adjoint()).cwiseAbs().maxCoeff() < phys_tol,
            "concurrence: state not Hermitian");
    require(std::abs(rho.trace().real() - 1.0) < phys_tol, "concurrence: trace != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    require(es.eigenvalues().minCoeff() > -phys_tol, "concurrence: state not positive");

    Eigen::Matrix4cd sqrt_rho = es.operatorSqrt();
    Eigen::Matrix2cd sy;
    sy << 0.0, -I, I, 0.0;
    Eigen::Matrix4cd yy = Eigen::Matrix4cd(Eigen::kroneckerProduct(sy, sy));
    Eigen::Matrix4cd rho_tilde = yy * rho.conjugate() * yy;
    Eigen::Matrix4cd m = sqrt_rho * rho_tilde * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es2(m);
    Eigen::Vector4d lam = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(lam.data(), lam.data() + 4, std::greater<double>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

namespace {
// Total variation and positive variation of |u|^2 on the grid up to index m.
struct Variation {
    double tv = 0.0;
    double pos = 0.0;
    double s_end = 0.0;
};
Variation variation(const dynamics::AmplitudeTrajectory& traj, std::size_t m) {
    Variation v;
    double prev = std::norm(traj.u[0]);
    for (std::size_t k = 1; k <= m; ++k) {
        const double s = std::norm(traj.u[k]);
        const double d = s - prev;
        v.tv += std::abs(d);
        if (d > 0.0) v.pos += d;
        prev = s;
    }
    v.s_end = prev;
    return v;
}
} // namespace

double non_markovianity(const dynamics::AmplitudeTrajectory& traj, double tau) {
    const auto m = grid_index(traj, tau);
    const auto v = variation(traj, m);
    const double closed = 0.5 * (v.s_end - 1.0 + v.tv);
    if (std::abs(closed - v.pos) > 1e-10 * (1.0 + v.tv))
        throw numeric_error("non_markovianity: sigma>0 and closed forms disagree");
    return v.pos;
}

QslResult qsl_time(const dynamics::AmplitudeTrajectory& traj, double tau) {
    const auto m = grid_index(traj, tau);
    const auto v = variation(traj, m);
    QslResult out;
    if (v.tv <= 0.0) {
        out.stationary = true;
        out.tau_qsl = 0.0;
        return out;
    }
    const double t = traj.t[m];
    out.tau_qsl = t * (1.0 - v.s_end) / v.tv;
    return out;
}

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi0) {
    require(rho.rows() == psi0.size(), "fidelity: dimension mismatch");
    return std::real(psi0.dot(rho * psi0));
}

// ---- metrology ----

double mzi_mean(cplx u, double omega0, double t, const MziParams& p) {
    const double sinh2 = p.beta_frac * p.n_total;
    const double alpha2 = p.n_total - sinh2;
    return std::real(u * std::exp(I * omega0 * t)) * (sinh2 - alpha2);
}

double mzi_var(cplx u, double omega0, double t, const MziParams& p) {
    const double sinh2 = p.beta_frac * p.n_total;
    const double alpha2 = p.n_total - sinh2;
    const double r = std::asinh(std::sqrt(sinh2));
    const cplx alpha = std::sqrt(alpha2) * std::exp(I * p.phase_coh);
    const cplx mix = alpha * std::cosh(r) -
                     std::conj(alpha) * std::sinh(r) * std::exp(I * p.phase_sq);
    const cplx ue = u * std::exp(I * omega0 * t);
    const double re = ue.real(), im = ue.imag();
    const double s2r = std::sinh(2.0 * r);
    return im * im * (std::norm(mix) + sinh2) + re * re * (alpha2 + 0.5 * s2r * s2r) +
           0.5 * (1.0 - std::norm(u)) * p.n_total;
}

PrecisionCurve mzi_precision(const UProvider& u_of_gamma, const std::vector<double>& tgrid,
                             const MziParams& p) {
    require(p.beta_frac >= 0.0 && p.beta_frac < 1.0, "mzi: beta_frac must be in [0,1)");
    require(p.n_total > 0.0, "mzi: photon number must be positive");
    const double step = p.deriv_step > 0.0 ? p.deriv_step : 1e-4 * p.omega0;

    const auto u0 = u_of_gamma(0.0);
    const auto up = u_of_gamma(step);
    const auto um = u_of_gamma(-step);
    require(u0.size() == tgrid.size() && up.size() == tgrid.size() && um.size() == tgrid.size(),
            "mzi: provider grid mismatch");

    PrecisionCurve c;
    c.scheme = Scheme::MZI;
    c.resource = p.n_total;
    c.t = tgrid;
    c.delta.assign(tgrid.size(), 0.0);
    c.defined.assign(tgrid.size(), 1);
    c.snl.resize(tgrid.size());
    c.zeno.resize(tgrid.size());
    if (p.bound_residue > 0.0) c.bound_form.resize(tgrid.size());

    const double n0 = (1.0 - p.beta_frac) * p.n_total;
    for (std::size_t i = 0; i < tgrid.size(); ++i) {
        const double t = tgrid[i];
        const double dM = (mzi_mean(up[i], p.omega0, t, p) - mzi_mean(um[i], p.omega0, t, p)) /
                          (2.0 * step);
        const double var = mzi_var(u0[i], p.omega0, t, p);
        if (std::abs(dM) < 1e-300 || !(var >= 0.0)) {
            c.defined[i] = 0;
            c.delta[i] = std::numeric_limits<double>::quiet_NaN();
        } else {
            c.delta[i] = std::sqrt(var) / std::abs(dM);
        }
        c.snl[i] = 1.0 / (t * std::sqrt(n0));
        c.zeno[i] = 1.0 / (t * std::pow(p.n_total, 0.75));
        if (p.bound_residue > 0.0) {
            const double Z = p.bound_residue;
            c.bound_form[i] = c.zeno[i] / Z *
                              std::sqrt(1.0 + (1.0 - Z * Z) / (2.0 * Z * Z) * std::sqrt(p.n_total));
        }
    }
    if (p.markov_kappa > 0.0)
        c.markov_min = std::exp(1.0) * p.markov_kappa / std::sqrt(2.0 * p.n_total);
    return c;
}

PrecisionCurve ramsey_precision(const UProvider& u_of_omega0, const std::vector<double>& tgrid,
                                const RamseyParams& p) {
    require(p.n_atoms >= 1, "ramsey: n_atoms >= 1 required");
    require(p.t_total > 0.0, "ramsey: repetition budget must be positive");
    const double step = p.deriv_step > 0.0 ? p.deriv_step : 1e-4 * p.omega0;

    const auto u0 = u_of_omega0(0.0);
    const auto up = u_of_omega0(step);
    const auto um = u_of_omega0(-step);
    require(u0.size() == tgrid.size() && up.size() == tgrid.size() && um.size() == tgrid.size(),
            "ramsey: provider grid mismatch");

    PrecisionCurve c;
    c.scheme = Scheme::Ramsey;
    c.resource = double(p.n_atoms);
    c.t = tgrid;
    c.delta.assign(tgrid.size(), 0.0);
    c.defined.assign(tgrid.size(), 1);
    c.hl.resize(tgrid.size());
    if (p.bound_residue > 0.0) c.bound_form.resize(tgrid.size());

    const double n = double(p.n_atoms);
    for (std::size_t i = 0; i < tgrid.size(); ++i) {
        const double t = tgrid[i];
        const double re0 = std::real(std::pow(u0[i], p.n_atoms));
        const double dre = (std::real(std::pow(up[i], p.n_atoms)) -
                            std::real(std::pow(um[i], p.n_atoms))) /
                           (2.0 * step);
        const double den = p.t_total * dre * dre;
        const double num = t * (1.0 - re0 * re0);
        if (den < 1e-300 || num <= 0.0) {
            c.defined[i] = 0;
            c.delta[i] = std::numeric_limits<double>::quiet_NaN();
        } else {
            c.delta[i] = std::sqrt(num / den);
        }
        c.hl[i] = 1.0 / std::sqrt(n * n * p.t_total * t);
        if (p.bound_residue > 0.0)
            c.bound_form[i] = std::pow(p.bound_residue, -(p.n_atoms + 1)) * c.hl[i];
    }
    if (p.markov_kappa > 0.0)
        c.markov_min = std::sqrt(p.markov_kappa * std::exp(1.0) / (n * p.t_total));
    return c;
}

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    require(b > a, "golden_min: empty bracket");
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace qc::metrics
