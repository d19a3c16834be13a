#include "qc/topology.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace qc::topology {

namespace {

constexpr cplx I{0.0, 1.0};

Eigen::Matrix2cd pauli(int i) {
    Eigen::Matrix2cd s;
    switch (i) {
        case 0: s << 0, 1, 1, 0; break;
        case 1: s << 0, -I, I, 0; break;
        default: s << 1, 0, 0, -1; break;
    }
    return s;
}

// exp(-i (h.sigma) t) for real h
Eigen::Matrix2cd su2_exp(const Eigen::Vector3d& h, double t) {
    const double m = h.norm();
    Eigen::Matrix2cd H = h.x() * pauli(0) + h.y() * pauli(1) + h.z() * pauli(2);
    if (m * std::abs(t) < 1e-300) return Eigen::Matrix2cd::Identity();
    return std::cos(m * t) * Eigen::Matrix2cd::Identity() - I * (std::sin(m * t) / m) * H;
}

// Unwrapped-phase accumulator with increment clamp below pi.
class PhaseAccumulator {
public:
    void push(cplx z) {
        const double a = std::arg(z);
        if (!first_) {
            double d = a - prev_;
            while (d > pi) d -= 2.0 * pi;
            while (d < -pi) d += 2.0 * pi;
            if (std::abs(d) > 0.95 * pi)
                throw numeric_error("phase winding under-resolved on the contour");
            total_ += d;
        }
        prev_ = a;
        first_ = false;
    }
    double winding() const { return total_ / (2.0 * pi); }

private:
    double prev_ = 0.0, total_ = 0.0;
    bool first_ = true;
};

double require_near_int(double w, const char* what) {
    const double r = std::round(w);
    if (std::abs(w - r) > 0.05)
        throw numeric_error(std::string(what) + " winding is not close to an integer");
    return r;
}

} // namespace

TwoBandResult two_band_floquet(const Eigen::Vector3d& h1, const Eigen::Vector3d& h2,
                               double T1, double T2) {
    require(T1 >= 0.0 && T2 >= 0.0, "two_band_floquet requires nonnegative durations");
    const double n1 = h1.norm(), n2 = h2.norm();
    const double th1 = T1 * n1, th2 = T2 * n2;
    const double a1 = std::cos(th1), a2 = std::cos(th2);
    // s_j = sin(theta_j) hhat_j, finite as |h_j| -> 0
    const Eigen::Vector3d s1 = h1 * (n1 > 1e-300 ? std::sin(th1) / n1 : T1);
    const Eigen::Vector3d s2 = h2 * (n2 > 1e-300 ? std::sin(th2) / n2 : T2);

    TwoBandResult out;
    out.eps = a1 * a2 - s1.dot(s2);
    out.r = s1.cross(s2) - a1 * s2 - a2 * s1;
    const double rn = out.r.norm();
    out.gapless = rn < 1e-12;
    const double T = T1 + T2;
    if (!out.gapless && T > 0.0) {
        const double eps_cl = std::clamp(out.eps, -1.0, 1.0);
        out.h_eff = -(std::acos(eps_cl) / T) * out.r / rn;
    } else {
        out.h_eff.setZero();
    }
    return out;
}

ClosingCheck classify_closing(const Eigen::Vector3d& h1, const Eigen::Vector3d& h2,
                              double T1, double T2, double tol) {
    const auto tb = two_band_floquet(h1, h2, T1, T2);
    ClosingCheck out;
    out.at_zero = tb.eps > 0.0;

    const double th1 = T1 * h1.norm(), th2 = T2 * h2.norm();
    auto dist_int = [](double x) { return std::abs(x - std::round(x)); };

    out.res_resonance = std::max(dist_int(th1 / pi), dist_int(th2 / pi));
    out.cond_resonance = out.res_resonance < tol;

    const double dot = (h1.norm() > 0 && h2.norm() > 0)
                           ? h1.dot(h2) / (h1.norm() * h2.norm())
                           : 1.0;
    const double align = 1.0 - std::abs(dot);
    const double comb = dot >= 0.0 ? (th1 + th2) / pi : (th1 - th2) / pi;
    out.res_collinear = std::max(align, dist_int(comb));
    out.cond_collinear = out.res_collinear < tol;
    return out;
}

Eigen::Vector3d kitaev_h(const KitaevDriven& m, int piece, double k) {
    require(piece == 1 || piece == 2, "kitaev_h piece must be 1 or 2");
    // gauge: rotate the global superconducting phase so phi1 + phi2 = 0;
    // sigma_x then maps the two pieces onto each other's negatives, which is
    // the chiral structure the winding frames rely on.
    const double half = 0.5 * (m.phi1 - m.phi2);
    const double pa = piece == 1 ? half : -half;
    const double pb = -pa;
    const double s1 = std::sin(k), s2 = std::sin(2.0 * k);
    return {2.0 * (m.d1 * std::sin(pa) * s1 + m.d2 * std::sin(pb) * s2),
            2.0 * (m.d1 * std::cos(pa) * s1 + m.d2 * std::cos(pb) * s2),
            -m.mu - 2.0 * m.t1 * std::cos(k) - 2.0 * m.t2 * std::cos(2.0 * k)};
}

Eigen::Vector3d haldane_h(const HaldaneDriven& m, int piece, const Eigen::Vector2d& k) {
    require(piece == 1 || piece == 2, "haldane_h piece must be 1 or 2");
    const double t3 = piece == 1 ? m.t3_a : m.t3_b;
    const double phi = piece == 1 ? m.phi_a : m.phi_b;
    const Eigen::Vector2d a1(std::sqrt(3.0) / 2.0, 1.5), a2(-std::sqrt(3.0) / 2.0, 1.5);
    const double k1 = k.dot(a1), k2 = k.dot(a2);
    Eigen::Vector3d h;
    h.x() = m.t1 * (1.0 + std::cos(k1) + std::cos(k2)) +
            t3 * (2.0 * std::cos(k1 - k2) + std::cos(k1 + k2));
    h.y() = m.t1 * (std::sin(k1) + std::sin(k2)) + t3 * std::sin(k1 + k2);
    h.z() = 2.0 * m.t2 * std::sin(phi) * (std::sin(k1) - std::sin(k2) - std::sin(k1 - k2)) +
            m.mass;
    return h;
}

namespace {

Eigen::Vector2cd lower_band_vector(const Eigen::Vector3d& n) {
    // eigenvector of (nhat.sigma) with eigenvalue -1
    const Eigen::Vector3d u = n.normalized();
    Eigen::Vector2cd v;
    if (u.z() <= 0.0)
        v << cplx(u.z() - 1.0, 0.0), cplx(u.x(), u.y());
    else
        v << cplx(-u.x(), u.y()), cplx(u.z() + 1.0, 0.0);
    return v.normalized();
}

} // namespace

int chern_number(const HaldaneDriven& m, int grid) {
    require(grid >= 8, "chern_number grid too coarse");
    const Eigen::Vector2d b1 = 2.0 * pi * Eigen::Vector2d(1.0 / std::sqrt(3.0), 1.0 / 3.0);
    const Eigen::Vector2d b2 = 2.0 * pi * Eigen::Vector2d(-1.0 / std::sqrt(3.0), 1.0 / 3.0);

    const int Q = grid;
    std::vector<Eigen::Vector2cd> v(std::size_t(Q) * Q);
    for (int i = 0; i < Q; ++i) {
        for (int j = 0; j < Q; ++j) {
            const Eigen::Vector2d k = (double(i) / Q) * b1 + (double(j) / Q) * b2;
            const auto tb = two_band_floquet(haldane_h(m, 1, k), haldane_h(m, 2, k), m.T1, m.T2);
            if (tb.gapless) throw numeric_error("chern_number: gapless point on the grid");
            v[std::size_t(i) * Q + j] = lower_band_vector(tb.h_eff);
        }
    }
    auto at = [&](int i, int j) -> const Eigen::Vector2cd& {
        return v[std::size_t((i + Q) % Q) * Q + std::size_t((j + Q) % Q)];
    };
    double flux = 0.0;
    for (int i = 0; i < Q; ++i) {
        for (int j = 0; j < Q; ++j) {
            const cplx l = at(i, j).dot(at(i + 1, j)) * at(i + 1, j).dot(at(i + 1, j + 1)) *
                           at(i + 1, j + 1).dot(at(i, j + 1)) * at(i, j + 1).dot(at(i, j));
            flux += std::arg(l);
        }
    }
    // plaquette orientation fixed so the static lower band gives C = sgn(sin phi)
    const double c = -flux / (2.0 * pi);
    const double r = std::round(c);
    if (std::abs(c - r) > 1e-6) throw numeric_error("chern_number: non-integer lattice flux");
    return int(r);
}

HaldaneGapScan haldane_min_gap(const HaldaneDriven& m, int grid) {
    const Eigen::Vector2d b1 = 2.0 * pi * Eigen::Vector2d(1.0 / std::sqrt(3.0), 1.0 / 3.0);
    const Eigen::Vector2d b2 = 2.0 * pi * Eigen::Vector2d(-1.0 / std::sqrt(3.0), 1.0 / 3.0);
    const double T = m.T1 + m.T2;
    HaldaneGapScan out;
    out.gap_zero = out.gap_pi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const Eigen::Vector2d k = (double(i) / grid) * b1 + (double(j) / grid) * b2;
            const auto tb = two_band_floquet(haldane_h(m, 1, k), haldane_h(m, 2, k), m.T1, m.T2);
            const double th = std::acos(std::clamp(tb.eps, -1.0, 1.0));
            if (th / T < out.gap_zero) {
                out.gap_zero = th / T;
                out.k_zero = k;
            }
            if ((pi - th) / T < out.gap_pi) {
                out.gap_pi = (pi - th) / T;
                out.k_pi = k;
            }
        }
    }
    return out;
}

KitaevInvariants kitaev_invariants(const KitaevDriven& m, int contour_points) {
    require(contour_points >= 256, "kitaev_invariants: contour too coarse");
    KitaevInvariants out;
    double w[2];
    for (int frame = 0; frame < 2; ++frame) {
        PhaseAccumulator acc;
        for (int p = 0; p <= contour_points; ++p) {
            const double k = 2.0 * pi * double(p) / double(contour_points);
            const Eigen::Vector3d h1 = kitaev_h(m, 1, k), h2 = kitaev_h(m, 2, k);
            const Eigen::Matrix2cd U =
                frame == 0 ? Eigen::Matrix2cd(su2_exp(h2, m.T / 2) * su2_exp(h1, m.T / 2))
                           : Eigen::Matrix2cd(su2_exp(h1, m.T / 2) * su2_exp(h2, m.T / 2));
            // U = eps I + i r.sigma with real r; chiral frames have r_x = 0
            const double rx = (0.5 * (U * pauli(0)).trace()).imag();
            const double ry = (0.5 * (U * pauli(1)).trace()).imag();
            const double rz = (0.5 * (U * pauli(2)).trace()).imag();
            if (std::abs(rx) > 1e-9)
                throw numeric_error("kitaev_invariants: chiral frame violated (r_x != 0)");
            const cplx R(rz, ry);
            if (std::abs(R) < 1e-12)
                throw numeric_error("kitaev_invariants: gapless point on the contour");
            acc.push(R);
        }
        w[frame] = require_near_int(acc.winding(), "kitaev chiral-frame");
    }
    out.w_a = w[0];
    out.w_b = w[1];
    out.n_zero = int(std::llround(std::abs(w[0] + w[1]) / 2.0));
    out.n_pi = int(std::llround(std::abs(w[0] - w[1]) / 2.0));
    return out;
}

namespace {

// real-space BdG matrix [[A, B], [B^dag, -A^T]] for one Kitaev piece
Eigen::MatrixXcd kitaev_bdg(const KitaevDriven& m, int piece, int L) {
    const double half = 0.5 * (m.phi1 - m.phi2);
    const double pa = piece == 1 ? half : -half;
    const double pb = -pa;
    const cplx D1 = m.d1 * std::exp(I * pa);
    const cplx D2 = m.d2 * std::exp(I * pb);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(L, L), B = Eigen::MatrixXcd::Zero(L, L);
    for (int l = 0; l < L; ++l) A(l, l) = -m.mu;
    for (int l = 0; l + 1 < L; ++l) {
        A(l, l + 1) = -m.t1;
        A(l + 1, l) = -m.t1;
        B(l, l + 1) = -D1;
        B(l + 1, l) = D1;
    }
    for (int l = 0; l + 2 < L; ++l) {
        A(l, l + 2) = -m.t2;
        A(l + 2, l) = -m.t2;
        B(l, l + 2) = -D2;
        B(l + 2, l) = D2;
    }
    Eigen::MatrixXcd H(2 * L, 2 * L);
    H.topLeftCorner(L, L) = A;
    H.topRightCorner(L, L) = B;
    H.bottomLeftCorner(L, L) = B.adjoint();
    H.bottomRightCorner(L, L) = -A.transpose();
    return H;
}

Eigen::MatrixXcd herm_exp(const Eigen::MatrixXcd& H, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw numeric_error("Hermitian eigendecomposition failed");
    const Eigen::ArrayXcd ph = (-I * t * es.eigenvalues().array().cast<cplx>()).exp();
    return es.eigenvectors() * ph.matrix().asDiagonal() * es.eigenvectors().adjoint();
}

double edge_weight_of(const Eigen::VectorXcd& v, int cells, int per_cell, double edge_frac) {
    const int m = std::max(1, int(std::floor(cells * edge_frac)));
    double w = 0.0, tot = 0.0;
    for (int c = 0; c < cells; ++c) {
        double site = 0.0;
        for (int s = 0; s < per_cell; ++s) site += std::norm(v(c * per_cell + s));
        tot += site;
        if (c < m || c >= cells - m) w += site;
    }
    return tot > 0.0 ? w / tot : 0.0;
}

} // namespace

OpenSpectrum kitaev_open_spectrum(const KitaevDriven& m, int sites, const EdgeCountOptions& opt) {
    require(sites >= 10, "kitaev_open_spectrum: chain too short");
    const auto H1 = kitaev_bdg(m, 1, sites);
    const auto H2 = kitaev_bdg(m, 2, sites);
    const Eigen::MatrixXcd U = herm_exp(H2, m.T / 2) * herm_exp(H1, m.T / 2);

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(U, true);
    if (schur.info() != Eigen::Success) throw numeric_error("Schur of open propagator failed");

    OpenSpectrum sp;
    sp.T = m.T;
    const int n = int(U.rows());
    sp.quasienergy.resize(n);
    sp.edge_weight.resize(n);
    for (int i = 0; i < n; ++i) {
        sp.quasienergy[i] = -std::arg(schur.matrixT()(i, i)) / m.T;
        // BdG doubling: weight of site l combines particle and hole components
        Eigen::VectorXcd v(sites * 2);
        for (int l = 0; l < sites; ++l) {
            v(2 * l) = schur.matrixU()(l, i);
            v(2 * l + 1) = schur.matrixU()(sites + l, i);
        }
        sp.edge_weight[i] = edge_weight_of(v, sites, 2, opt.edge_frac);
    }
    return sp;
}

OpenSpectrum nhssh_open_spectrum(const NhsshDriven& m, int cells, const EdgeCountOptions& opt) {
    require(cells >= 4, "nhssh_open_spectrum: chain too short");
    const int n = 2 * cells;
    auto piece = [&](double t2) {
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
        for (int l = 0; l < cells; ++l) {
            const int a = 2 * l, b = 2 * l + 1;
            H(a, b) = m.t1 + m.gamma / 2.0;
            H(b, a) = m.t1 - m.gamma / 2.0;
            if (l > 0) {
                H(a, b - 2) = t2;
                H(b - 2, a) = t2;
            }
        }
        return H;
    };
    const double T = m.T1 + m.T2;
    const Eigen::MatrixXcd U = Eigen::MatrixXcd(((-I * m.T2) * piece(m.q * m.f)).exp()) *
                               Eigen::MatrixXcd(((-I * m.T1) * piece(m.f)).exp());

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(U);
    if (es.info() != Eigen::Success)
        throw numeric_error("nhssh_open_spectrum: eigensolver failed");

    OpenSpectrum sp;
    sp.T = T;
    sp.quasienergy.resize(n);
    sp.edge_weight.resize(n);
    for (int i = 0; i < n; ++i) {
        sp.quasienergy[i] = I * std::log(es.eigenvalues()(i)) / T;
        sp.edge_weight[i] = edge_weight_of(es.eigenvectors().col(i), cells, 2, opt.edge_frac);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.eigenvectors());
    const double smin = svd.singularValues().minCoeff();
    sp.eigenvector_condition = smin > 0.0 ? svd.singularValues().maxCoeff() / smin
                                          : std::numeric_limits<double>::infinity();
    return sp;
}

EdgeCounts count_edge_modes(const OpenSpectrum& sp, const EdgeCountOptions& opt) {
    const double zone = 2.0 * pi / sp.T;
    const double tol = opt.quasienergy_tol * zone;
    int raw0 = 0, rawpi = 0;
    for (std::size_t i = 0; i < sp.quasienergy.size(); ++i) {
        if (sp.edge_weight[i] < opt.weight_min) continue;
        const cplx e = sp.quasienergy[i];
        if (std::abs(e) < tol) ++raw0;
        const double dpi = std::min(std::abs(e - cplx(pi / sp.T, 0.0)),
                                    std::abs(e + cplx(pi / sp.T, 0.0)));
        if (dpi < tol) ++rawpi;
    }
    return {raw0 / 2, rawpi / 2};
}

// ---- non-Hermitian GBZ ----

double gbz_radius(double t1, double gamma) {
    const double den = std::abs(t1 + gamma / 2.0);
    const double num = std::abs(t1 - gamma / 2.0);
    if (num < 1e-14 || den < 1e-14)
        throw numeric_error("gbz_radius degenerate: |t1| = gamma/2");
    return std::sqrt(num / den);
}

cplx gbz_map(double k, double t1, double gamma) {
    return gbz_radius(t1, gamma) * std::exp(I * k);
}

namespace {

// 2x2 complex, traceless, offdiagonal pieces: H = [[0, Rp], [Rm, 0]].
// exp(-i H t) = cos(w t) I - i sin(w t)/w H with w = sqrt(Rp Rm); entire in
// Rp*Rm, so no branch choice is needed.
Eigen::Matrix2cd chiral_exp(cplx rp, cplx rm, double t) {
    const cplx z = rp * rm;
    const cplx w = std::sqrt(z);
    Eigen::Matrix2cd H;
    H << 0.0, rp, rm, 0.0;
    cplx c, s;
    if (std::abs(w) * t < 1e-8) {
        c = 1.0 - z * t * t / 2.0;
        s = t * (1.0 - z * t * t / 6.0);
    } else {
        c = std::cos(w * t);
        s = std::sin(w * t) / w;
    }
    return c * Eigen::Matrix2cd::Identity() - I * s * H;
}

struct FrameWindings {
    double w1 = 0.0, w2 = 0.0;
};

// Windings of the two half-period-shifted chiral frames of the driven NHSSH
// model along a circle of radius rho. Effective Hamiltonians are extracted
// from tilde-U = eps I + i r.sigma with a branch of theta = acos(eps) tracked
// continuously along the contour.
FrameWindings nhssh_frame_windings(const NhsshDriven& m, double rho, int points) {
    const double T = m.T1 + m.T2;
    FrameWindings out;
    for (int frame = 0; frame < 2; ++frame) {
        PhaseAccumulator accp, accm;
        bool have_prev = false;
        cplx th_prev = 0.0;
        for (int p = 0; p <= points; ++p) {
            const double k = 2.0 * pi * double(p) / double(points);
            const cplx beta = rho * std::exp(I * k);
            const cplx rp1 = m.t1 + m.gamma / 2.0 + m.f / beta;
            const cplx rm1 = m.t1 - m.gamma / 2.0 + m.f * beta;
            const cplx rp2 = m.t1 + m.gamma / 2.0 + m.q * m.f / beta;
            const cplx rm2 = m.t1 - m.gamma / 2.0 + m.q * m.f * beta;
            Eigen::Matrix2cd U;
            if (frame == 0)
                U = chiral_exp(rp1, rm1, m.T1 / 2) * chiral_exp(rp2, rm2, m.T2) *
                    chiral_exp(rp1, rm1, m.T1 / 2);
            else
                U = chiral_exp(rp2, rm2, m.T2 / 2) * chiral_exp(rp1, rm1, m.T1) *
                    chiral_exp(rp2, rm2, m.T2 / 2);

            const cplx eps = 0.5 * (U(0, 0) + U(1, 1));
            // continuous branch of theta = acos(eps): e^{-i theta}, e^{+i theta}
            // are the eigenvalues of U (det U = 1)
            cplx th = std::acos(eps);
            if (have_prev) {
                cplx best = th;
                double bd = std::numeric_limits<double>::infinity();
                for (int sgn : {1, -1})
                    for (int n2 = -1; n2 <= 1; ++n2) {
                        const cplx cand = double(sgn) * th + 2.0 * pi * double(n2);
                        const double d = std::abs(cand - th_prev);
                        if (d < bd) {
                            bd = d;
                            best = cand;
                        }
                    }
                th = best;
            }
            th_prev = th;
            const cplx chi = -std::sin(th);
            if (std::abs(chi) < 1e-12)
                throw numeric_error("nhssh winding: gapless point on the contour");
            // H_eff = (theta/T) (r.sigma)/chi; offdiagonals carry the winding
            const cplx scal = th / (T * chi);
            const cplx Rp = scal * (U(0, 1) / I);
            const cplx Rm = scal * (U(1, 0) / I);
            if (std::abs(Rp) < 1e-14 || std::abs(Rm) < 1e-14)
                throw numeric_error("nhssh winding: R vanished on the contour");
            accp.push(Rp);
            accm.push(Rm);
        }
        const double w = -(accp.winding() - accm.winding()) / 2.0;
        if (frame == 0)
            out.w1 = w;
        else
            out.w2 = w;
    }
    return out;
}

} // namespace

NhsshInvariants nhssh_invariants(const NhsshDriven& m, int contour_points) {
    NhsshInvariants out;
    const auto gbz = nhssh_frame_windings(m, gbz_radius(m.t1, m.gamma), contour_points);
    const auto bz = nhssh_frame_windings(m, 1.0, contour_points);
    out.w1 = gbz.w1;
    out.w2 = gbz.w2;
    out.w1_bz = bz.w1;
    out.w2_bz = bz.w2;
    const double n0 = std::abs(out.w1 + out.w2) / 2.0;
    const double npi = std::abs(out.w1 - out.w2) / 2.0;
    out.n_zero = int(std::llround(n0));
    out.n_pi = int(std::llround(npi));
    if (std::abs(n0 - out.n_zero) > 0.05 || std::abs(npi - out.n_pi) > 0.05)
        throw numeric_error("nhssh GBZ winding combination is not an integer");
    return out;
}

double nhssh_static_winding(double t1, double gamma, double t2, bool on_gbz,
                            int contour_points) {
    const double rho = on_gbz ? gbz_radius(t1, gamma) : 1.0;
    PhaseAccumulator accp, accm;
    for (int p = 0; p <= contour_points; ++p) {
        const double k = 2.0 * pi * double(p) / double(contour_points);
        const cplx beta = rho * std::exp(I * k);
        const cplx rp = t1 + gamma / 2.0 + t2 / beta;
        const cplx rm = t1 - gamma / 2.0 + t2 * beta;
        if (std::abs(rp) < 1e-14 || std::abs(rm) < 1e-14)
            throw numeric_error("nhssh_static_winding: gapless contour");
        accp.push(rp);
        accm.push(rm);
    }
    return -(accp.winding() - accm.winding()) / 2.0;
}

// ---- Haldane ribbon ----

namespace {

Eigen::MatrixXcd haldane_strip_piece(const HaldaneDriven& m, int piece, int W, double kx) {
    const double t3 = piece == 1 ? m.t3_a : m.t3_b;
    const double phi = piece == 1 ? m.phi_a : m.phi_b;
    const double s = std::sin(phi) * m.t2;
    const cplx ph = std::exp(I * kx);
    const int n = 2 * W; // rows of A (even) and B (odd) per cell
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    auto A = [&](int row) { return 2 * row; };
    auto B = [&](int row) { return 2 * row + 1; };
    auto bond = [&](int r, int c, cplx amp) {
        H(r, c) += amp;
        H(c, r) += std::conj(amp);
    };
    for (int r = 0; r < W; ++r) {
        // sublattice mass
        H(A(r), A(r)) += m.mass;
        H(B(r), B(r)) -= m.mass;
        // NN t1: displacements (0,0), (1,1), (0,1) in the (x, row) cell basis
        bond(A(r), B(r), m.t1);
        if (r + 1 < W) {
            bond(A(r), B(r + 1), m.t1 * ph);
            bond(A(r), B(r + 1), m.t1);
        }
        // third-neighbor t3: (1,0), (-1,0), (1,2)
        bond(A(r), B(r), t3 * ph);
        bond(A(r), B(r), t3 * std::conj(ph));
        if (r + 2 < W) bond(A(r), B(r + 2), t3 * ph);
        // NNN it2 sin(phi): A hops (1,1):-i, (0,1):+i, (1,0):+i; B opposite
        if (r + 1 < W) {
            bond(A(r), A(r + 1), -I * s * ph);
            bond(A(r), A(r + 1), I * s);
            bond(B(r), B(r + 1), I * s * ph);
            bond(B(r), B(r + 1), -I * s);
        }
        bond(A(r), A(r), I * s * ph);
        bond(B(r), B(r), -I * s * ph);
    }
    return H;
}

} // namespace

RibbonSpectrum haldane_ribbon(const HaldaneDriven& m, int width, int n_k) {
    require(width >= 8, "haldane_ribbon: strip too narrow");
    require(n_k >= 32, "haldane_ribbon: k grid too coarse");
    RibbonSpectrum out;
    const double T = m.T1 + m.T2;
    out.T = T;
    out.k.resize(n_k + 1);
    out.theta.resize(n_k + 1);
    out.edge_weight.resize(n_k + 1);
    const int edge_rows = std::max(1, width / 10);
    for (int j = 0; j <= n_k; ++j) {
        const double kx = 2.0 * pi * double(j) / double(n_k);
        out.k[j] = kx;
        const auto U = Eigen::MatrixXcd(
            herm_exp(haldane_strip_piece(m, 2, width, kx), m.T2) *
            herm_exp(haldane_strip_piece(m, 1, width, kx), m.T1));
        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(U, true);
        if (schur.info() != Eigen::Success) throw numeric_error("ribbon Schur failed");
        const int n = int(U.rows());
        out.theta[j].resize(n);
        out.edge_weight[j].resize(n);
        for (int i = 0; i < n; ++i) {
            out.theta[j][i] = -std::arg(schur.matrixT()(i, i));
            double w = 0.0;
            for (int r = width - edge_rows; r < width; ++r)
                w += std::norm(schur.matrixU()(2 * r, i)) +
                     std::norm(schur.matrixU()(2 * r + 1, i));
            out.edge_weight[j][i] = w;
        }
    }
    return out;
}

ChiralCounts ribbon_edge_chirality(const RibbonSpectrum& rs, double window, double weight_min) {
    auto wrap = [](double x) {
        while (x > pi) x -= 2.0 * pi;
        while (x <= -pi) x += 2.0 * pi;
        return x;
    };
    ChiralCounts out;
    for (int gap = 0; gap < 2; ++gap) {
        const double center = gap == 0 ? 0.0 : pi;
        int net = 0;
        for (std::size_t j = 0; j + 1 < rs.k.size(); ++j) {
            for (std::size_t i = 0; i < rs.theta[j].size(); ++i) {
                if (rs.edge_weight[j][i] < weight_min) continue;
                const double d0 = wrap(rs.theta[j][i] - center);
                if (std::abs(d0) > window) continue;
                // nearest edge state in the next column
                double best = std::numeric_limits<double>::infinity();
                double d1 = 0.0;
                for (std::size_t i2 = 0; i2 < rs.theta[j + 1].size(); ++i2) {
                    if (rs.edge_weight[j + 1][i2] < weight_min) continue;
                    const double cand = wrap(rs.theta[j + 1][i2] - center);
                    if (std::abs(cand - d0) < best) {
                        best = std::abs(cand - d0);
                        d1 = cand;
                    }
                }
                if (!std::isfinite(best) || best > window) continue;
                if (d0 < 0.0 && d1 >= 0.0)
                    ++net;
                else if (d0 >= 0.0 && d1 < 0.0)
                    --net;
            }
        }
        if (gap == 0)
            out.at_zero = net;
        else
            out.at_pi = net;
    }
    return out;
}

} // namespace qc::topology
