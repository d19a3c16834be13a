// oracle_bath.hpp — test-only oracle: discretize the band into K modes and
// diagonalize the single-excitation arrow Hamiltonian; u(t) is the survival
// amplitude of the excited system state. Independent of the Volterra path.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

inline std::vector<std::complex<double>> discrete_bath_u(
    const std::function<double(double)>& J, double omega0, int K, double omega_max,
    const std::vector<double>& times) {
    const double dw = omega_max / K;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(K + 1, K + 1);
    H(0, 0) = omega0;
    for (int k = 0; k < K; ++k) {
        const double w = (k + 0.5) * dw; // midpoint modes
        H(k + 1, k + 1) = w;
        const double g = std::sqrt(J(w) * dw);
        H(0, k + 1) = H(k + 1, 0) = g;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd& E = es.eigenvalues();
    const Eigen::VectorXd w0 = es.eigenvectors().row(0).transpose();

    std::vector<std::complex<double>> u;
    u.reserve(times.size());
    for (double t : times) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j <= K; ++j)
            acc += w0(j) * w0(j) * std::exp(std::complex<double>(0.0, -E(j) * t));
        u.push_back(acc);
    }
    return u;
}
