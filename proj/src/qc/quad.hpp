// quad.hpp — adaptive quadrature helpers (finite and semi-infinite intervals)
#pragma once

#include <functional>

#include "qc/common.hpp"

namespace qc::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_floor = 1e-300; // below this magnitude the relative test is waived
    int max_depth = 17;
};

// Adaptive Gauss-Kronrod on [a, b]. Throws numeric_error (with the achieved
// error estimate in the message) if the tolerance cannot be met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});
cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 const Options& opt = {});

// Integral over [0, inf) via the map w = scale*(x/(1-x))^power, x in [0,1).
// `scale` should be of the order of the integrand's decay scale; power > 1
// regularizes integrable w^(a-1) endpoint behavior at w = 0 (choose
// power = 1/a).
double integrate_semi_inf(const std::function<double(double)>& f, double scale,
                          const Options& opt = {}, double power = 1.0);
cplx integrate_semi_inf_c(const std::function<cplx(double)>& f, double scale,
                          const Options& opt = {}, double power = 1.0);

// Integral over [0, len] with the map w = len * x^power (endpoint
// regularization at w = 0).
double integrate_power_mapped(const std::function<double(double)>& f, double len,
                              const Options& opt = {}, double power = 1.0);

} // namespace qc::quad
