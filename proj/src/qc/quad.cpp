#include "qc/quad.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace qc::quad {

namespace {

using gk = boost::math::quadrature::gauss_kronrod<double, 15>;

template <class T, class F>
T run(const F& f, double a, double b, const Options& opt) {
    double err = 0.0, l1 = 0.0;
    T v = gk::integrate(f, a, b, opt.max_depth, opt.rel_tol, &err, &l1);
    const double scale = std::max(l1, opt.abs_floor);
    if (!(err <= 10.0 * opt.rel_tol * scale)) {
        std::ostringstream os;
        os << "quadrature did not converge: achieved error " << err
           << " (L1 " << l1 << ", requested rel " << opt.rel_tol << ")";
        throw numeric_error(os.str());
    }
    return v;
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt) {
    return run<double>(f, a, b, opt);
}

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 const Options& opt) {
    return run<cplx>(f, a, b, opt);
}

namespace {

template <class T, class F>
T semi_inf(const F& f, double scale, const Options& opt, double power) {
    require(scale > 0.0, "quadrature scale must be positive");
    require(power > 0.0, "quadrature map power must be positive");
    auto g = [&](double x) -> T {
        const double ratio = x / (1.0 - x);
        const double om = scale * std::pow(ratio, power);
        if (!std::isfinite(om)) return T{};
        const double jac =
            scale * power * std::pow(ratio, power - 1.0) / ((1.0 - x) * (1.0 - x));
        const T val = f(om) * jac;
        return (std::isfinite(std::abs(val))) ? val : T{};
    };
    return run<T>(g, 0.0, 1.0, opt);
}

} // namespace

double integrate_semi_inf(const std::function<double(double)>& f, double scale,
                          const Options& opt, double power) {
    return semi_inf<double>(f, scale, opt, power);
}

cplx integrate_semi_inf_c(const std::function<cplx(double)>& f, double scale,
                          const Options& opt, double power) {
    return semi_inf<cplx>(f, scale, opt, power);
}

double integrate_power_mapped(const std::function<double(double)>& f, double len,
                              const Options& opt, double power) {
    require(len > 0.0, "quadrature length must be positive");
    auto g = [&](double x) {
        const double om = len * std::pow(x, power);
        const double jac = len * power * std::pow(x, power - 1.0);
        return f(om) * jac;
    };
    return run<double>(g, 0.0, 1.0, opt);
}

} // namespace qc::quad
