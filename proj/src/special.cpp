#include "ncqp/special.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

namespace ncqp::special {

double bessel_j0(double x) { return boost::math::cyl_bessel_j(0, x); }

double bessel_j1(double x) { return boost::math::cyl_bessel_j(1, x); }

double bessel_i0_scaled(double x)
{
    const double ax = std::fabs(x);
    if (ax < 500.0) {
        return boost::math::cyl_bessel_i(0, ax) * std::exp(-ax);
    }
    // Hankel asymptotic series; terms are < 1e-17 beyond the sixth at ax >= 500.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (8.0 * k * ax);
        sum += term;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * ax);
}

double log_bessel_i0(double x) { return std::fabs(x) + std::log(bessel_i0_scaled(x)); }

double laguerre(int n, double x)
{
    if (n == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double lgamma(double x) { return boost::math::lgamma(x); }

double log_binomial(int n, int k)
{
    return lgamma(n + 1.0) - lgamma(k + 1.0) - lgamma(n - k + 1.0);
}

double binomial(int n, int k)
{
    if (k < 0 || k > n) {
        return 0.0;
    }
    return std::round(std::exp(log_binomial(n, k)));
}

double fock_quadrature_density(int m, double x)
{
    // x = sqrt(2) q with normalized Hermite functions psi_m(q).
    const double q = x / std::numbers::sqrt2;
    double prev = 0.0;
    double cur = std::exp(-0.5 * q * q) / std::pow(std::numbers::pi, 0.25);
    for (int k = 0; k < m; ++k) {
        const double next = std::sqrt(2.0 / (k + 1.0)) * q * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return cur * cur / std::numbers::sqrt2;
}

std::vector<double> fock_quadrature_densities(int m_max, double x)
{
    const double q = x / std::numbers::sqrt2;
    std::vector<double> out(static_cast<std::size_t>(m_max) + 1);
    double prev = 0.0;
    double cur = std::exp(-0.5 * q * q) / std::pow(std::numbers::pi, 0.25);
    for (int k = 0; k <= m_max; ++k) {
        out[static_cast<std::size_t>(k)] = cur * cur / std::numbers::sqrt2;
        const double next = std::sqrt(2.0 / (k + 1.0)) * q * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return out;
}

} // namespace ncqp::special
