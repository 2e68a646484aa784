#pragma once

#include <vector>

// Special functions used by the filter and state formulas.

namespace ncqp::special {

double bessel_j0(double x);
double bessel_j1(double x);

/// e^{-|x|} I0(x), finite for all x.
double bessel_i0_scaled(double x);

/// log I0(x).
double log_bessel_i0(double x);

/// Laguerre polynomial L_n(x) by three-term recurrence.
double laguerre(int n, double x);

double lgamma(double x);
double log_binomial(int n, int k);
double binomial(int n, int k);

/// Probability density of the quadrature x (vacuum variance 1) for the Fock state |m>.
double fock_quadrature_density(int m, double x);
/// The same density for every m in [0, m_max] (one recurrence pass).
std::vector<double> fock_quadrature_densities(int m_max, double x);

} // namespace ncqp::special
