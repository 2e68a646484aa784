#pragma once
// Reference computations for the tests. They use the C++17 special math
// functions and plain Simpson / trapezoid sums, not the library's own
// quadrature or Boost-backed special functions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

constexpr double pi = std::numbers::pi;

inline double j0(double x) { return std::cyl_bessel_j(0.0, x); }
inline double j1(double x) { return std::cyl_bessel_j(1.0, x); }

/// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n)
{
    if (n % 2 != 0) {
        ++n;
    }
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    }
    return s * h / 3.0;
}

/// Normalized autocorrelation of the unit-disk indicator, u = b / w.
inline double disk_autocorr(double u)
{
    if (u >= 2.0) {
        return 0.0;
    }
    const double h = u / 2.0;
    return 2.0 / pi * (std::acos(h) - h * std::sqrt(1.0 - h * h));
}

/// Transform of the q = infinity filter via the autocorrelation theorem: (J1(2 w r) / r)^2 / pi.
inline double disk_filter_transform(double w, double r)
{
    if (r == 0.0) {
        return w * w / pi;
    }
    const double j = j1(2.0 * w * r) / r;
    return j * j / pi;
}

/// (2/pi) int_0^bmax db b g(b) J0(2 r b), Simpson with n intervals.
inline double hankel(const std::function<double(double)>& g, double r, double b_max, int n)
{
    return 2.0 / pi * simpson([&](double b) { return b * g(b) * j0(2.0 * r * b); }, 0.0, b_max, n);
}

/// Kolmogorov-Smirnov distance of sorted samples against a CDF.
inline double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf)
{
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, std::fabs(f - i / n), std::fabs((i + 1) / n - f)});
    }
    return d;
}

/// CDF from a density tabulated on a uniform grid (trapezoid), linearly interpolated.
class TabulatedCdf {
public:
    TabulatedCdf(const std::function<double(double)>& pdf, double lo, double hi, int n)
        : lo_(lo), step_((hi - lo) / n), cdf_(n + 1, 0.0)
    {
        double prev = pdf(lo);
        for (int i = 1; i <= n; ++i) {
            const double cur = pdf(lo + i * step_);
            cdf_[i] = cdf_[i - 1] + 0.5 * step_ * (prev + cur);
            prev = cur;
        }
    }
    double operator()(double x) const
    {
        const double t = (x - lo_) / step_;
        if (t <= 0.0) {
            return 0.0;
        }
        const auto i = static_cast<std::size_t>(t);
        if (i + 1 >= cdf_.size()) {
            return cdf_.back();
        }
        const double f = t - static_cast<double>(i);
        return cdf_[i] * (1.0 - f) + cdf_[i + 1] * f;
    }
    double total() const { return cdf_.back(); }

private:
    double lo_;
    double step_;
    std::vector<double> cdf_;
};

inline double normal_cdf(double x, double variance) { return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance)); }

/// Sample mean and unbiased standard error of the mean.
struct MeanSe {
    double mean;
    double se;
};
inline MeanSe mean_se(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) {
        m += x;
    }
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    const double n = static_cast<double>(v.size());
    return {m, std::sqrt(s / (n - 1.0) / n)};
}

} // namespace oracle
