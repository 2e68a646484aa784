#include "ncqp/quadrature.hpp"

#include "ncqp/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace ncqp::quad {

namespace {

Rule make_gauss_legendre(int n)
{
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    return rule;
}

} // namespace

const Rule& gauss_legendre(int n)
{
    static std::mutex mutex;
    static std::map<int, Rule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, make_gauss_legendre(n)).first;
    }
    return it->second;
}

Rule composite(std::span<const double> breakpoints, int panels_per_interval, int order)
{
    const Rule& base = gauss_legendre(order);
    Rule rule;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double lo = breakpoints[i];
        const double hi = breakpoints[i + 1];
        if (!(hi > lo)) {
            continue;
        }
        const double width = (hi - lo) / panels_per_interval;
        for (int p = 0; p < panels_per_interval; ++p) {
            const double a = lo + p * width;
            const double half = 0.5 * width;
            for (std::size_t k = 0; k < base.size(); ++k) {
                rule.nodes.push_back(a + half * (base.nodes[k] + 1.0));
                rule.weights.push_back(half * base.weights[k]);
            }
        }
    }
    return rule;
}

Rule composite(double a, double b, int panels, int order)
{
    const double bp[2] = {a, b};
    return composite(bp, panels, order);
}

AdaptiveResult adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                        int max_depth)
{
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, static_cast<unsigned>(max_depth), rel_tol, &error, &l1);
    return {value, error};
}

AdaptiveResult adaptive(const std::function<double(double)>& f, std::span<const double> breakpoints,
                        double rel_tol, int max_depth)
{
    AdaptiveResult total{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) {
            continue;
        }
        const auto part = adaptive(f, breakpoints[i], breakpoints[i + 1], rel_tol, max_depth);
        total.value += part.value;
        total.error += part.error;
    }
    return total;
}

double golden_minimize(const std::function<double(double)>& f, double a, double b, double tol)
{
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (std::fabs(b - a) > tol * (1.0 + std::fabs(a) + std::fabs(b))) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

double bisect(const std::function<double(double)>& f, double a, double b, double tol)
{
    double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) {
        return a;
    }
    if (fb == 0.0) {
        return b;
    }
    if ((fa < 0.0) == (fb < 0.0)) {
        throw NumericalError("bisect: no sign change on the bracket");
    }
    for (int iter = 0; iter < 200 && (b - a) > tol * (1.0 + std::fabs(a)); ++iter) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

UniformSpline::UniformSpline(double x0, double step, std::vector<double> values)
    : x0_(x0), step_(step), values_(std::move(values))
{
    const std::size_t n = values_.size();
    if (n < 3) {
        throw ValidationError("UniformSpline: need at least three nodes");
    }
    // Natural spline: tridiagonal solve for second derivatives.
    second_.assign(n, 0.0);
    std::vector<double> c(n, 0.0);
    std::vector<double> d(n, 0.0);
    const double h2 = step_ * step_;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double rhs = 6.0 * (values_[i + 1] - 2.0 * values_[i] + values_[i - 1]) / h2;
        const double denom = 4.0 - c[i - 1];
        c[i] = 1.0 / denom;
        d[i] = (rhs - d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        second_[i] = d[i] - c[i] * second_[i + 1];
    }
}

double UniformSpline::operator()(double x) const
{
    const double t = (x - x0_) / step_;
    const auto last = static_cast<double>(values_.size() - 1);
    if (!(t >= 0.0) || t > last) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    auto i = static_cast<std::size_t>(t);
    if (i >= values_.size() - 1) {
        i = values_.size() - 2;
    }
    const double a = static_cast<double>(i + 1) - t;
    const double b = 1.0 - a;
    const double h2 = step_ * step_;
    return a * values_[i] + b * values_[i + 1]
        + ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * h2 / 6.0;
}

} // namespace ncqp::quad
