#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ncqp::quad {

/// Nodes and weights of a 1D rule: integral ~= sum(weight[i] * f(node[i])).
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return nodes.size(); }

    template <typename F>
    [[nodiscard]] double apply(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            sum += weights[i] * f(nodes[i]);
        }
        return sum;
    }
};

/// n-point Gauss-Legendre rule on [-1, 1]; cached per n.
const Rule& gauss_legendre(int n);

/// Composite Gauss-Legendre rule: every interval between consecutive
/// breakpoints is split into `panels_per_interval` equal panels.
Rule composite(std::span<const double> breakpoints, int panels_per_interval, int order = 16);

/// Composite rule on [a, b] with `panels` equal panels.
Rule composite(double a, double b, int panels, int order = 16);

struct AdaptiveResult {
    double value;
    double error;
};

/// Adaptive Gauss-Kronrod (15 points) on [a, b]; b may be +infinity.
AdaptiveResult adaptive(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-12, int max_depth = 30);

/// Sum of adaptive integrals over consecutive breakpoints.
AdaptiveResult adaptive(const std::function<double(double)>& f, std::span<const double> breakpoints,
                        double rel_tol = 1e-12, int max_depth = 30);

/// Golden-section search for a minimum of a unimodal f on [a, b]. Returns the abscissa.
double golden_minimize(const std::function<double(double)>& f, double a, double b, double tol = 1e-8);

/// Bisection for a sign change of f on [a, b]; f(a) and f(b) must differ in sign.
double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

/// Natural cubic spline on a uniform grid.
class UniformSpline {
public:
    UniformSpline() = default;
    UniformSpline(double x0, double step, std::vector<double> values);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double x_min() const { return x0_; }
    [[nodiscard]] double x_max() const { return x0_ + step_ * static_cast<double>(values_.size() - 1); }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }

private:
    double x0_ = 0.0;
    double step_ = 1.0;
    std::vector<double> values_;
    std::vector<double> second_;
};

} // namespace ncqp::quad
