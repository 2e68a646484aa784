#pragma once

#include "ncqp/dataset.hpp"
#include "ncqp/filters.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <vector>

namespace ncqp {

/// Pattern function f(Lambda) = (2/pi) int db b e^{b^2/2} Omega_w(b) cos(Lambda b),
/// tabulated on [0, lambda_max] (f is even) with cubic Hermite interpolation
/// using the exact derivative at the nodes. Immutable after construction.
class PatternTable {
public:
    /// `refinement` divides the node spacing pi / (8 b_cut) (default 8, i.e. pi / (64 b_cut)).
    PatternTable(const FilterSpec& spec, double lambda_max, int refinement = 8);

    /// Interpolated f(Lambda); 0 beyond lambda_max.
    [[nodiscard]] double operator()(double lambda) const;
    [[nodiscard]] bool covers(double lambda) const { return std::fabs(lambda) <= lambda_max_; }
    /// f and f' by direct summation of the table's quadrature rule.
    [[nodiscard]] double direct(double lambda) const;
    [[nodiscard]] double direct_derivative(double lambda) const;

    [[nodiscard]] const FilterSpec& spec() const { return spec_; }
    [[nodiscard]] double width() const { return spec_.width(); }
    [[nodiscard]] double lambda_max() const { return lambda_max_; }
    [[nodiscard]] double spacing() const { return step_; }
    [[nodiscard]] double b_cut() const { return b_cut_; }
    [[nodiscard]] double log_peak() const { return log_peak_; }
    [[nodiscard]] int interpolation_order() const { return 3; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }

private:
    FilterSpec spec_;
    double lambda_max_;
    double step_;
    double b_cut_;
    double log_peak_;
    std::vector<double> nodes_;   // radial quadrature nodes b_i
    std::vector<double> weights_; // (2/pi) w_i b_i e^{b_i^2/2} Omega(b_i)
    std::vector<double> values_;
    std::vector<double> slopes_;
};

/// Lambda_max covering every record of `data` for |alpha| <= alpha_max.
double required_lambda_max(const QuadratureDataset& data, double alpha_max);

/// Lambda_{j,alpha} = x_j + 2|alpha| sin(arg alpha + phi_j - pi/2).
double pattern_argument(const QuadratureRecord& r, std::complex<double> alpha);

struct QpEstimate {
    std::complex<double> alpha;
    double width = 0.0;
    double value = 0.0;
    double sigma = 0.0; ///< NaN when fewer than two records
    std::size_t n_used = 0;
    std::size_t n_outside = 0; ///< records whose Lambda fell outside the table (counted as f = 0)
};

/// Sample mean of the pattern function and its unbiased standard error.
QpEstimate estimate_qp(const QuadratureDataset& data, const PatternTable& table, std::complex<double> alpha);

struct CfEstimate {
    double b = 0.0;
    double value = 0.0;
    double sigma = 0.0;
};

/// |Phi|(b) estimated as e^{b^2/2} mean cos(b x_j), with its standard error.
CfEstimate estimate_cf(const QuadratureDataset& data, double b);

void write_estimates_csv(const std::filesystem::path& path, const std::vector<QpEstimate>& rows);

} // namespace ncqp
