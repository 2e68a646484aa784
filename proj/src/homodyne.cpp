#include "ncqp/homodyne.hpp"

#include "ncqp/errors.hpp"
#include "ncqp/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ncqp {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
} // namespace

PatternTable::PatternTable(const FilterSpec& spec, double lambda_max, int refinement)
    : spec_(spec)
    , lambda_max_(lambda_max)
{
    if (!spec.is_nonclassicality_filter() && spec.family() != FilterFamily::GaussianReference) {
        throw ValidationError("pattern function needs a nonclassicality filter");
    }
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max) || refinement < 1) {
        throw ValidationError("pattern table needs lambda_max > 0 and refinement >= 1");
    }
    const PatternSupport support = pattern_support(spec); // throws for the Gaussian with w >= 1
    if (support.log_peak > 650.0) {
        throw NumericalError("pattern function overflows for " + spec.label() + " at w = "
                             + io::format_double(spec.width()));
    }
    b_cut_ = support.cutoff;
    log_peak_ = support.log_peak;
    const quad::Rule rule = radial_rule(spec, b_cut_, lambda_max + 8.0, 1.5);
    nodes_ = rule.nodes;
    weights_.resize(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double b = rule.nodes[i];
        weights_[i] = 2.0 / kPi * rule.weights[i] * b * std::exp(0.5 * b * b + log_filter(spec, b));
    }
    step_ = kPi / (8.0 * refinement * b_cut_);
    const auto count = static_cast<std::size_t>(std::ceil(lambda_max / step_)) + 1;
    lambda_max_ = step_ * static_cast<double>(count - 1);
    values_.resize(count);
    slopes_.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double lambda = step_ * static_cast<double>(k);
        values_[k] = direct(lambda);
        slopes_[k] = direct_derivative(lambda);
    }
}

double PatternTable::direct(double lambda) const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        sum += weights_[i] * std::cos(lambda * nodes_[i]);
    }
    return sum;
}

double PatternTable::direct_derivative(double lambda) const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        sum -= weights_[i] * nodes_[i] * std::sin(lambda * nodes_[i]);
    }
    return sum;
}

double PatternTable::operator()(double lambda) const
{
    const double a = std::fabs(lambda);
    if (a > lambda_max_) {
        return 0.0;
    }
    const double pos = a / step_;
    auto k = static_cast<std::size_t>(pos);
    if (k >= values_.size() - 1) {
        k = values_.size() - 2;
    }
    const double t = pos - static_cast<double>(k);
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * values_[k] + h10 * step_ * slopes_[k] + h01 * values_[k + 1] + h11 * step_ * slopes_[k + 1];
}

double required_lambda_max(const QuadratureDataset& data, double alpha_max)
{
    double x_max = 0.0;
    for (const auto& r : data.records) {
        x_max = std::max(x_max, std::fabs(r.x));
    }
    return x_max + 2.0 * alpha_max + 5.0;
}

double pattern_argument(const QuadratureRecord& r, std::complex<double> alpha)
{
    return r.x + 2.0 * std::abs(alpha) * std::sin(std::arg(alpha) + r.phi - 0.5 * kPi);
}

QpEstimate estimate_qp(const QuadratureDataset& data, const PatternTable& table, std::complex<double> alpha)
{
    const std::size_t n = data.size();
    if (n == 0) {
        throw ValidationError("cannot estimate from an empty dataset");
    }
    QpEstimate e;
    e.alpha = alpha;
    e.width = table.width();
    e.n_used = n;
    std::vector<double> f(n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double lambda = pattern_argument(data.records[j], alpha);
        if (!table.covers(lambda)) {
            ++e.n_outside;
        }
        f[j] = table(lambda);
        sum += f[j];
    }
    e.value = sum / static_cast<double>(n);
    if (n < 2) {
        e.sigma = kNaN;
        return e;
    }
    double ss = 0.0;
    for (double v : f) {
        ss += (v - e.value) * (v - e.value);
    }
    e.sigma = std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)));
    return e;
}

CfEstimate estimate_cf(const QuadratureDataset& data, double b)
{
    const std::size_t n = data.size();
    if (n < 2) {
        throw ValidationError("CF estimate needs at least two records");
    }
    if (!(b >= 0.0) || !std::isfinite(b)) {
        throw ValidationError("CF argument b must be finite and >= 0");
    }
    double sum = 0.0;
    for (const auto& r : data.records) {
        sum += std::cos(b * r.x);
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& r : data.records) {
        const double d = std::cos(b * r.x) - mean;
        ss += d * d;
    }
    const double scale = std::exp(0.5 * b * b);
    return {b, scale * mean, scale * std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)))};
}

void write_estimates_csv(const std::filesystem::path& path, const std::vector<QpEstimate>& rows)
{
    std::vector<std::vector<double>> out;
    for (const auto& e : rows) {
        out.push_back({e.alpha.real(), e.alpha.imag(), e.width, e.value, e.sigma, static_cast<double>(e.n_used)});
    }
    io::write_csv(path, {"alpha_re", "alpha_im", "w", "p", "sigma", "n_used"}, out);
}

} // namespace ncqp
