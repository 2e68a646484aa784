#include "ncqp/filters.hpp"

#include "ncqp/errors.hpp"
#include "ncqp/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace ncqp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_width(double width)
{
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw ValidationError("filter width must be positive and finite");
    }
}

// (2/pi) [acos x - x sqrt(1 - x^2)] written as (t - sin t)/pi with t = 2 acos x.
double disk_overlap(double x)
{
    const double theta = 2.0 * std::asin(std::sqrt(std::max(0.0, 0.5 * (1.0 - x))));
    const double t = 2.0 * theta;
    if (t < 0.5) {
        const double t2 = t * t;
        double term = t * t2 / 6.0;
        double sum = term;
        for (int k = 1; k < 8; ++k) {
            term *= -t2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            sum += term;
        }
        return sum / kPi;
    }
    return (t - std::sin(t)) / kPi;
}

long double disk_overlap_ld(long double x)
{
    const long double theta = 2.0L * std::asin(std::sqrt(std::max(0.0L, 0.5L * (1.0L - x))));
    const long double t = 2.0L * theta;
    if (t < 0.5L) {
        const long double t2 = t * t;
        long double term = t * t2 / 6.0L;
        long double sum = term;
        for (int k = 1; k < 10; ++k) {
            term *= -t2 / ((2.0L * k + 2.0L) * (2.0L * k + 3.0L));
            sum += term;
        }
        return sum / std::numbers::pi_v<long double>;
    }
    return (t - std::sin(t)) / std::numbers::pi_v<long double>;
}

// Excess exponent E = |z - a|^q + |z + a|^q - 2 a^q along the ray z = rho e^{i psi}, cos psi = c.
struct RayExponent {
    double q;
    double a;
    double c;

    double operator()(double rho) const
    {
        if (a == 0.0) {
            return 2.0 * std::pow(rho, q);
        }
        const double a2 = a * a;
        const double aq = std::pow(a, q);
        if (aq < 1e-200) {
            // a^q is negligible; the relative form would give 0 * inf.
            const double c2 = rho * rho + a2;
            const double m = 2.0 * a * rho * c;
            return std::pow(std::max(0.0, c2 - m), 0.5 * q) + std::pow(c2 + m, 0.5 * q) - 2.0 * aq;
        }
        const double e1 = (rho * rho - 2.0 * a * rho * c) / a2;
        const double e2 = (rho * rho + 2.0 * a * rho * c) / a2;
        const double half_q = 0.5 * q;
        return aq * (std::expm1(half_q * std::log1p(e1)) + std::expm1(half_q * std::log1p(e2)));
    }
};

double ray_level(const RayExponent& e, double level, double hi)
{
    double lo = 0.0;
    for (int i = 0; i < 18; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (e(mid) < level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Integral of exp(-E) over the plane, centered at the midpoint of the two generators.
double centered_overlap_integral(double q, double a, int angular_nodes)
{
    const auto& ang = quad::gauss_legendre(angular_nodes);
    const auto& gl = quad::gauss_legendre(12);
    const double scale = a > 0.0 ? std::min(1.0, 1.0 / std::sqrt(q * std::pow(a, q - 2.0))) : 1.0;
    double total = 0.0;
    for (std::size_t k = 0; k < ang.size(); ++k) {
        const double psi = 0.25 * kPi * (ang.nodes[k] + 1.0);
        const RayExponent e{q, a, std::cos(psi)};
        double hi = 0.5 * scale;
        while (e(hi) < 50.0) {
            hi *= 2.0;
        }
        const double rho_end = ray_level(e, 50.0, hi);
        const double rho_one = ray_level(e, 1.0, rho_end);
        std::vector<double> bp{0.0, rho_one, rho_end};
        const double closest = a * e.c;
        if (a > 0.0 && closest < rho_end) {
            bp.push_back(closest);
        }
        std::sort(bp.begin(), bp.end());
        double ray = 0.0;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
            const double width = (bp[i + 1] - bp[i]) / 2.0;
            if (!(width > 0.0)) {
                continue;
            }
            for (int p = 0; p < 2; ++p) {
                const double left = bp[i] + p * width;
                for (std::size_t j = 0; j < gl.size(); ++j) {
                    const double rho = left + 0.5 * width * (gl.nodes[j] + 1.0);
                    ray += 0.5 * width * gl.weights[j] * rho * std::exp(-e(rho));
                }
            }
        }
        total += 0.25 * kPi * ang.weights[k] * ray;
    }
    return 4.0 * total;
}

double table_u_max(double q)
{
    // Far enough that e^{b^2} Omega^2 is negligible for widths up to 4 and
    // Omega itself underflows any double.
    const double w_cap = 4.0;
    auto ok = [&](double u) {
        const double tail = 2.0 * std::pow(0.5 * u, q);
        if (tail < 800.0) {
            return false;
        }
        return q <= 2.0 || 2.0 * tail - (w_cap * u) * (w_cap * u) >= 80.0;
    };
    double u = 2.0;
    while (!ok(u)) {
        u += 0.01 * std::max(1.0, u);
        if (u > 1e4) {
            throw ValidationError("autocorrelation filter table: q too close to 2");
        }
    }
    return u;
}

std::shared_ptr<const RadialFilterTable> build_table(double q)
{
    const double u_max = table_u_max(q);
    const int n = std::max(2048, static_cast<int>(std::ceil(u_max / 0.02)) + 1);
    const double step = u_max / (n - 1);
    const double norm = std::log(centered_overlap_integral(q, 0.0, 64));
    std::vector<double> log_values(n);
    log_values[0] = 0.0;
    for (int i = 1; i < n; ++i) {
        const double a = 0.5 * i * step;
        log_values[i] = -2.0 * std::pow(a, q) + std::log(centered_overlap_integral(q, a, 64)) - norm;
    }
    return std::make_shared<RadialFilterTable>(q, u_max, std::move(log_values));
}

} // namespace

// ---------------------------------------------------------------------------
// RadialFilterTable

RadialFilterTable::RadialFilterTable(double q, double u_max, std::vector<double> log_values)
    : q_(q), u_max_(u_max)
{
    const double step = u_max / static_cast<double>(log_values.size() - 1);
    const double threshold = std::log(1e-14);
    b_max_ = u_max;
    for (std::size_t i = 0; i < log_values.size(); ++i) {
        if (log_values[i] < threshold) {
            b_max_ = static_cast<double>(i) * step;
            break;
        }
    }
    log_values_ = std::move(log_values);
    const std::size_t ghosts = std::min<std::size_t>(16, log_values_.size() - 1);
    std::vector<double> extended(log_values_.rbegin() + static_cast<std::ptrdiff_t>(log_values_.size() - 1 - ghosts),
                                 log_values_.rend() - 1);
    extended.insert(extended.end(), log_values_.begin(), log_values_.end());
    log_ = quad::UniformSpline(-static_cast<double>(ghosts) * step, step, std::move(extended));
}

std::vector<double> RadialFilterTable::radii() const
{
    const auto n = log_values_.size();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = u_max_ * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return r;
}

std::vector<double> RadialFilterTable::values() const
{
    std::vector<double> v(log_values_);
    for (auto& x : v) {
        x = std::exp(x);
    }
    return v;
}

double RadialFilterTable::log_value(double u) const
{
    if (u <= u_max_) {
        return std::min(0.0, log_(u));
    }
    return log_values_.back() - 2.0 * (std::pow(0.5 * u, q_) - std::pow(0.5 * u_max_, q_));
}

double autocorr_log_direct(double q, double u, int angular_nodes)
{
    const double norm = centered_overlap_integral(q, 0.0, angular_nodes);
    const double a = 0.5 * u;
    return -2.0 * std::pow(a, q) + std::log(centered_overlap_integral(q, a, angular_nodes) / norm);
}

std::shared_ptr<const RadialFilterTable> autocorr_table(double q)
{
    static std::mutex mutex;
    static std::map<double, std::shared_ptr<const RadialFilterTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[q];
    if (!slot) {
        slot = build_table(q);
    }
    return slot;
}

// ---------------------------------------------------------------------------
// FilterSpec

FilterSpec FilterSpec::autocorr(double q, double width)
{
    if (!(q > 2.0) || !std::isfinite(q)) {
        throw ValidationError("autocorrelation filter requires q > 2");
    }
    return autocorr_reference(q, width);
}

FilterSpec FilterSpec::autocorr_reference(double q, double width)
{
    require_width(width);
    if (!(q >= 1.0) || !std::isfinite(q)) {
        throw ValidationError("autocorrelation reference requires q >= 1");
    }
    FilterSpec f;
    f.family_ = FilterFamily::AutocorrQ;
    f.q_ = q;
    f.width_ = width;
    f.table_ = autocorr_table(q);
    return f;
}

FilterSpec FilterSpec::autocorr_inf(double width)
{
    require_width(width);
    FilterSpec f;
    f.family_ = FilterFamily::AutocorrInf;
    f.width_ = width;
    return f;
}

FilterSpec FilterSpec::analytic(double s, double c, double width)
{
    if (!(s > 2.0) || !std::isfinite(s)) {
        throw ValidationError("analytic filter requires s > 2");
    }
    if (!(c >= cmin(s) * (1.0 - 1e-12))) {
        std::ostringstream msg;
        msg << "analytic filter requires C >= cmin(s) = " << cmin(s) << ", got C = " << c;
        throw ValidationError(msg.str());
    }
    return analytic_unchecked(s, c, width);
}

FilterSpec FilterSpec::analytic_unchecked(double s, double c, double width)
{
    require_width(width);
    if (!(s > 0.0) || !(c > 0.0)) {
        throw ValidationError("analytic filter requires s > 0 and C > 0");
    }
    FilterSpec f;
    f.family_ = FilterFamily::AnalyticInvertible;
    f.s_ = s;
    f.c_ = c;
    f.width_ = width;
    return f;
}

FilterSpec FilterSpec::gaussian(double width)
{
    require_width(width);
    FilterSpec f;
    f.family_ = FilterFamily::GaussianReference;
    f.width_ = width;
    return f;
}

FilterSpec FilterSpec::with_width(double width) const
{
    require_width(width);
    FilterSpec f = *this;
    f.width_ = width;
    return f;
}

bool FilterSpec::is_nonclassicality_filter() const
{
    switch (family_) {
    case FilterFamily::AutocorrQ:
        return q_ > 2.0;
    case FilterFamily::AutocorrInf:
        return true;
    case FilterFamily::AnalyticInvertible:
        return s_ > 2.0 && c_ >= cmin(s_) * (1.0 - 1e-12);
    case FilterFamily::GaussianReference:
        return false;
    }
    return false;
}

std::string FilterSpec::label() const
{
    switch (family_) {
    case FilterFamily::AutocorrQ: {
        std::ostringstream out;
        out << 'q' << q_;
        return out.str();
    }
    case FilterFamily::AutocorrInf:
        return "qinf";
    case FilterFamily::AnalyticInvertible:
        return "analytic";
    case FilterFamily::GaussianReference:
        return "gauss";
    }
    return "?";
}

nlohmann::json FilterSpec::to_json() const
{
    nlohmann::json j;
    j["family"] = label();
    j["w"] = width_;
    if (family_ == FilterFamily::AutocorrQ) {
        j["q"] = q_;
    }
    if (family_ == FilterFamily::AnalyticInvertible) {
        j["s"] = s_;
        j["C"] = c_;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Evaluation

double cmin(double s)
{
    if (!(s > 2.0)) {
        throw ValidationError("cmin(s) requires s > 2");
    }
    return std::pow((3.0 * (s - 1.0) + std::sqrt(1.0 - 6.0 * s + 5.0 * s * s)) / (2.0 * s), 1.0 / s);
}

CminPeak cmin_peak(double s_max)
{
    if (!(s_max > 2.0)) {
        throw ValidationError("cmin_peak needs s_max > 2");
    }
    // cmin rises from sqrt(1.5) at s -> 2 to a single maximum, then decays to 1.
    const double s = quad::golden_minimize([](double x) { return -cmin(x); }, 2.0 + 1e-9, s_max, 1e-12);
    return {s, cmin(s)};
}

double log_filter(const FilterSpec& spec, double b)
{
    if (!(b >= 0.0) || !std::isfinite(b)) {
        throw ValidationError("filter argument must be finite and nonnegative");
    }
    const double u = b / spec.width();
    switch (spec.family()) {
    case FilterFamily::AutocorrQ:
        return spec.table()->log_value(u);
    case FilterFamily::AutocorrInf:
        return u >= 2.0 ? kNegInf : std::log(disk_overlap(0.5 * u));
    case FilterFamily::AnalyticInvertible:
        return -std::pow(u + spec.c(), spec.s()) + std::pow(spec.c(), spec.s());
    case FilterFamily::GaussianReference:
        return -0.5 * u * u;
    }
    return kNegInf;
}

double eval_filter(const FilterSpec& spec, double b)
{
    if (spec.family() == FilterFamily::AutocorrInf) {
        if (!(b >= 0.0) || !std::isfinite(b)) {
            throw ValidationError("filter argument must be finite and nonnegative");
        }
        const double u = b / spec.width();
        return u >= 2.0 ? 0.0 : disk_overlap(0.5 * u);
    }
    return std::exp(log_filter(spec, b));
}

long double eval_filter_ld(const FilterSpec& spec, long double b)
{
    const long double u = b / static_cast<long double>(spec.width());
    switch (spec.family()) {
    case FilterFamily::AutocorrInf:
        return u >= 2.0L ? 0.0L : disk_overlap_ld(0.5L * u);
    case FilterFamily::AnalyticInvertible: {
        const long double s = spec.s();
        const long double c = spec.c();
        return std::exp(-std::pow(u + c, s) + std::pow(c, s));
    }
    case FilterFamily::GaussianReference:
        return std::exp(-0.5L * u * u);
    case FilterFamily::AutocorrQ:
        break;
    }
    throw ValidationError("extended-precision evaluation needs a closed-form filter");
}

double filter_cutoff(const FilterSpec& spec, double threshold)
{
    const double w = spec.width();
    if (spec.family() == FilterFamily::AutocorrInf) {
        return 2.0 * w;
    }
    if (spec.family() == FilterFamily::GaussianReference) {
        return w * std::sqrt(-2.0 * std::log(threshold));
    }
    const double level = std::log(threshold);
    double hi = w;
    while (log_filter(spec, hi) >= level) {
        hi *= 2.0;
    }
    return quad::bisect([&](double b) { return log_filter(spec, b) - level; }, 0.0, hi, 1e-12);
}

PatternSupport pattern_support(const FilterSpec& spec)
{
    const double w = spec.width();
    if (spec.family() == FilterFamily::GaussianReference && w >= 1.0) {
        throw ValidationError("pattern function singular for the Gaussian filter with w >= 1");
    }
    auto ell = [&](double b) { return std::log(b) + 0.5 * b * b + log_filter(spec, b); };
    if (spec.family() == FilterFamily::AutocorrInf) {
        double peak = kNegInf;
        for (int i = 1; i < 2000; ++i) {
            peak = std::max(peak, ell(2.0 * w * i / 2000.0));
        }
        return {2.0 * w, peak};
    }
    const double drop = 46.0;
    double peak = kNegInf;
    double b = 0.0;
    const double limit = 1e6 * std::max(1.0, w);
    while (true) {
        b += std::max(0.005 * w, 0.002 * b);
        const double v = ell(b);
        peak = std::max(peak, v);
        if (v < peak - drop && b > w) {
            return {b, peak};
        }
        if (b > limit) {
            throw NumericalError("pattern function integrand does not decay for " + spec.label());
        }
    }
}

quad::Rule radial_rule(const FilterSpec& spec, double cutoff, double max_frequency, double density)
{
    const double w = spec.width();
    if (spec.family() == FilterFamily::AutocorrInf) {
        // b = 2w cos(theta) removes the (2w - b)^{3/2} edge behaviour.
        const double k = 2.0 * w * max_frequency;
        const int panels = std::max(4, static_cast<int>(std::ceil(density * 0.5 * kPi * k / 10.0)));
        const quad::Rule theta = quad::composite(0.0, 0.5 * kPi, panels);
        quad::Rule rule;
        rule.nodes.reserve(theta.size());
        rule.weights.reserve(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) {
            rule.nodes.push_back(2.0 * w * std::cos(theta.nodes[i]));
            rule.weights.push_back(theta.weights[i] * 2.0 * w * std::sin(theta.nodes[i]));
        }
        return rule;
    }
    const int panels = std::max({16, static_cast<int>(std::ceil(density * cutoff * max_frequency / 10.0)),
                                 static_cast<int>(std::ceil(density * 4.0 * cutoff / std::min(w, 1.0)))});
    return quad::composite(0.0, cutoff, panels);
}

namespace detail {

std::vector<double> hankel_of_filter(const FilterSpec& spec, std::span<const double> r)
{
    double r_max = 0.0;
    for (double x : r) {
        r_max = std::max(r_max, std::fabs(x));
    }
    const double cutoff = filter_cutoff(spec, 1e-17);
    const quad::Rule rule = radial_rule(spec, cutoff, 2.0 * r_max + 1.0);
    std::vector<double> weight(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        weight[i] = rule.weights[i] * rule.nodes[i] * eval_filter(spec, rule.nodes[i]) * 2.0 / kPi;
    }
    std::vector<double> out(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            sum += weight[i] * special::bessel_j0(2.0 * r[j] * rule.nodes[i]);
        }
        out[j] = sum;
    }
    return out;
}

} // namespace detail

std::vector<double> fourier_of_filter(const FilterSpec& spec, std::span<const double> r)
{
    if (!spec.is_nonclassicality_filter()) {
        throw ValidationError("Fourier transform requested for a non-admissible filter (" + spec.label() + ")");
    }
    return detail::hankel_of_filter(spec, r);
}

double fourier_of_filter(const FilterSpec& spec, double r)
{
    const double rr[1] = {r};
    return fourier_of_filter(spec, rr)[0];
}

} // namespace ncqp
