#include "ncqp/admissibility.hpp"

#include "ncqp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace ncqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Radius beyond which a rigorous envelope gives Omega^2 e^{b^2} <= e^{-b^2};
// nullopt when no such radius exists.
std::optional<double> dominated_tail_start(const FilterSpec& spec)
{
    const double w = spec.width();
    std::function<double(double)> excess; // >= 0 once dominated; increasing beyond `start`
    double start = 0.0;
    switch (spec.family()) {
    case FilterFamily::AutocorrInf:
        return 2.0 * w;
    case FilterFamily::GaussianReference:
        return std::nullopt; // handled in closed form
    case FilterFamily::AnalyticInvertible: {
        const double s = spec.s();
        const double cs = std::pow(spec.c(), s);
        if (s <= 2.0) {
            return std::nullopt;
        }
        // Split point a = (w^s)^{1/(s-2)}; drop C inside the power.
        start = std::pow(w, s / (s - 2.0));
        excess = [=](double b) { return std::pow(b / w, s) - b * b - cs; };
        break;
    }
    case FilterFamily::AutocorrQ: {
        const double q = spec.q();
        if (q <= 2.0) {
            return std::nullopt;
        }
        // Omega <= 2^{4/q} exp(-(u/2)^q) by convexity of |.|^q.
        start = std::pow(std::pow(2.0 * w, q) * q / 4.0, 1.0 / (q - 2.0));
        excess = [=](double b) {
            return 2.0 * std::pow(0.5 * b / w, q) - 2.0 * b * b - 8.0 / q * std::numbers::ln2;
        };
        break;
    }
    }
    double hi = std::max(start, 1e-3);
    while (excess(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e12) {
            return std::nullopt;
        }
    }
    if (excess(std::max(start, 1e-3)) >= 0.0) {
        return std::max(start, 1e-3);
    }
    return quad::bisect(excess, std::max(start, 1e-3), hi, 1e-10);
}

} // namespace

double log_condition1_norm(const FilterSpec& spec)
{
    if (spec.family() == FilterFamily::GaussianReference) {
        const double decay = 1.0 / (spec.width() * spec.width()) - 1.0;
        return decay > 0.0 ? std::log(std::numbers::pi / decay) : kInf;
    }
    const auto tail_start = dominated_tail_start(spec);
    if (!tail_start) {
        return kInf;
    }
    const double r = std::max(*tail_start, 1e-3);
    auto ell = [&](double b) {
        return std::log(2.0 * std::numbers::pi * b) + 2.0 * log_filter(spec, b) + b * b;
    };
    double peak = -kInf;
    const int scan = 4000;
    for (int i = 1; i <= scan; ++i) {
        peak = std::max(peak, ell(r * i / scan));
    }
    const int panels = std::max(64, static_cast<int>(std::ceil(4.0 * r)));
    const quad::Rule rule = spec.family() == FilterFamily::AutocorrInf
        ? radial_rule(spec, r, 1.0)
        : quad::composite(0.0, r, std::min(panels, 20000));
    double body = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double v = ell(rule.nodes[i]);
        if (std::isfinite(v)) {
            body += rule.weights[i] * std::exp(v - peak);
        }
    }
    // Tail: int_r^inf 2 pi b e^{-b^2} db = pi e^{-r^2}.
    const double log_tail = std::log(std::numbers::pi) - r * r;
    return peak + std::log(body + std::exp(log_tail - peak));
}

double askey_min_third_derivative(const FilterSpec& spec, double b_end)
{
    const long double h = 1e-4L * spec.width();
    auto omega = [&](long double b) { return eval_filter_ld(spec, b); };
    double worst = kInf;
    const int n = 6000;
    const long double lo = 2.0L * h;
    for (int i = 0; i <= n; ++i) {
        const long double b = lo + (static_cast<long double>(b_end) - lo) * i / n;
        const long double d3 = (omega(b + 2 * h) - 2 * omega(b + h) + 2 * omega(b - h) - omega(b - 2 * h)) / (2 * h * h * h);
        worst = std::min(worst, static_cast<double>(-d3));
    }
    return worst;
}

AdmissibilityReport certify_filter(const FilterSpec& spec)
{
    AdmissibilityReport report;
    report.filter = spec.to_json();
    const double w = spec.width();
    const bool quadrature_family = spec.family() == FilterFamily::AutocorrQ;

    // C1: square integrability of Omega e^{|beta|^2/2}, probed at w and 2w.
    {
        ConditionCheck c{"C1", true, -kInf, "log of squared L2 norm, widths w and 2w"};
        for (double probe : {w, 2.0 * w}) {
            const double v = log_condition1_norm(spec.with_width(probe));
            c.margin = std::max(c.margin, v);
            c.pass = c.pass && std::isfinite(v);
        }
        report.conditions.push_back(c);
    }

    // C2: nonnegative Fourier transform on a radial grid.
    {
        const int n = 600;
        std::vector<double> r(n);
        for (int i = 0; i < n; ++i) {
            r[i] = 15.0 / w * i / (n - 1);
        }
        const auto f = detail::hankel_of_filter(spec, r);
        const double peak = *std::max_element(f.begin(), f.end());
        const double low = *std::min_element(f.begin(), f.end());
        const double ratio = low / peak;
        report.conditions.push_back({"C2", ratio >= -1e-8, ratio, "min F / max F on r in [0, 15/w]"});
    }

    // C3: Omega(0) = 1; real by construction.
    {
        const double dev = std::fabs(eval_filter(spec, 0.0) - 1.0);
        const double tol = quadrature_family ? 1e-6 : 1e-9;
        report.conditions.push_back({"C3", dev <= tol, dev, "|Omega(0) - 1|"});
    }

    // C4: Omega_W(b) -> 1 as W grows, on b in [0, 5].
    {
        double prev = kInf;
        bool monotone = true;
        double last = 0.0;
        for (int k = 0; k <= 6; ++k) {
            const FilterSpec wide = spec.with_width(w * std::pow(10.0, k));
            double sup = 0.0;
            for (int i = 0; i <= 200; ++i) {
                sup = std::max(sup, std::fabs(eval_filter(wide, 5.0 * i / 200.0) - 1.0));
            }
            monotone = monotone && sup <= prev + 1e-12;
            prev = sup;
            last = sup;
        }
        report.conditions.push_back({"C4", monotone && last < 1e-3, last,
                                     "sup |Omega_W - 1| on b in [0,5] at W = 1e6 w"});
    }

    // C5: Omega never vanishes (checked in log space on b in [0, 20 w]).
    {
        double low = kInf;
        for (int i = 0; i <= 2000; ++i) {
            low = std::min(low, log_filter(spec, 20.0 * w * i / 2000.0));
        }
        report.conditions.push_back({"C5", std::isfinite(low), low, "min log Omega on b in [0, 20w]"});
    }

    report.conditions.push_back({"C6", true, 0.0, "radial by construction"});

    if (spec.family() == FilterFamily::AnalyticInvertible) {
        const double m = askey_min_third_derivative(spec, 10.0 * w);
        report.askey = ConditionCheck{"askey", m >= -1e-6, m, "min of -d^3 Omega/db^3 on [2h, 10w]"};
    }
    return report;
}

nlohmann::json AdmissibilityReport::to_json() const
{
    nlohmann::json j;
    j["filter"] = filter;
    auto entry = [](const ConditionCheck& c) {
        nlohmann::json e;
        e["pass"] = c.pass;
        e["margin"] = std::isfinite(c.margin) ? nlohmann::json(c.margin) : nlohmann::json(c.margin > 0 ? "inf" : "-inf");
        e["detail"] = c.detail;
        return e;
    };
    for (const auto& c : conditions) {
        j["conditions"][c.name] = entry(c);
    }
    if (askey) {
        j["conditions"]["askey"] = entry(*askey);
    }
    return j;
}

} // namespace ncqp
