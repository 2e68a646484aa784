#include "ncqp/quasiprob.hpp"

#include "ncqp/errors.hpp"
#include "ncqp/io.hpp"
#include "ncqp/parallel.hpp"
#include "ncqp/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ncqp {

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::json describe(const StateModel& state, const FilterSpec& spec)
{
    return {{"state", state.to_json()}, {"filter", spec.to_json()}};
}

// Extra b-resolution needed by the characteristic function itself.
double state_frequency(const StateModel& state)
{
    switch (state.kind()) {
    case StateKind::NoisyFock:
    case StateKind::NPats:
        return 4.0 + 2.0 * state.n();
    case StateKind::HeraldedArray:
        return 4.0 + state.clicks();
    default:
        return 4.0;
    }
}

// Weights of the radial Hankel sum, so that P(r) = sum_i weight_i J0(2 r b_i).
struct HankelSum {
    std::vector<double> nodes;
    std::vector<double> weights;

    double operator()(double r) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            sum += weights[i] * special::bessel_j0(2.0 * r * nodes[i]);
        }
        return sum;
    }
};

HankelSum hankel_sum(const StateModel& state, const FilterSpec& spec, double cutoff, double r_max, double density)
{
    const quad::Rule rule = radial_rule(spec, cutoff, 2.0 * r_max + state_frequency(state), density);
    HankelSum h;
    h.nodes = rule.nodes;
    h.weights.resize(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double b = rule.nodes[i];
        h.weights[i] = 2.0 / kPi * rule.weights[i] * b * cf_radial_scaled(state, b, log_filter(spec, b));
    }
    return h;
}

void require_radial(const StateModel& state)
{
    if (!state.is_radial()) {
        throw ValidationError("state " + state.label() + " is phase sensitive; use the 2D route (qp grid)");
    }
}

void finish(QpGrid& g)
{
    g.truncation_error = 0.0;
    for (double e : g.errors) {
        g.truncation_error = std::max(g.truncation_error, e);
    }
    g.metadata["truncation_error"] = g.truncation_error;
}

} // namespace

double cf_times_filter(const StateModel& state, const FilterSpec& spec, std::complex<double> beta)
{
    const double b = std::abs(beta);
    const double log_omega = log_filter(spec, b);
    if (state.kind() == StateKind::SqueezedVac) {
        const double re = beta.real();
        const double im = beta.imag();
        return std::exp(log_omega - 0.5 * state.eta() * ((state.vx() - 1.0) * im * im + (state.vp() - 1.0) * re * re));
    }
    return cf_radial_scaled(state, b, log_omega);
}

double cf_filter_cutoff(const StateModel& state, const FilterSpec& spec)
{
    require_radial(state);
    const double w = spec.width();
    if (spec.family() == FilterFamily::AutocorrInf) {
        return 2.0 * w;
    }
    const double step = 0.005 * std::max(w, 0.5);
    double peak = 0.0;
    double last_significant = 0.0;
    for (double b = step;; b += std::max(step, 1e-3 * b)) {
        const double v = std::fabs(b * cf_radial_scaled(state, b, log_filter(spec, b)));
        peak = std::max(peak, v);
        if (v >= 1e-18 * peak) {
            last_significant = b;
        } else if (log_filter(spec, b) < -100.0 && b > 1.5 * last_significant) {
            return last_significant;
        }
        if (b > 1e4 * std::max(w, 1.0)) {
            throw NumericalError("Phi Omega does not decay for " + state.label() + " with " + spec.label());
        }
    }
}

double filtered_p_radial(const StateModel& state, const FilterSpec& spec, double r)
{
    const double radii[1] = {r};
    return filtered_p_radial(state, spec, radii).values[0];
}

QpGrid filtered_p_radial(const StateModel& state, const FilterSpec& spec, std::span<const double> radii)
{
    require_radial(state);
    const double cutoff = cf_filter_cutoff(state, spec);
    double r_max = 0.0;
    for (double r : radii) {
        r_max = std::max(r_max, std::fabs(r));
    }
    const HankelSum fine = hankel_sum(state, spec, cutoff, r_max, 1.0);
    const HankelSum coarse = hankel_sum(state, spec, cutoff, r_max, 0.6);
    QpGrid g;
    g.width = spec.width();
    g.alpha.resize(radii.size());
    g.values.resize(radii.size());
    g.errors.resize(radii.size());
    parallel_for(radii.size(), [&](std::size_t i) {
        g.alpha[i] = radii[i];
        g.values[i] = fine(radii[i]);
        g.errors[i] = std::fabs(g.values[i] - coarse(radii[i]));
    });
    g.metadata = describe(state, spec);
    g.metadata["route"] = "radial";
    g.metadata["cf_cutoff"] = cutoff;
    finish(g);
    return g;
}

double cf_box_radius(const StateModel& state, const FilterSpec& spec, double decay, double search_limit)
{
    const int angles = 64;
    auto ring_max = [&](double rho) {
        double m = 0.0;
        for (int k = 0; k < angles; ++k) {
            const double t = 0.5 * kPi * (k + 0.5) / angles; // one quadrant suffices (symmetric CFs)
            m = std::max(m, std::fabs(cf_times_filter(state, spec, std::polar(rho, t))));
        }
        return std::max({m, std::fabs(cf_times_filter(state, spec, {rho, 0.0})),
                         std::fabs(cf_times_filter(state, spec, {0.0, rho}))});
    };
    const double step = 0.01 * std::max(spec.width(), 0.5);
    double peak = ring_max(0.0);
    double last = 0.0;
    for (double rho = step; rho <= search_limit; rho += std::max(step, 1e-3 * rho)) {
        const double v = ring_max(rho);
        peak = std::max(peak, v);
        if (v >= decay * peak) {
            last = rho;
        } else if (log_filter(spec, rho) < -200.0 && rho > 1.2 * last) {
            return last + step;
        }
    }
    throw NumericalError("CF box overflow: Phi Omega has not decayed to " + io::format_double(decay)
                         + " of its peak by B = " + io::format_double(search_limit)
                         + "; required B > " + io::format_double(last));
}

QpGrid filtered_p_2d(const StateModel& state, const FilterSpec& spec, std::span<const double> re,
                     std::span<const double> im, const Grid2dOptions& options)
{
    if (options.nodes < 16 || options.nodes % 4 != 0) {
        throw ValidationError("2D grid node count must be a multiple of 4 and >= 16");
    }
    double box;
    try {
        box = cf_box_radius(state, spec, options.decay, options.box_limit);
    } catch (const NumericalError&) {
        // Report the radius actually needed.
        double needed = options.box_limit;
        try {
            needed = cf_box_radius(state, spec, options.decay, 1e4);
        } catch (const NumericalError&) {
        }
        throw NumericalError("CF box overflow: Phi Omega needs B = " + io::format_double(needed)
                             + " > limit " + io::format_double(options.box_limit));
    }
    const int n = options.nodes;
    const int count = n + 1;
    const double h = 2.0 * box / n;
    double alpha_max = 0.0;
    for (double a : re) {
        alpha_max = std::max(alpha_max, std::fabs(a));
    }
    for (double a : im) {
        alpha_max = std::max(alpha_max, std::fabs(a));
    }
    // Coarse (stride-2) rule aliases with period pi / (2h); keep the output well inside.
    if (kPi / (2.0 * h) < 2.0 * alpha_max + 10.0) {
        throw NumericalError("2D grid too coarse for the requested alpha range; increase nodes");
    }
    std::vector<double> beta(count);
    for (int k = 0; k < count; ++k) {
        beta[k] = (k - n / 2) * h;
    }
    // G[a * count + c] = (Phi Omega)(beta_a + i beta_c)
    std::vector<double> g(static_cast<std::size_t>(count) * count);
    parallel_for(count, [&](std::size_t a) {
        for (int c = 0; c < count; ++c) {
            g[a * count + c] = cf_times_filter(state, spec, {beta[a], beta[c]});
        }
    });
    const std::size_t nre = re.size();
    const std::size_t nim = im.size();
    QpGrid out;
    out.width = spec.width();
    out.alpha.resize(nre * nim);
    out.values.resize(nre * nim);
    out.errors.resize(nre * nim);
    // P(alpha) = pi^-2 int d^2 beta exp(2 i (alpha_i beta_r - alpha_r beta_i)) G(beta)
    parallel_for(nre, [&](std::size_t ir) {
        std::vector<double> cos_c(count), sin_c(count);
        for (int c = 0; c < count; ++c) {
            cos_c[c] = std::cos(2.0 * re[ir] * beta[c]);
            sin_c[c] = std::sin(2.0 * re[ir] * beta[c]);
        }
        std::vector<double> hr(count), hi(count), hr2(count), hi2(count);
        for (int a = 0; a < count; ++a) {
            const double* row = &g[static_cast<std::size_t>(a) * count];
            double sr = 0.0, si = 0.0, sr2 = 0.0, si2 = 0.0;
            for (int c = 0; c < count; ++c) {
                const double vr = row[c] * cos_c[c];
                const double vi = -row[c] * sin_c[c];
                sr += vr;
                si += vi;
                if (c % 2 == 0) {
                    sr2 += vr;
                    si2 += vi;
                }
            }
            hr[a] = sr;
            hi[a] = si;
            hr2[a] = sr2;
            hi2[a] = si2;
        }
        for (std::size_t ii = 0; ii < nim; ++ii) {
            double fine = 0.0, coarse = 0.0;
            for (int a = 0; a < count; ++a) {
                const double ca = std::cos(2.0 * im[ii] * beta[a]);
                const double sa = std::sin(2.0 * im[ii] * beta[a]);
                const double v = ca * hr[a] - sa * hi[a];
                fine += v;
                if (a % 2 == 0) {
                    coarse += ca * hr2[a] - sa * hi2[a];
                }
            }
            fine *= h * h / (kPi * kPi);
            coarse *= 4.0 * h * h / (kPi * kPi);
            const std::size_t idx = ir * nim + ii;
            out.alpha[idx] = {re[ir], im[ii]};
            out.values[idx] = fine;
            out.errors[idx] = std::fabs(fine - coarse);
        }
    });
    out.metadata = describe(state, spec);
    out.metadata["route"] = "2d";
    out.metadata["box"] = box;
    out.metadata["nodes"] = n;
    finish(out);
    return out;
}

namespace {

struct FilterTransformTable {
    quad::UniformSpline spline;
    double r_max;

    double operator()(double r) const { return r <= r_max ? spline(r) : 0.0; }
};

FilterTransformTable transform_table(const FilterSpec& spec, double r_max)
{
    const double dr = 0.005;
    const int n = static_cast<int>(std::ceil(r_max / dr)) + 1;
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
        r[i] = i * dr;
    }
    return {quad::UniformSpline(0.0, dr, fourier_of_filter(spec, r)), (n - 1) * dr};
}

double heralded_extent(const GaussianSum& p)
{
    double total = 0.0;
    double slowest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p.amplitude.size(); ++j) {
        total += std::fabs(p.amplitude[j]);
        slowest = std::min(slowest, p.decay[j]);
    }
    return std::sqrt(std::log(total / 1e-14) / slowest);
}

} // namespace

std::vector<TwoModePoint> two_mode_re_slice(double extent, int count)
{
    if (count < 2) {
        throw ValidationError("slice needs at least two points per axis");
    }
    std::vector<TwoModePoint> pts;
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < count; ++j) {
            const double x = -extent + 2.0 * extent * i / (count - 1);
            const double y = -extent + 2.0 * extent * j / (count - 1);
            pts.push_back({{x, 0.0}, {y, 0.0}});
        }
    }
    return pts;
}

TwoModeGrid two_mode_filtered_p(const TwoModeConfig& cfg, const FilterSpec& spec, std::span<const TwoModePoint> points)
{
    if (!spec.is_nonclassicality_filter()) {
        throw ValidationError("two-mode quasiprobability requires a nonclassicality filter");
    }
    const auto p = heralded_terms(cfg.source);
    const double g_max = heralded_extent(p);
    double a_max = 0.0;
    for (const auto& pt : points) {
        a_max = std::max({a_max, std::abs(pt.a1), std::abs(pt.a2)});
    }
    const auto f = transform_table(spec, a_max + g_max + 1.0);
    const double t1 = std::sqrt(cfg.eta_l);
    const double t2 = std::sqrt(1.0 - cfg.eta_l);

    struct PolarRule {
        std::vector<double> radius, weight; // includes 2 pi g P(g) / angles
        int angles;
    };
    auto make_rule = [&](int panels, int angles) {
        PolarRule rule{{}, {}, angles};
        const auto radial = quad::composite(0.0, g_max, panels);
        for (std::size_t i = 0; i < radial.size(); ++i) {
            const double g = radial.nodes[i];
            double pg = 0.0;
            for (std::size_t j = 0; j < p.amplitude.size(); ++j) {
                pg += p.amplitude[j] * std::exp(-p.decay[j] * g * g);
            }
            rule.radius.push_back(g);
            rule.weight.push_back(radial.weights[i] * g * pg * 2.0 * kPi / angles);
        }
        return rule;
    };
    const PolarRule fine = make_rule(12, 192);
    const PolarRule coarse = make_rule(8, 128);
    auto evaluate = [&](const PolarRule& rule, const TwoModePoint& pt) {
        double sum = 0.0;
        for (int k = 0; k < rule.angles; ++k) {
            const std::complex<double> u = std::polar(1.0, 2.0 * kPi * k / rule.angles);
            for (std::size_t i = 0; i < rule.radius.size(); ++i) {
                const std::complex<double> gamma = rule.radius[i] * u;
                sum += rule.weight[i] * f(std::abs(pt.a1 - t1 * gamma)) * f(std::abs(pt.a2 + t2 * gamma));
            }
        }
        return sum;
    };
    TwoModeGrid out;
    out.width = spec.width();
    out.points.assign(points.begin(), points.end());
    out.values.resize(points.size());
    out.errors.resize(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        out.values[i] = evaluate(fine, points[i]);
        out.errors[i] = std::fabs(out.values[i] - evaluate(coarse, points[i]));
    });
    out.truncation_error = *std::max_element(out.errors.begin(), out.errors.end());
    out.metadata = {{"state", cfg.source.to_json()}, {"filter", spec.to_json()}, {"eta_L", cfg.eta_l},
                    {"slice", "Re a1 x Re a2"}, {"truncation_error", out.truncation_error}};
    return out;
}

double two_mode_total_mass(const TwoModeConfig& cfg, const FilterSpec& spec, double radius)
{
    const auto p = heralded_terms(cfg.source);
    const double g_max = heralded_extent(p);
    // Mass of F inside a disk of radius R whose centre is offset by c:
    // M_R(c) = 2R int db Omega(b) J1(2Rb) J0(2cb).
    const double cutoff = filter_cutoff(spec, 1e-17);
    const quad::Rule b_rule = radial_rule(spec, cutoff, 2.0 * radius + 2.0 * g_max + 4.0, 2.0);
    auto disk_mass = [&](double c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < b_rule.size(); ++i) {
            const double b = b_rule.nodes[i];
            sum += b_rule.weights[i] * eval_filter(spec, b) * special::bessel_j1(2.0 * radius * b)
                * special::bessel_j0(2.0 * c * b);
        }
        return 2.0 * radius * sum;
    };
    const auto g_rule = quad::composite(0.0, g_max, 12);
    double total = 0.0;
    for (std::size_t i = 0; i < g_rule.size(); ++i) {
        const double g = g_rule.nodes[i];
        double pg = 0.0;
        for (std::size_t j = 0; j < p.amplitude.size(); ++j) {
            pg += p.amplitude[j] * std::exp(-p.decay[j] * g * g);
        }
        total += g_rule.weights[i] * 2.0 * kPi * g * pg * disk_mass(std::sqrt(cfg.eta_l) * g)
            * disk_mass(std::sqrt(1.0 - cfg.eta_l) * g);
    }
    return total;
}

void write_qp_csv(const std::filesystem::path& path, const QpGrid& grid)
{
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        rows.push_back({grid.alpha[i].real(), grid.alpha[i].imag(), grid.width, grid.values[i]});
    }
    io::write_csv(path, {"alpha_re", "alpha_im", "w", "p"}, rows);
    auto side = path;
    side.replace_extension(".json");
    io::write_json(side, grid.metadata);
}

void write_two_mode_csv(const std::filesystem::path& path, const TwoModeGrid& grid)
{
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        const auto& pt = grid.points[i];
        rows.push_back({pt.a1.real(), pt.a1.imag(), pt.a2.real(), pt.a2.imag(), grid.width, grid.values[i]});
    }
    io::write_csv(path, {"a1_re", "a1_im", "a2_re", "a2_im", "w", "p"}, rows);
    auto side = path;
    side.replace_extension(".json");
    io::write_json(side, grid.metadata);
}

} // namespace ncqp
