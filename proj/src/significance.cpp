#include "ncqp/significance.hpp"

#include "ncqp/errors.hpp"
#include "ncqp/io.hpp"
#include "ncqp/parallel.hpp"
#include "ncqp/quasiprob.hpp"
#include "ncqp/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <fstream>
#include <mutex>
#include <numbers>

namespace ncqp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

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

// K(s) = pi^-2 int |b| |s-b| e^{-b(s-b)} Omega(|b|) Omega(|s-b|) db.
double kernel_at(const FilterSpec& spec, double s, double b_cut)
{
    const double lo = s - b_cut;
    const double hi = b_cut;
    if (lo >= hi) {
        return 0.0;
    }
    std::vector<double> breaks{lo};
    for (double p : {0.0, s}) {
        if (p > lo && p < hi && p > breaks.back()) {
            breaks.push_back(p);
        }
    }
    breaks.push_back(hi);
    const double scale = 0.2 * std::min(spec.width(), 1.0);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k];
        const double b = breaks[k + 1];
        const int panels = 2 + static_cast<int>(std::ceil((b - a) / scale));
        const auto rule = quad::composite(a, b, panels);
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double x = rule.nodes[i];
            const double e = log_filter(spec, std::fabs(x)) + log_filter(spec, std::fabs(s - x)) - x * (s - x);
            if (std::isfinite(e)) {
                total += rule.weights[i] * std::fabs(x) * std::fabs(s - x) * std::exp(e);
            }
        }
    }
    return total / (kPi * kPi);
}

double sum_j0(const std::vector<double>& nodes, const std::vector<double>& weights, double r)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        sum += weights[i] * special::bessel_j0(2.0 * r * nodes[i]);
    }
    return sum;
}

std::shared_ptr<const MomentEngine> cached_engine(const FilterSpec& spec, double r_max)
{
    static std::mutex mutex;
    static std::map<std::string, std::shared_ptr<const MomentEngine>> cache;
    const std::string key = spec.to_json().dump() + "|" + io::format_double(r_max);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            return it->second;
        }
    }
    auto engine = std::make_shared<const MomentEngine>(spec, r_max);
    std::lock_guard lock(mutex);
    if (cache.size() > 4096) {
        cache.clear();
    }
    cache.emplace(key, engine);
    return engine;
}

} // namespace

MomentEngine::MomentEngine(const FilterSpec& spec, double r_max)
    : spec_(spec)
    , r_max_(r_max)
{
    if (!spec.is_nonclassicality_filter()) {
        throw ValidationError("single-sample moments need a nonclassicality filter");
    }
    const PatternSupport support = pattern_support(spec);
    log_peak_ = support.log_peak;
    b_cut_ = support.cutoff;
    const double w = spec.width();
    const double s_max = 2.0 * b_cut_;
    std::vector<double> breaks{0.0};
    if (spec.family() == FilterFamily::AutocorrInf) {
        breaks.push_back(2.0 * w);
    }
    breaks.push_back(s_max);
    const double freq = 2.0 * r_max + 16.0;
    const int panels = std::max(8, static_cast<int>(std::ceil((s_max / (breaks.size() - 1)) * freq / 8.0)));
    const auto rule = quad::composite(breaks, panels);
    s_nodes_ = rule.nodes;
    s_weights_ = rule.weights;
    kernel_.resize(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        kernel_[i] = kernel_at(spec, s_nodes_[i], b_cut_);
    }
}

MomentEngine::StateMoments MomentEngine::prepare(const StateModel& state) const
{
    if (!state.is_radial()) {
        throw ValidationError("spectral moments need a phase-insensitive state");
    }
    StateMoments sm;
    const double cutoff = cf_filter_cutoff(state, spec_);
    auto fill = [&](double density, std::vector<double>& nodes, std::vector<double>& weights) {
        const quad::Rule rule = radial_rule(spec_, cutoff, 2.0 * r_max_ + state_frequency(state), density);
        nodes = rule.nodes;
        weights.resize(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double b = rule.nodes[i];
            weights[i] = 2.0 / kPi * rule.weights[i] * b * cf_radial_scaled(state, b, log_filter(spec_, b));
        }
    };
    fill(1.0, sm.m_nodes, sm.m_weights);
    fill(0.6, sm.m_nodes_coarse, sm.m_weights_coarse);
    sm.s_nodes = s_nodes_;
    sm.s_weights.resize(s_nodes_.size());
    for (std::size_t i = 0; i < s_nodes_.size(); ++i) {
        const double k = kernel_[i];
        // Phi(s) K(s): Phi may grow, K decays faster (Condition 1), so scale through logs.
        sm.s_weights[i] = k > 0.0 ? 2.0 * s_weights_[i] * cf_radial_scaled(state, s_nodes_[i], std::log(k)) : 0.0;
    }
    return sm;
}

Moments MomentEngine::StateMoments::at(double r) const
{
    Moments m;
    m.m1 = sum_j0(m_nodes, m_weights, r);
    m.m1_error = std::fabs(m.m1 - sum_j0(m_nodes_coarse, m_weights_coarse, r));
    const double second = sum_j0(s_nodes, s_weights, r);
    // The second moment can exceed the double range for very wide filters.
    m.v1 = std::isfinite(second) ? std::max(0.0, second - m.m1 * m.m1) : kInf;
    return m;
}

Moments single_sample_moments(const StateModel& state, const FilterSpec& spec, std::complex<double> alpha)
{
    const double r = std::abs(alpha);
    const MomentEngine engine(spec, std::max(r, 1.0));
    return engine.prepare(state).at(r);
}

Moments single_sample_moments_direct(const StateModel& state, const FilterSpec& spec, std::complex<double> alpha)
{
    const double r = std::abs(alpha);
    double var_max = 0.0;
    for (double phi : {0.0, 0.5 * kPi, 0.25 * kPi, 0.75 * kPi}) {
        var_max = std::max(var_max, quadrature_variance(state, phi));
    }
    const double x_max = 9.0 * std::sqrt(var_max) + 3.0;
    const PatternTable table(spec, x_max + 2.0 * r + 5.0);
    const double b_cut = table.b_cut();
    const auto x_rule = quad::composite(-x_max, x_max, static_cast<int>(std::ceil(x_max * b_cut)) + 8);
    const auto phi_rule = quad::composite(0.0, kPi, r > 0.0 ? static_cast<int>(std::ceil(r * b_cut)) + 4 : 1);
    std::vector<double> density(x_rule.size());
    auto fill_density = [&](double phi) {
        for (std::size_t i = 0; i < x_rule.size(); ++i) {
            density[i] = x_rule.weights[i] * quadrature_pdf_mixture(state, x_rule.nodes[i], phi);
        }
    };
    if (state.is_radial()) {
        fill_density(0.0);
    }
    double first = 0.0;
    double second = 0.0;
    for (std::size_t a = 0; a < phi_rule.size(); ++a) {
        const double phi = phi_rule.nodes[a];
        if (!state.is_radial()) {
            fill_density(phi);
        }
        double f1 = 0.0;
        double f2 = 0.0;
        for (std::size_t i = 0; i < x_rule.size(); ++i) {
            const QuadratureRecord rec{x_rule.nodes[i], phi};
            const double f = table(pattern_argument(rec, alpha));
            const double p = density[i];
            f1 += p * f;
            f2 += p * f * f;
        }
        first += phi_rule.weights[a] * f1;
        second += phi_rule.weights[a] * f2;
    }
    Moments m;
    m.m1 = first / kPi;
    m.v1 = std::max(0.0, second / kPi - m.m1 * m.m1);
    return m;
}

SignificanceResult significance(const QuadratureDataset& data, std::span<const PatternTable> tables,
                                std::span<const std::complex<double>> alphas)
{
    if (data.size() < 2) {
        throw ValidationError("significance needs at least two records");
    }
    SignificanceResult result;
    double best = -kInf;
    for (const auto& table : tables) {
        for (const auto& alpha : alphas) {
            const QpEstimate e = estimate_qp(data, table, alpha);
            if (e.value < 0.0 && e.sigma == 0.0) {
                result.infinite = true;
                result.value = kInf;
                result.best = e;
                return result;
            }
            const double ratio = -e.value / e.sigma;
            if (ratio > best) {
                best = ratio;
                result.best = e;
            }
        }
    }
    result.value = std::max(0.0, best);
    return result;
}

ScanSpec ScanSpec::defaults()
{
    ScanSpec s;
    for (int i = 0; i <= 60; ++i) {
        s.alphas.push_back(0.05 * i);
    }
    for (int i = 0; i < 40; ++i) {
        s.widths.push_back(0.6 * std::pow(3.0 / 0.6, i / 39.0));
    }
    return s;
}

namespace {

double n_from(const Moments& m, double target)
{
    // Exclude points whose negativity is within numerical noise.
    if (!(m.m1 < 0.0) || std::fabs(m.m1) <= 10.0 * m.m1_error || !std::isfinite(m.v1)) {
        return kInf;
    }
    return target * target * m.v1 / (m.m1 * m.m1);
}

bool usable_width(const FilterSpec& spec)
{
    try {
        return pattern_support(spec).log_peak <= 650.0;
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace

RequiredN required_n_at(const StateModel& state, const FilterSpec& spec, double alpha, double target)
{
    const Moments m = single_sample_moments(state, spec, alpha);
    RequiredN out;
    out.eta = state.eta();
    out.filter = spec.label();
    out.alpha_star = alpha;
    out.w_star = spec.width();
    out.m1 = m.m1;
    out.v1 = m.v1;
    const double n = n_from(m, target);
    out.certified = std::isfinite(n);
    out.n_required = out.certified ? std::ceil(n) : kInf;
    return out;
}

std::vector<RequiredN> required_n(const StateModel& state, const FilterSpec& family, std::span<const double> etas,
                                  const ScanSpec& scan)
{
    if (scan.alphas.empty() || scan.widths.empty() || !(scan.target > 0.0)) {
        throw ValidationError("scan grids must be nonempty and the target positive");
    }
    if (!state.is_radial()) {
        throw ValidationError("required-N scans need a phase-insensitive state");
    }
    const double r_max = *std::max_element(scan.alphas.begin(), scan.alphas.end());
    const std::size_t nw = scan.widths.size();
    std::vector<std::shared_ptr<const MomentEngine>> engines(nw);
    parallel_for(nw, [&](std::size_t i) {
        const FilterSpec spec = family.with_width(scan.widths[i]);
        if (usable_width(spec)) {
            engines[i] = cached_engine(spec, r_max);
        }
    });
    std::vector<RequiredN> out(etas.size());
    parallel_for(etas.size(), [&](std::size_t e) {
        const StateModel s = state.with_eta(etas[e]);
        RequiredN best;
        best.eta = etas[e];
        best.filter = family.label();
        best.n_required = kInf;
        std::size_t best_w = 0;
        std::size_t best_a = 0;
        for (std::size_t i = 0; i < nw; ++i) {
            if (!engines[i]) {
                continue;
            }
            const auto sm = engines[i]->prepare(s);
            for (std::size_t j = 0; j < scan.alphas.size(); ++j) {
                const Moments m = sm.at(scan.alphas[j]);
                const double n = n_from(m, scan.target);
                // Strict improvement keeps the smallest w, then the smallest |alpha|, on ties.
                if (n < best.n_required) {
                    best.n_required = n;
                    best.alpha_star = scan.alphas[j];
                    best.w_star = scan.widths[i];
                    best.m1 = m.m1;
                    best.v1 = m.v1;
                    best_w = i;
                    best_a = j;
                }
            }
        }
        if (!std::isfinite(best.n_required)) {
            out[e] = best;
            return;
        }
        if (scan.refine) {
            auto objective = [&](double w, double a) {
                const FilterSpec spec = family.with_width(w);
                if (!usable_width(spec)) {
                    return kInf;
                }
                const MomentEngine engine(spec, std::max(r_max, a));
                const Moments m = engine.prepare(s).at(a);
                return n_from(m, scan.target);
            };
            auto log_or_big = [](double n) { return std::isfinite(n) ? std::log(n) : 1e300; };
            // A refined coordinate replaces the grid value only on a clear improvement,
            // so optima sitting on grid points (alpha = 0 by symmetry) stay exact.
            auto accept = [&](double w, double a) {
                const double n = objective(w, a);
                if (n < best.n_required * (1.0 - 1e-6)) {
                    const FilterSpec spec = family.with_width(w);
                    const Moments m = MomentEngine(spec, std::max(r_max, a)).prepare(s).at(a);
                    best.n_required = n;
                    best.w_star = w;
                    best.alpha_star = a;
                    best.m1 = m.m1;
                    best.v1 = m.v1;
                }
            };
            const double w_lo = scan.widths[best_w == 0 ? 0 : best_w - 1];
            const double w_hi = scan.widths[std::min(best_w + 1, nw - 1)];
            const double a_lo = scan.alphas[best_a == 0 ? 0 : best_a - 1];
            const double a_hi = scan.alphas[std::min(best_a + 1, scan.alphas.size() - 1)];
            if (w_hi > w_lo) {
                const double a = best.alpha_star;
                accept(quad::golden_minimize([&](double x) { return log_or_big(objective(x, a)); }, w_lo, w_hi, 1e-4), a);
            }
            if (a_hi > a_lo) {
                const double w = best.w_star;
                accept(w, quad::golden_minimize([&](double x) { return log_or_big(objective(w, x)); }, a_lo, a_hi, 1e-4));
            }
        }
        best.certified = true;
        best.n_required = std::ceil(best.n_required);
        // alpha = 0 is the symmetry centre, not an edge; single-point axes are fixed by choice.
        best.boundary_hit = (nw > 1 && (best_w == 0 || best_w + 1 == nw))
            || (scan.alphas.size() > 1 && best_a + 1 == scan.alphas.size());
        out[e] = best;
    });
    return out;
}

Moments cf_moments(const StateModel& state, double b)
{
    if (!state.is_radial()) {
        throw ValidationError("CF criterion needs a phase-insensitive state");
    }
    const double phi_b = cf_radial_scaled(state, b);
    Moments m;
    m.m1 = 1.0 - phi_b;
    // e^{b^2} (1 + Phi(2b) e^{-2b^2}) / 2 - Phi(b)^2
    m.v1 = 0.5 * std::exp(b * b) + 0.5 * cf_radial_scaled(state, 2.0 * b, -b * b) - phi_b * phi_b;
    m.v1 = std::max(0.0, m.v1);
    return m;
}

std::vector<RequiredN> required_n_cf(const StateModel& state, std::span<const double> etas, double target)
{
    std::vector<RequiredN> out;
    for (double eta : etas) {
        const StateModel s = state.with_eta(eta);
        RequiredN best;
        best.eta = eta;
        best.filter = "cf";
        best.n_required = kInf;
        auto n_at = [&](double b) {
            const Moments m = cf_moments(s, b);
            return m.m1 < 0.0 ? target * target * m.v1 / (m.m1 * m.m1) : kInf;
        };
        const double b_end = 30.0;
        const int grid = 6000;
        int best_i = -1;
        for (int i = 1; i <= grid; ++i) {
            const double b = b_end * i / grid;
            const double n = n_at(b);
            if (n < best.n_required) {
                best.n_required = n;
                best_i = i;
            }
        }
        if (best_i > 0) {
            const double lo = b_end * (best_i - 1) / grid;
            const double hi = b_end * std::min(best_i + 1, grid) / grid;
            const double b = quad::golden_minimize(
                [&](double x) {
                    const double n = n_at(x);
                    return std::isfinite(n) ? std::log(n) : 1e300;
                },
                lo, hi, 1e-10);
            const double n = n_at(b);
            const double b_star = n < best.n_required ? b : b_end * best_i / grid;
            const Moments m = cf_moments(s, b_star);
            best.certified = true;
            best.alpha_star = b_star; // the CF argument |beta|
            best.w_star = 0.0;
            best.m1 = m.m1;
            best.v1 = m.v1;
            best.n_required = std::ceil(std::min(n, best.n_required));
            best.boundary_hit = best_i == grid;
        }
        out.push_back(best);
    }
    return out;
}

void write_curve_csv(const std::filesystem::path& path, const std::vector<RequiredN>& rows)
{
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot open output file " + path.string());
    }
    out << "eta,q_or_filter,alpha_star,w_star,m1,v1,n_required\n";
    for (const auto& r : rows) {
        out << io::format_double(r.eta) << ',' << r.filter << ',' << io::format_double(r.alpha_star) << ','
            << io::format_double(r.w_star) << ',' << io::format_double(r.m1) << ',' << io::format_double(r.v1) << ','
            << (r.certified ? io::format_double(r.n_required) : std::string("inf")) << '\n';
    }
}

} // namespace ncqp
