#pragma once

#include "ncqp/dataset.hpp"
#include "ncqp/filters.hpp"
#include "ncqp/homodyne.hpp"
#include "ncqp/states.hpp"

#include <complex>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ncqp {

struct SignificanceResult {
    double value = 0.0;    ///< [max(-P/sigma)]_+ over the grid
    bool infinite = false; ///< some negative estimate had sigma = 0
    std::optional<QpEstimate> best;
};

/// S = [max over tables x alphas of -P/sigma]_+. Needs N >= 2.
SignificanceResult significance(const QuadratureDataset& data, std::span<const PatternTable> tables,
                                std::span<const std::complex<double>> alphas);

struct Moments {
    double m1 = 0.0;       ///< E f = P_Omega(alpha; w)
    double v1 = 0.0;       ///< E f^2 - m1^2
    double m1_error = 0.0; ///< node-density difference of m1
};

/// State-independent part of the single-sample second moment for one filter
/// and width. With g(b) = |b| e^{b^2/2} Omega(|b|) / pi it stores
/// K(s) = e^{-s^2/2} int g(b) g(s-b) db, so that for phase-insensitive states
/// E f^2 (r) = 2 int_0^inf K(s) Phi(s) J0(2 r s) ds.
class MomentEngine {
public:
    MomentEngine(const FilterSpec& spec, double r_max);

    [[nodiscard]] const FilterSpec& spec() const { return spec_; }
    [[nodiscard]] double r_max() const { return r_max_; }
    [[nodiscard]] double log_pattern_peak() const { return log_peak_; }
    [[nodiscard]] const std::vector<double>& s_nodes() const { return s_nodes_; }
    [[nodiscard]] const std::vector<double>& kernel() const { return kernel_; }

    /// Moments at radius r <= r_max for a phase-insensitive state.
    class StateMoments {
    public:
        [[nodiscard]] Moments at(double r) const;

    private:
        friend class MomentEngine;
        std::vector<double> m_nodes, m_weights, m_nodes_coarse, m_weights_coarse;
        std::vector<double> s_nodes, s_weights;
    };
    [[nodiscard]] StateMoments prepare(const StateModel& state) const;

private:
    FilterSpec spec_;
    double r_max_;
    double log_peak_;
    double b_cut_;
    std::vector<double> s_nodes_;
    std::vector<double> s_weights_;
    std::vector<double> kernel_;
};

/// Moments through the spectral route (phase-insensitive states).
Moments single_sample_moments(const StateModel& state, const FilterSpec& spec, std::complex<double> alpha);
/// Same moments by direct (phi, x) quadrature of the pattern table against quadrature_pdf.
Moments single_sample_moments_direct(const StateModel& state, const FilterSpec& spec, std::complex<double> alpha);

struct ScanSpec {
    std::vector<double> alphas;  ///< |alpha| grid
    std::vector<double> widths;  ///< w grid
    double target = 5.0;
    bool refine = true;
    /// |alpha| in [0, 3] step 0.05, w log-spaced on [0.6, 3.0] with 40 points.
    static ScanSpec defaults();
};

struct RequiredN {
    double eta = 0.0;
    std::string filter;
    bool certified = false;
    double alpha_star = 0.0;
    double w_star = 0.0;
    double m1 = 0.0;
    double v1 = 0.0;
    double n_required = 0.0; ///< ceil(target^2 v1 / m1^2); infinity when not certified
    bool boundary_hit = false;
};

/// Minimal N over the scan grid for each efficiency (phase-insensitive states).
std::vector<RequiredN> required_n(const StateModel& state, const FilterSpec& family, std::span<const double> etas,
                                  const ScanSpec& scan);
/// Same at a single (alpha, w), no search.
RequiredN required_n_at(const StateModel& state, const FilterSpec& spec, double alpha, double target);

/// CF criterion: estimator of 1 - |Phi|(b) with m1 = 1 - Phi(b),
/// v1 = e^{b^2} (1 + Phi(2b) e^{-2b^2}) / 2 - Phi(b)^2, optimized over b.
std::vector<RequiredN> required_n_cf(const StateModel& state, std::span<const double> etas, double target = 5.0);
/// CF single-sample moments at b.
Moments cf_moments(const StateModel& state, double b);

void write_curve_csv(const std::filesystem::path& path, const std::vector<RequiredN>& rows);

} // namespace ncqp
