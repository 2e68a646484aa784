#pragma once

#include "ncqp/quadrature.hpp"

#include "json.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ncqp {

enum class FilterFamily { AutocorrQ, AutocorrInf, AnalyticInvertible, GaussianReference };

class RadialFilterTable;

/// A radial nonclassicality filter Omega_w(|beta|) together with its width w.
///
/// All families depend on b only through u = b / w. The autocorrelation
/// family with finite q is tabulated once per q (shared, immutable) when the
/// spec is constructed.
class FilterSpec {
public:
    /// Autocorrelation filter of exp(-|gamma|^q); requires q > 2.
    static FilterSpec autocorr(double q, double width);
    /// The q -> infinity limit (autocorrelation of the unit disk).
    static FilterSpec autocorr_inf(double width);
    /// exp[-(b/w + C)^s + C^s]; requires s > 2 and C >= cmin(s).
    static FilterSpec analytic(double s, double c, double width);
    /// exp(-b^2 / 2w^2). Not a nonclassicality filter; kept as a reference.
    static FilterSpec gaussian(double width);

    /// Autocorrelation filter for any q >= 1. For q <= 2 the result is not a
    /// nonclassicality filter; used to check the quadrature against q = 2.
    static FilterSpec autocorr_reference(double q, double width);
    /// Analytic filter without the C >= cmin(s) requirement (only s > 0, C > 0).
    static FilterSpec analytic_unchecked(double s, double c, double width);

    [[nodiscard]] FilterFamily family() const { return family_; }
    [[nodiscard]] double q() const { return q_; }
    [[nodiscard]] double s() const { return s_; }
    [[nodiscard]] double c() const { return c_; }
    [[nodiscard]] double width() const { return width_; }
    [[nodiscard]] FilterSpec with_width(double width) const;

    /// False for the Gaussian reference, q <= 2, and analytic filters with C < cmin(s).
    [[nodiscard]] bool is_nonclassicality_filter() const;

    /// Short family label: "q3", "q4.5", "qinf", "analytic", "gauss".
    [[nodiscard]] std::string label() const;
    [[nodiscard]] nlohmann::json to_json() const;

    [[nodiscard]] const RadialFilterTable* table() const { return table_.get(); }

private:
    FilterSpec() = default;

    FilterFamily family_ = FilterFamily::AutocorrInf;
    double q_ = 0.0;
    double s_ = 0.0;
    double c_ = 0.0;
    double width_ = 1.0;
    std::shared_ptr<const RadialFilterTable> table_;
};

/// Smallest C for which the analytic filter has a nonnegative Fourier transform.
double cmin(double s);

struct CminPeak {
    double s;
    double value;
};
/// Location and value of the maximum of cmin over (2, s_max].
CminPeak cmin_peak(double s_max = 50.0);

/// Omega_w(b) for b >= 0.
double eval_filter(const FilterSpec& spec, double b);
/// log Omega_w(b); -infinity where the filter vanishes.
double log_filter(const FilterSpec& spec, double b);
/// Extended-precision evaluation for the closed-form families (finite differences).
long double eval_filter_ld(const FilterSpec& spec, long double b);

/// Smallest b with Omega_w(b) < threshold (exactly 2w for the q = infinity filter).
double filter_cutoff(const FilterSpec& spec, double threshold = 1e-14);

/// Extent of b * exp(b^2/2) * Omega_w(b), the integrand of pattern functions.
struct PatternSupport {
    double cutoff;   ///< beyond this the integrand is below exp(-46) of its peak
    double log_peak; ///< log of the integrand maximum
};

/// Throws ValidationError when the integrand is not integrable (Gaussian, w >= 1).
PatternSupport pattern_support(const FilterSpec& spec);

/// Quadrature rule for integrals over b in [0, cutoff] of b-smooth integrands
/// times the filter, resolving oscillations up to `max_frequency` in b. `density` scales the panel count.
quad::Rule radial_rule(const FilterSpec& spec, double cutoff, double max_frequency, double density = 1.0);

/// Fourier transform of the radial filter,
/// F(r) = (2/pi) int_0^inf db b Omega_w(b) J0(2 r b). Requires a nonclassicality filter.
double fourier_of_filter(const FilterSpec& spec, double r);
std::vector<double> fourier_of_filter(const FilterSpec& spec, std::span<const double> r);

namespace detail {
/// Same transform without the admissibility precondition.
std::vector<double> hankel_of_filter(const FilterSpec& spec, std::span<const double> r);
}

/// Tabulated log Omega(u) of the finite-q autocorrelation filter at unit width.
class RadialFilterTable {
public:
    RadialFilterTable(double q, double u_max, std::vector<double> log_values);

    [[nodiscard]] double q() const { return q_; }
    [[nodiscard]] std::vector<double> radii() const;
    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] const std::vector<double>& log_values() const { return log_values_; }
    [[nodiscard]] double u_max() const { return u_max_; }
    /// Smallest tabulated u with Omega < 1e-14.
    [[nodiscard]] double b_max() const { return b_max_; }
    [[nodiscard]] int interpolation_order() const { return 3; }

    /// log Omega(u); beyond u_max continues with the asymptotic -2 (u/2)^q slope.
    [[nodiscard]] double log_value(double u) const;

private:
    double q_;
    double u_max_;
    double b_max_ = 0.0;
    std::vector<double> log_values_;
    quad::UniformSpline log_; // includes mirrored nodes at u < 0 (log Omega is even)
};

/// Cached table for the given q (built on first use, thread-safe).
std::shared_ptr<const RadialFilterTable> autocorr_table(double q);

/// One direct quadrature of the autocorrelation integral at u = b / w
/// (log of the normalized value). Used to build tables.
double autocorr_log_direct(double q, double u, int angular_nodes = 64);

} // namespace ncqp
