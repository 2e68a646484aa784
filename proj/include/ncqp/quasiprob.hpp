#pragma once

#include "ncqp/filters.hpp"
#include "ncqp/states.hpp"

#include <array>
#include <complex>
#include <filesystem>
#include <span>
#include <vector>

namespace ncqp {

/// Filtered P function on a set of phase-space points.
struct QpGrid {
    std::vector<std::complex<double>> alpha;
    std::vector<double> values;
    std::vector<double> errors; ///< |fine - coarse| node-density difference per point
    double width = 0.0;
    double truncation_error = 0.0; ///< max of errors
    nlohmann::json metadata;
};

/// P_Omega(r) = (2/pi) int db b Phi(b) Omega_w(b) J0(2 r b) for phase-insensitive states.
QpGrid filtered_p_radial(const StateModel& state, const FilterSpec& spec, std::span<const double> radii);
double filtered_p_radial(const StateModel& state, const FilterSpec& spec, double r);

/// Radius beyond which |b Phi(b) Omega_w(b)| stays below 1e-18 of its peak.
double cf_filter_cutoff(const StateModel& state, const FilterSpec& spec);

/// Phi(beta) Omega_w(|beta|), evaluated in log space where needed.
double cf_times_filter(const StateModel& state, const FilterSpec& spec, std::complex<double> beta);

struct Grid2dOptions {
    int nodes = 2048;               ///< trapezoid intervals per axis on [-B, B]
    double decay = 1e-12;           ///< |Phi Omega| threshold that fixes B
    double box_limit = 400.0;       ///< largest admissible B
};

/// Full 2D inversion on the tensor grid re x im (row-major over re, then im).
/// The CF box is sampled on a trapezoid grid and transformed by a separable
/// direct Fourier sum straight onto the requested points.
QpGrid filtered_p_2d(const StateModel& state, const FilterSpec& spec, std::span<const double> re,
                     std::span<const double> im, const Grid2dOptions& options = {});

/// Smallest B with |Phi Omega| < decay * peak outside the disk of radius B.
double cf_box_radius(const StateModel& state, const FilterSpec& spec, double decay, double search_limit);

struct TwoModePoint {
    std::complex<double> a1;
    std::complex<double> a2;
};

struct TwoModeGrid {
    std::vector<TwoModePoint> points;
    std::vector<double> values;
    std::vector<double> errors;
    double width = 0.0;
    double truncation_error = 0.0;
    nlohmann::json metadata;
};

/// P_Omega(a1, a2) = int d^2 gamma P(gamma) F(a1 - sqrt(eta_L) gamma) F(a2 + sqrt(1 - eta_L) gamma).
TwoModeGrid two_mode_filtered_p(const TwoModeConfig& cfg, const FilterSpec& spec, std::span<const TwoModePoint> points);
/// The Re a1 x Re a2 slice (Im parts zero) on [-extent, extent]^2 with `count` points per axis.
std::vector<TwoModePoint> two_mode_re_slice(double extent, int count);
/// Integral of P_Omega over the product of two disks of radius R.
double two_mode_total_mass(const TwoModeConfig& cfg, const FilterSpec& spec, double radius);

void write_qp_csv(const std::filesystem::path& path, const QpGrid& grid);
void write_two_mode_csv(const std::filesystem::path& path, const TwoModeGrid& grid);

} // namespace ncqp
