#pragma once

#include "json.hpp"

#include <complex>
#include <string>
#include <vector>

namespace ncqp {

enum class StateKind { NoisyFock, NPats, SqueezedVac, DephasedSqueezedVac, HeraldedArray };

/// Single-mode state families. Quadrature convention: x(phi) = a e^{i phi} + h.c.,
/// vacuum variance 1. All losses are folded into the efficiency eta.
class StateModel {
public:
    static StateModel noisy_fock(int n, double eta);
    /// n-photon-added thermal state, n >= 1.
    static StateModel npats(int n, double nbar, double eta);
    /// Thermal state with mean photon number nbar (the n = 0 member of the PATS family).
    static StateModel thermal(double nbar, double eta);
    static StateModel squeezed_vacuum(double vx, double vp, double eta);
    static StateModel dephased_squeezed_vacuum(double vx, double vp, double eta);
    /// Mode A conditioned on k clicks of an M-detector array; eta is the on-off detector efficiency.
    static StateModel heralded(std::complex<double> xi, int detectors, int clicks, double eta);

    [[nodiscard]] StateKind kind() const { return kind_; }
    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] double nbar() const { return nbar_; }
    [[nodiscard]] double eta() const { return eta_; }
    [[nodiscard]] double vx() const { return vx_; }
    [[nodiscard]] double vp() const { return vp_; }
    [[nodiscard]] std::complex<double> xi() const { return xi_; }
    [[nodiscard]] int detectors() const { return detectors_; }
    [[nodiscard]] int clicks() const { return n_; }
    /// Same state at another efficiency.
    [[nodiscard]] StateModel with_eta(double eta) const;
    /// Phase-insensitive, so Phi depends on |beta| only.
    [[nodiscard]] bool is_radial() const { return kind_ != StateKind::SqueezedVac; }
    [[nodiscard]] std::string label() const;
    [[nodiscard]] nlohmann::json to_json() const;

private:
    StateModel() = default;
    StateKind kind_ = StateKind::NoisyFock;
    int n_ = 0;
    int detectors_ = 0;
    double nbar_ = 0.0;
    double eta_ = 1.0;
    double vx_ = 1.0;
    double vp_ = 1.0;
    std::complex<double> xi_{};
};

struct TwoModeConfig {
    StateModel source;
    double eta_l;
    /// Requires a heralded source and 0 < eta_l < 1.
    static TwoModeConfig make(const StateModel& source, double eta_l);
};

/// Characteristic function of the P function, Phi(beta).
std::complex<double> cf_p(const StateModel& state, std::complex<double> beta);
/// Phi(b) e^{log_factor} for radial states, evaluated without intermediate overflow.
double cf_radial_scaled(const StateModel& state, double b, double log_factor = 0.0);
/// <exp(i k x(phi))> = Phi(i k e^{-i phi}) e^{-k^2/2}; real for every implemented state.
double quadrature_cf(const StateModel& state, double k, double phi);

/// sup over |beta| > 0 of |Phi| for the PATS family at eta = 1 (eta only rescales |beta|).
double npats_sup_abs_cf(int n, double nbar);
/// Smallest nbar for which |Phi_n| never exceeds 1.
double threshold_nbar(int n);

double pats_p(const StateModel& state, std::complex<double> alpha);
double pats_wigner(const StateModel& state, std::complex<double> alpha);
double mandel_q(const StateModel& state);

/// P(alpha) = sum_j amplitude_j exp(-decay_j |alpha|^2).
struct GaussianSum {
    std::vector<double> amplitude;
    std::vector<double> decay;
    double norm = 0.0; ///< the normalization constant N_P
};
GaussianSum heralded_terms(const StateModel& state);
double heralded_p(const StateModel& state, std::complex<double> alpha);

/// Photon-number distribution before losses (PATS) truncated where the tail mass drops below 1e-12.
std::vector<double> pats_photon_weights(int n, double nbar);
/// Photon-number distribution after losses; NoisyFock and PATS only.
std::vector<double> photon_distribution(const StateModel& state);

/// Quadrature density from the characteristic function (numerical cosine transform).
double quadrature_pdf(const StateModel& state, double x, double phi);
/// Same density from the closed-form mixture the sampler draws from.
double quadrature_pdf_mixture(const StateModel& state, double x, double phi);
/// Quadrature variance in closed form.
double quadrature_variance(const StateModel& state, double phi);

} // namespace ncqp
