#include "ncqp/states.hpp"

#include "ncqp/errors.hpp"
#include "ncqp/quadrature.hpp"
#include "ncqp/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ncqp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_eta(double eta)
{
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw ValidationError("efficiency eta must lie in (0, 1]");
    }
}

void check_variances(double vx, double vp)
{
    if (!(vx > 0.0 && vp > 0.0) || !std::isfinite(vx) || !std::isfinite(vp)) {
        throw ValidationError("quadrature variances must be positive");
    }
}

double gaussian_density(double x, double variance)
{
    return std::exp(-0.5 * x * x / variance) / std::sqrt(2.0 * kPi * variance);
}

// Polynomial part and Gaussian rate of log Phi for the Laguerre families:
// Phi(b) = L_n(scale b^2) exp(-rate b^2).
struct LaguerreForm {
    int n;
    double scale;
    double rate;
};

LaguerreForm laguerre_form(const StateModel& s)
{
    if (s.kind() == StateKind::NoisyFock) {
        return {s.n(), s.eta(), 0.0};
    }
    return {s.n(), (1.0 + s.nbar()) * s.eta(), s.nbar() * s.eta()};
}

// Smallest decay rate c of |quadrature_cf(k)| ~ poly(k) e^{-c k^2}, and the polynomial degree in k^2.
std::pair<double, int> quadrature_cf_decay(const StateModel& s)
{
    switch (s.kind()) {
    case StateKind::NoisyFock:
        return {0.5, s.n()};
    case StateKind::NPats:
        return {s.nbar() * s.eta() + 0.5, s.n()};
    case StateKind::SqueezedVac:
    case StateKind::DephasedSqueezedVac:
        return {0.5 * (s.eta() * std::min(s.vx(), s.vp()) + 1.0 - s.eta()), 0};
    case StateKind::HeraldedArray: {
        const auto terms = heralded_terms(s);
        double c = std::numeric_limits<double>::infinity();
        for (double lambda : terms.decay) {
            c = std::min(c, 1.0 / lambda + 0.5);
        }
        return {c, 0};
    }
    }
    return {0.5, 0};
}

} // namespace

StateModel StateModel::noisy_fock(int n, double eta)
{
    if (n < 0) {
        throw ValidationError("photon number n must be >= 0");
    }
    check_eta(eta);
    StateModel s;
    s.kind_ = StateKind::NoisyFock;
    s.n_ = n;
    s.eta_ = eta;
    return s;
}

StateModel StateModel::npats(int n, double nbar, double eta)
{
    if (n < 1) {
        throw ValidationError("number of added photons must be >= 1 (use thermal for n = 0)");
    }
    StateModel s = thermal(nbar, eta);
    s.n_ = n;
    return s;
}

StateModel StateModel::thermal(double nbar, double eta)
{
    if (!(nbar > 0.0) || !std::isfinite(nbar)) {
        throw ValidationError("mean thermal photon number must be positive");
    }
    check_eta(eta);
    StateModel s;
    s.kind_ = StateKind::NPats;
    s.n_ = 0;
    s.nbar_ = nbar;
    s.eta_ = eta;
    return s;
}

StateModel StateModel::squeezed_vacuum(double vx, double vp, double eta)
{
    check_variances(vx, vp);
    check_eta(eta);
    StateModel s;
    s.kind_ = StateKind::SqueezedVac;
    s.vx_ = vx;
    s.vp_ = vp;
    s.eta_ = eta;
    return s;
}

StateModel StateModel::dephased_squeezed_vacuum(double vx, double vp, double eta)
{
    StateModel s = squeezed_vacuum(vx, vp, eta);
    s.kind_ = StateKind::DephasedSqueezedVac;
    return s;
}

StateModel StateModel::heralded(std::complex<double> xi, int detectors, int clicks, double eta)
{
    if (detectors < 1) {
        throw ValidationError("detector count M must be >= 1");
    }
    if (clicks < 0 || clicks > detectors) {
        throw ValidationError("click count k must lie in [0, M]");
    }
    check_eta(eta);
    if (!std::isfinite(std::abs(xi))) {
        throw ValidationError("squeezing parameter must be finite");
    }
    const double zeta = std::pow(std::tanh(std::abs(xi)), 2);
    for (int j = 0; j <= clicks; ++j) {
        if (!(zeta * (1.0 - eta + eta * j / detectors) < 1.0)) {
            throw ValidationError("heralded P function is not normalizable (zeta (1 - eta + eta j / M) >= 1)");
        }
    }
    if (zeta == 0.0) {
        throw ValidationError("heralded state requires nonzero squeezing");
    }
    StateModel s;
    s.kind_ = StateKind::HeraldedArray;
    s.xi_ = xi;
    s.detectors_ = detectors;
    s.n_ = clicks;
    s.eta_ = eta;
    return s;
}

StateModel StateModel::with_eta(double eta) const
{
    check_eta(eta);
    StateModel s = *this;
    s.eta_ = eta;
    if (kind_ == StateKind::HeraldedArray) {
        return heralded(xi_, detectors_, n_, eta);
    }
    return s;
}

std::string StateModel::label() const
{
    switch (kind_) {
    case StateKind::NoisyFock:
        return "noisy-fock";
    case StateKind::NPats:
        return n_ == 0 ? "thermal" : "npats";
    case StateKind::SqueezedVac:
        return "squeezed";
    case StateKind::DephasedSqueezedVac:
        return "dephased-squeezed";
    case StateKind::HeraldedArray:
        return "heralded";
    }
    return "unknown";
}

nlohmann::json StateModel::to_json() const
{
    nlohmann::json j;
    j["state"] = label();
    j["eta"] = eta_;
    switch (kind_) {
    case StateKind::NoisyFock:
        j["n"] = n_;
        break;
    case StateKind::NPats:
        j["n"] = n_;
        j["nbar"] = nbar_;
        break;
    case StateKind::SqueezedVac:
    case StateKind::DephasedSqueezedVac:
        j["vx"] = vx_;
        j["vp"] = vp_;
        break;
    case StateKind::HeraldedArray:
        j["xi_re"] = xi_.real();
        j["xi_im"] = xi_.imag();
        j["M"] = detectors_;
        j["k"] = n_;
        break;
    }
    return j;
}

TwoModeConfig TwoModeConfig::make(const StateModel& source, double eta_l)
{
    if (source.kind() != StateKind::HeraldedArray) {
        throw ValidationError("two-mode configuration requires a heralded source");
    }
    if (!(eta_l > 0.0 && eta_l < 1.0)) {
        throw ValidationError("beam-splitter transmittance eta_L must lie in (0, 1)");
    }
    return {source, eta_l};
}

GaussianSum heralded_terms(const StateModel& state)
{
    if (state.kind() != StateKind::HeraldedArray) {
        throw ValidationError("heralded_terms requires a heralded state");
    }
    const double zeta = std::pow(std::tanh(std::abs(state.xi())), 2);
    const int k = state.clicks();
    const double eta = state.eta();
    GaussianSum g;
    double mass = 0.0; // sum_j C(k,j)(-1)^j / (1 - zeta c_j), i.e. 1/(pi N_P)
    for (int j = 0; j <= k; ++j) {
        const double c = 1.0 - eta + eta * j / state.detectors();
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const double binom = special::binomial(k, j);
        g.amplitude.push_back(binom * sign / (zeta * c));
        g.decay.push_back(1.0 / (zeta * c) - 1.0);
        mass += binom * sign / (1.0 - zeta * c);
    }
    g.norm = 1.0 / (kPi * mass);
    for (double& a : g.amplitude) {
        a *= g.norm;
    }
    return g;
}

double heralded_p(const StateModel& state, std::complex<double> alpha)
{
    const auto g = heralded_terms(state);
    const double r2 = std::norm(alpha);
    double p = 0.0;
    for (std::size_t j = 0; j < g.amplitude.size(); ++j) {
        p += g.amplitude[j] * std::exp(-g.decay[j] * r2);
    }
    return p;
}

double cf_radial_scaled(const StateModel& state, double b, double log_factor)
{
    const double b2 = b * b;
    switch (state.kind()) {
    case StateKind::NoisyFock:
    case StateKind::NPats: {
        const auto f = laguerre_form(state);
        return special::laguerre(f.n, f.scale * b2) * std::exp(log_factor - f.rate * b2);
    }
    case StateKind::DephasedSqueezedVac: {
        const double z = 0.25 * state.eta() * b2;
        return std::exp(log_factor - z * (state.vx() + state.vp() - 2.0)
                        + special::log_bessel_i0(z * (state.vx() - state.vp())));
    }
    case StateKind::HeraldedArray: {
        const auto g = heralded_terms(state);
        double sum = 0.0;
        for (std::size_t j = 0; j < g.amplitude.size(); ++j) {
            sum += g.amplitude[j] * kPi / g.decay[j] * std::exp(log_factor - b2 / g.decay[j]);
        }
        return sum;
    }
    case StateKind::SqueezedVac:
        break;
    }
    throw ValidationError("state is not phase insensitive; its characteristic function is not radial");
}

std::complex<double> cf_p(const StateModel& state, std::complex<double> beta)
{
    if (state.kind() == StateKind::SqueezedVac) {
        const double re = beta.real();
        const double im = beta.imag();
        return std::exp(-0.5 * state.eta() * ((state.vx() - 1.0) * im * im + (state.vp() - 1.0) * re * re));
    }
    return cf_radial_scaled(state, std::abs(beta));
}

double quadrature_variance(const StateModel& state, double phi)
{
    const double eta = state.eta();
    switch (state.kind()) {
    case StateKind::NoisyFock:
        return 2.0 * eta * state.n() + 1.0;
    case StateKind::NPats:
        return 2.0 * eta * ((state.n() + 1) * state.nbar() + state.n()) + 1.0;
    case StateKind::SqueezedVac: {
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        return eta * (state.vx() * c * c + state.vp() * s * s) + 1.0 - eta;
    }
    case StateKind::DephasedSqueezedVac:
        return 0.5 * eta * (state.vx() + state.vp()) + 1.0 - eta;
    case StateKind::HeraldedArray: {
        const auto g = heralded_terms(state);
        double v = 0.0;
        for (std::size_t j = 0; j < g.amplitude.size(); ++j) {
            v += g.amplitude[j] * kPi / g.decay[j] * (1.0 + 2.0 / g.decay[j]);
        }
        return v;
    }
    }
    return 1.0;
}

double quadrature_cf(const StateModel& state, double k, double phi)
{
    if (state.kind() == StateKind::SqueezedVac) {
        return std::exp(-0.5 * k * k * quadrature_variance(state, phi));
    }
    return cf_radial_scaled(state, std::fabs(k), -0.5 * k * k);
}

double quadrature_pdf(const StateModel& state, double x, double phi)
{
    const auto [rate, degree] = quadrature_cf_decay(state);
    const double scale = state.kind() == StateKind::NPats ? (1.0 + state.nbar()) * state.eta() : state.eta();
    double kmax = std::sqrt(46.0 / rate);
    while (rate * kmax * kmax - degree * std::log1p(scale * kmax * kmax) < 46.0) {
        kmax *= 1.1;
    }
    const double step = std::min(0.5, 2.0 / std::max(std::fabs(x), 1e-3));
    const int panels = static_cast<int>(std::ceil(kmax / step));
    const auto rule = quad::composite(0.0, kmax, panels, 16);
    const double integral = rule.apply([&](double k) { return std::cos(k * x) * quadrature_cf(state, k, phi); });
    if (!std::isfinite(integral)) {
        throw NumericalError("quadrature density integral diverged");
    }
    return integral / kPi;
}

std::vector<double> pats_photon_weights(int n, double nbar)
{
    if (n < 0 || !(nbar > 0.0)) {
        throw ValidationError("PATS weights need n >= 0 and nbar > 0");
    }
    // w_k = C(k,n) x^k / ((nbar+1) nbar^n), x = nbar / (nbar + 1), for k >= n.
    const double x = nbar / (nbar + 1.0);
    const double log_norm = -std::log(nbar + 1.0) - n * std::log(nbar);
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    double total = 0.0;
    for (int k = n;; ++k) {
        const double v = std::exp(special::log_binomial(k, n) + k * std::log(x) + log_norm);
        w.push_back(v);
        total += v;
        if (1.0 - total < 1e-12 && k > n + 2) {
            break;
        }
        if (k > n + 100000) {
            throw NumericalError("photon-number table did not converge");
        }
    }
    return w;
}

std::vector<double> photon_distribution(const StateModel& state)
{
    std::vector<double> before;
    if (state.kind() == StateKind::NoisyFock) {
        before.assign(static_cast<std::size_t>(state.n()) + 1, 0.0);
        before.back() = 1.0;
    } else if (state.kind() == StateKind::NPats) {
        before = pats_photon_weights(state.n(), state.nbar());
    } else {
        throw ValidationError("photon distribution is only available for Fock and PATS states");
    }
    const double eta = state.eta();
    std::vector<double> after(before.size(), 0.0);
    for (std::size_t k = 0; k < before.size(); ++k) {
        if (before[k] == 0.0) {
            continue;
        }
        const int kk = static_cast<int>(k);
        for (int m = eta == 1.0 ? kk : 0; m <= kk; ++m) {
            double logp = special::log_binomial(kk, m);
            logp += m > 0 ? m * std::log(eta) : 0.0;
            logp += (kk - m) > 0 ? (kk - m) * std::log1p(-eta) : 0.0;
            after[static_cast<std::size_t>(m)] += before[k] * std::exp(logp);
        }
    }
    return after;
}

double quadrature_pdf_mixture(const StateModel& state, double x, double phi)
{
    switch (state.kind()) {
    case StateKind::NoisyFock:
    case StateKind::NPats: {
        // The lossy photon distribution is reused while the same state is queried.
        thread_local struct {
            StateKind kind;
            int n = -1;
            double nbar = 0.0;
            double eta = 0.0;
            std::vector<double> p;
        } cache;
        if (cache.kind != state.kind() || cache.n != state.n() || cache.nbar != state.nbar() || cache.eta != state.eta()) {
            cache.p = photon_distribution(state);
            cache.kind = state.kind();
            cache.n = state.n();
            cache.nbar = state.nbar();
            cache.eta = state.eta();
        }
        const auto& p = cache.p;
        const auto psi = special::fock_quadrature_densities(static_cast<int>(p.size()) - 1, x);
        double sum = 0.0;
        for (std::size_t m = 0; m < p.size(); ++m) {
            sum += p[m] * psi[m];
        }
        return sum;
    }
    case StateKind::SqueezedVac:
        return gaussian_density(x, quadrature_variance(state, phi));
    case StateKind::DephasedSqueezedVac: {
        // Periodic trapezoid over the squeezing angle converges geometrically.
        const int nodes = 512;
        const double eta = state.eta();
        double sum = 0.0;
        for (int i = 0; i < nodes; ++i) {
            const double theta = 2.0 * kPi * i / nodes;
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            sum += gaussian_density(x, eta * (state.vx() * c * c + state.vp() * s * s) + 1.0 - eta);
        }
        return sum / nodes;
    }
    case StateKind::HeraldedArray: {
        const auto g = heralded_terms(state);
        double sum = 0.0;
        for (std::size_t j = 0; j < g.amplitude.size(); ++j) {
            sum += g.amplitude[j] * kPi / g.decay[j] * gaussian_density(x, 1.0 + 2.0 / g.decay[j]);
        }
        return sum;
    }
    }
    return 0.0;
}

double pats_p(const StateModel& state, std::complex<double> alpha)
{
    if (state.kind() != StateKind::NPats) {
        throw ValidationError("pats_p requires a PATS state");
    }
    const double nbar = state.nbar();
    const double eta = state.eta();
    const int n = state.n();
    const double r2 = std::norm(alpha);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign / (kPi * std::pow(nbar, n + 1) * eta) * special::laguerre(n, (1.0 + nbar) / nbar * r2 / eta)
        * std::exp(-r2 / (eta * nbar));
}

double pats_wigner(const StateModel& state, std::complex<double> alpha)
{
    if (state.kind() != StateKind::NPats) {
        throw ValidationError("pats_wigner requires a PATS state");
    }
    const double nbar = state.nbar();
    const double eta = state.eta();
    const int n = state.n();
    const double r2 = std::norm(alpha);
    const double d = 1.0 + 2.0 * nbar * eta;
    const double u = 1.0 - 2.0 * eta;
    const double c = 4.0 * (1.0 + nbar) * eta * r2 / d;
    // (1-2 eta)^n L_n(-c / (1-2 eta)) expanded as a polynomial in (1-2 eta),
    // finite at eta = 1/2.
    double poly = 0.0;
    double ck = 1.0;
    for (int k = 0; k <= n; ++k) {
        poly += special::binomial(n, k) * ck * std::pow(u, n - k);
        ck *= c / (k + 1);
    }
    return 2.0 / kPi / std::pow(d, n + 1) * std::exp(-2.0 * r2 / d) * poly;
}

double mandel_q(const StateModel& state)
{
    if (state.kind() != StateKind::NPats) {
        throw ValidationError("mandel_q requires a PATS state");
    }
    const double nbar = state.nbar();
    const int n = state.n();
    return state.eta() * (nbar * nbar * (n + 1) - n) / (nbar * (n + 1) + n);
}

double npats_sup_abs_cf(int n, double nbar)
{
    if (n < 1 || !(nbar > 0.0)) {
        throw ValidationError("npats_sup_abs_cf needs n >= 1 and nbar > 0");
    }
    auto g = [&](double t) { return std::fabs(special::laguerre(n, (1.0 + nbar) * t)) * std::exp(-nbar * t); };
    // Past t_end the crude bound (1 + (1+nbar) t)^n e^{-nbar t} stays below 1/2.
    double t_end = (4.0 * n + 6.0) / (1.0 + nbar);
    while (n * std::log1p((1.0 + nbar) * t_end) - nbar * t_end > std::log(0.5)) {
        t_end *= 1.5;
    }
    const int grid = 8000;
    const double dt = t_end / grid;
    int best = 1;
    double best_value = g(dt);
    for (int i = 2; i <= grid; ++i) {
        const double v = g(i * dt);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    if (best == 1) {
        return best_value; // |Phi| only decreases away from the origin
    }
    const double t_star = quad::golden_minimize([&](double t) { return -g(t); }, (best - 1) * dt, (best + 1) * dt, 1e-12);
    return std::max(best_value, g(t_star));
}

double threshold_nbar(int n)
{
    if (n < 1) {
        throw ValidationError("threshold_nbar needs n >= 1");
    }
    return quad::bisect([n](double nbar) { return npats_sup_abs_cf(n, nbar) - 1.0; }, 0.02, 5.0, 1e-10);
}

} // namespace ncqp
