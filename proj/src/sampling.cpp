#include "ncqp/sampling.hpp"

#include "ncqp/errors.hpp"
#include "ncqp/special.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>

namespace ncqp {

namespace {

constexpr double kPi = std::numbers::pi;

// sup_x rho_m(x) / g(x) for the envelope g = N(0, 2m+2), padded by 5 %.
double envelope_bound(int m)
{
    static std::mutex mutex;
    static std::map<int, double> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(m); it != cache.end()) {
        return it->second;
    }
    const double var = 2.0 * m + 2.0;
    const double reach = 6.0 * std::sqrt(var) + 6.0;
    double worst = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double x = reach * i / 20000.0;
        const double g = std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * kPi * var);
        worst = std::max(worst, special::fock_quadrature_density(m, x) / g);
    }
    cache[m] = 1.05 * worst;
    return cache[m];
}

class PatsTable {
public:
    explicit PatsTable(const StateModel& s)
    {
        auto w = pats_photon_weights(s.n(), s.nbar());
        cdf_.resize(w.size());
        double acc = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            acc += w[k];
            cdf_[k] = acc;
        }
    }
    int draw(Rng& rng) const
    {
        const double u = std::uniform_real_distribution<double>(0.0, cdf_.back())(rng);
        return static_cast<int>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    }

private:
    std::vector<double> cdf_;
};

int apply_loss(int k, double eta, Rng& rng)
{
    if (eta >= 1.0 || k == 0) {
        return k;
    }
    return std::binomial_distribution<int>(k, eta)(rng);
}

} // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

double sample_fock_quadrature(int m, Rng& rng)
{
    if (m < 0) {
        throw ValidationError("Fock photon number must be >= 0");
    }
    const double var = 2.0 * m + 2.0;
    const double bound = envelope_bound(m);
    std::normal_distribution<double> proposal(0.0, std::sqrt(var));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        const double x = proposal(rng);
        const double g = std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * kPi * var);
        if (unit(rng) * bound * g <= special::fock_quadrature_density(m, x)) {
            return x;
        }
    }
}

int sample_photon_number(const StateModel& state, Rng& rng)
{
    switch (state.kind()) {
    case StateKind::NoisyFock:
        return apply_loss(state.n(), state.eta(), rng);
    case StateKind::NPats:
        return apply_loss(PatsTable(state).draw(rng), state.eta(), rng);
    default:
        throw ValidationError("photon-number sampling needs a Fock or PATS state");
    }
}

QuadratureDataset sample_quadrature(const StateModel& state, std::size_t count, Rng& rng)
{
    if (state.kind() == StateKind::HeraldedArray) {
        throw ValidationError("quadrature sampling is not available for heralded states");
    }
    QuadratureDataset data;
    data.records.reserve(count);
    data.provenance["state"] = state.to_json();
    std::uniform_real_distribution<double> phase(0.0, kPi);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double eta = state.eta();
    std::optional<PatsTable> pats;
    if (state.kind() == StateKind::NPats) {
        pats.emplace(state);
    }
    for (std::size_t i = 0; i < count; ++i) {
        const double phi = phase(rng);
        double x = 0.0;
        switch (state.kind()) {
        case StateKind::NoisyFock:
            x = sample_fock_quadrature(apply_loss(state.n(), eta, rng), rng);
            break;
        case StateKind::NPats:
            x = sample_fock_quadrature(apply_loss(pats->draw(rng), eta, rng), rng);
            break;
        case StateKind::SqueezedVac:
            x = std::sqrt(quadrature_variance(state, phi)) * normal(rng);
            break;
        case StateKind::DephasedSqueezedVac: {
            const double theta = angle(rng);
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            x = std::sqrt(eta * (state.vx() * c * c + state.vp() * s * s) + 1.0 - eta) * normal(rng);
            break;
        }
        case StateKind::HeraldedArray:
            break;
        }
        data.records.push_back({x, phi});
    }
    return data;
}

QuadratureDataset sample_quadrature(const StateModel& state, std::size_t count, std::uint64_t seed)
{
    Rng rng = make_rng(seed);
    auto data = sample_quadrature(state, count, rng);
    data.provenance["seed"] = seed;
    return data;
}

} // namespace ncqp
