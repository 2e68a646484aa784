#pragma once

#include "ncqp/dataset.hpp"
#include "ncqp/states.hpp"

#include <cstdint>
#include <random>

namespace ncqp {

using Rng = std::mt19937_64;

/// Independent generator for trial `stream` of a seeded run.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Exact draw of x from the Fock-m quadrature density (rejection from N(0, 2m+2)).
double sample_fock_quadrature(int m, Rng& rng);

/// Photon number after losses (NoisyFock and PATS).
int sample_photon_number(const StateModel& state, Rng& rng);

/// N i.i.d. records with phi ~ U[0, pi). Heralded states have no sampler.
QuadratureDataset sample_quadrature(const StateModel& state, std::size_t count, Rng& rng);
QuadratureDataset sample_quadrature(const StateModel& state, std::size_t count, std::uint64_t seed);

} // namespace ncqp
