#pragma once

// Seeded generators for the randomized sweeps. Everything is driven by an
// explicit engine so identical seeds give identical sweeps.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "keysec/distribution.hpp"

namespace keysec {

// Dirichlet(1,...,1): exponential weights, normalized.
inline KeyDistribution random_distribution(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> w(domain_size(n));
    double total = 0.0;
    for (double& x : w) {
        x = -std::log(1.0 - unit(rng));
        total += x;
    }
    for (double& x : w) x /= total;
    return KeyDistribution::from_dense(n, std::move(w));
}

// A handful of heavy atoms over a partly zeroed background; exercises the
// skewed profiles the bounds have to survive.
inline KeyDistribution random_spiky_distribution(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> w(domain_size(n), 0.0);
    std::uniform_int_distribution<std::uint64_t> pick(0, domain_size(n) - 1);
    int spikes = 1 + int(rng() % 4);
    double total = 0.0;
    for (int s = 0; s < spikes; ++s) {
        double m = unit(rng);
        w[pick(rng)] += m;
        total += m;
    }
    for (std::uint64_t k = 0; k < w.size(); ++k) {
        if (unit(rng) < 0.5) {
            double m = 0.1 * unit(rng);
            w[k] += m;
            total += m;
        }
    }
    for (double& x : w) x /= total;
    return KeyDistribution::from_dense(n, std::move(w));
}

// Random distribution mixed back toward uniform so that its distance from
// uniform does not exceed d_max.
inline KeyDistribution random_distribution_within(int n, double d_max, std::mt19937_64& rng) {
    KeyDistribution dir = random_distribution(n, rng);
    double dist = stat_distance_from_uniform(dir);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double theta = dist > 0.0 ? std::min(1.0, d_max / dist) * unit(rng) : 0.0;
    const double u = std::ldexp(1.0, -n);
    std::vector<double> w(domain_size(n));
    for (std::uint64_t k = 0; k < w.size(); ++k) w[k] = u + theta * (dir.prob(k) - u);
    return KeyDistribution::from_dense(n, std::move(w));
}

}  // namespace keysec
