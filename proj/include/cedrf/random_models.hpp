#pragma once

#include <array>
#include <cstddef>
#include <random>

#include "cedrf/spectral.hpp"

namespace cedrf {

/// Distribution of the random test models: M, L uniform in [1, max_dim],
/// A entries uniform in [-entry_range, entry_range], sigma2 drawn from
/// `noise_levels`.
struct RandomModelSpec {
    std::size_t max_dim = 6;
    double entry_range = 2.0;
    std::array<double, 3> noise_levels{0.1, 1.0, 10.0};
};

ObservationModel random_model(std::mt19937_64& rng, const RandomModelSpec& spec = {});

/// As random_model with fixed dimensions.
ObservationModel random_model(std::mt19937_64& rng, std::size_t L, std::size_t M, const RandomModelSpec& spec = {});

/// A = B C with inner dimension `rank` < min(L, M).
ObservationModel random_rank_deficient_model(std::mt19937_64& rng, std::size_t L, std::size_t M, std::size_t rank,
                                             const RandomModelSpec& spec = {});

}  // namespace cedrf
