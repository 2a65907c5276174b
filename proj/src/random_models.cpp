#include "cedrf/random_models.hpp"

#include <vector>

namespace cedrf {

namespace {

Matrix uniform_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double range) {
    std::uniform_real_distribution<double> entry(-range, range);
    std::vector<double> values(rows * cols);
    for (double& v : values) v = entry(rng);
    return {rows, cols, std::move(values)};
}

double noise_level(std::mt19937_64& rng, const RandomModelSpec& spec) {
    std::uniform_int_distribution<std::size_t> pick(0, spec.noise_levels.size() - 1);
    return spec.noise_levels[pick(rng)];
}

}  // namespace

ObservationModel random_model(std::mt19937_64& rng, const RandomModelSpec& spec) {
    std::uniform_int_distribution<std::size_t> dim(1, spec.max_dim);
    const std::size_t L = dim(rng);
    const std::size_t M = dim(rng);
    return random_model(rng, L, M, spec);
}

ObservationModel random_model(std::mt19937_64& rng, std::size_t L, std::size_t M, const RandomModelSpec& spec) {
    Matrix a = uniform_matrix(rng, L, M, spec.entry_range);
    return {std::move(a), noise_level(rng, spec)};
}

ObservationModel random_rank_deficient_model(std::mt19937_64& rng, std::size_t L, std::size_t M, std::size_t rank,
                                             const RandomModelSpec& spec) {
    const Matrix b = uniform_matrix(rng, L, rank, spec.entry_range);
    const Matrix c = uniform_matrix(rng, rank, M, 1.0);
    return {b * c, noise_level(rng, spec)};
}

}  // namespace cedrf
