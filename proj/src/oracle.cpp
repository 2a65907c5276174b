#include "cedrf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "cedrf/error.hpp"
#include "cedrf/waterfill.hpp"

namespace cedrf {

namespace {

using linalg::matvec_into;

struct ChunkStats {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
};

// Chan et al. pairwise merge; applied in chunk order only.
void merge_into(ChunkStats& acc, const ChunkStats& c) {
    if (c.n == 0) return;
    if (acc.n == 0) {
        acc = c;
        return;
    }
    const double n = static_cast<double>(acc.n + c.n);
    const double delta = c.mean - acc.mean;
    acc.mean += delta * static_cast<double>(c.n) / n;
    acc.m2 += c.m2 + delta * delta * static_cast<double>(acc.n) * static_cast<double>(c.n) / n;
    acc.n += c.n;
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::size_t chunk) {
    const auto c = static_cast<std::uint64_t>(chunk);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    return std::mt19937_64(seq);
}

// `make_sampler()` returns a callable `double(std::mt19937_64&)` that owns
// its scratch buffers and distribution state.
template <class MakeSampler>
McEstimate run_monte_carlo(std::size_t n_samples, std::uint64_t seed, McOptions options,
                           const MakeSampler& make_sampler) {
    if (n_samples < 1) throw InvalidSampleCount("Monte Carlo needs at least one sample");
    const std::size_t chunks = (n_samples + kMcChunkSize - 1) / kMcChunkSize;
    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));

    std::vector<ChunkStats> stats(chunks);
    auto worker = [&](unsigned id) {
        for (std::size_t c = id; c < chunks; c += threads) {
            // Fresh sampler per chunk: normal_distribution caches a spare draw.
            auto sampler = make_sampler();
            auto engine = chunk_engine(seed, c);
            const std::size_t begin = c * kMcChunkSize;
            const std::size_t end = std::min(n_samples, begin + kMcChunkSize);
            ChunkStats s;
            for (std::size_t i = begin; i < end; ++i) {
                const double x = sampler(engine);
                ++s.n;
                const double delta = x - s.mean;
                s.mean += delta / static_cast<double>(s.n);
                s.m2 += delta * (x - s.mean);
            }
            stats[c] = s;
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }

    ChunkStats total;
    for (const auto& s : stats) merge_into(total, s);
    McEstimate out;
    out.mean = total.mean;
    out.n_samples = n_samples;
    out.seed = seed;
    out.std_error = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n))
                             : 0.0;
    return out;
}

void fill_normal(std::mt19937_64& engine, std::normal_distribution<double>& normal, std::vector<double>& v,
                 double scale = 1.0) {
    for (double& x : v) x = scale * normal(engine);
}

double normalized_error(const std::vector<double>& x, const std::vector<double>& xhat) {
    double err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - xhat[i];
        err += d * d;
    }
    return err / static_cast<double>(x.size());
}

// B = A^T (A A^T + sigma2 I)^{-1}, so that E[X|Y] = B Y.
Matrix mmse_estimator(const ObservationModel& model) {
    const Matrix& a = model.A();
    Matrix sigma_y = a * a.transpose();
    for (std::size_t i = 0; i < model.L(); ++i) sigma_y(i, i) += model.sigma2();
    return a.transpose() * linalg::pinv(sigma_y);
}

}  // namespace

CEMatrixParts ce_matrix_parts(const ObservationModel& model, double rate) {
    const Matrix& a = model.A();
    const auto eig = linalg::sym_eig(a * a.transpose());
    const SpectralModel spec = spectral_model(model);
    const Spectrum obs = spec.observation();
    const WaterfillResult alloc = rate_allocation(obs, rate);

    const std::size_t L = model.L();
    std::vector<double> j(L);
    std::vector<double> d(L);
    std::vector<double> eta(L);
    for (std::size_t l = 0; l < L; ++l) {
        j[l] = 1.0 - std::exp2(-2.0 * alloc.rates[l]);
        d[l] = std::min(obs.values[l], alloc.theta);
        eta[l] = model.sigma2() * j[l] * j[l] + j[l] * d[l];
    }

    CEMatrixParts parts;
    parts.U = eig.vectors;
    parts.J = Matrix::diagonal(j);
    parts.D = Matrix::diagonal(d);
    parts.P = parts.J * parts.U.transpose() * a;
    parts.Sigma_eta = Matrix::diagonal(eta);
    parts.k = alloc.k;
    parts.theta = alloc.theta;
    return parts;
}

double ce_matrix_form(const ObservationModel& model, double rate) {
    const auto parts = ce_matrix_parts(model, rate);
    const Matrix pt = parts.P.transpose();
    const Matrix s = parts.P * pt + parts.Sigma_eta;
    const Matrix explained = pt * linalg::pinv(s) * parts.P;
    return 1.0 - linalg::trace(explained) / static_cast<double>(model.M());
}

McEstimate mc_ce(const ObservationModel& model, double rate, std::size_t n_samples, std::uint64_t seed,
                 McOptions options) {
    if (n_samples < 1) throw InvalidSampleCount("Monte Carlo needs at least one sample");
    const auto parts = ce_matrix_parts(model, rate);
    const Matrix pt = parts.P.transpose();
    const Matrix estimator = pt * linalg::pinv(parts.P * pt + parts.Sigma_eta);
    const Matrix noise_mix = parts.J * parts.U.transpose();
    std::vector<double> quantizer_scale(model.L());
    for (std::size_t l = 0; l < model.L(); ++l) quantizer_scale[l] = std::sqrt(parts.J(l, l) * parts.D(l, l));
    const double noise_sd = std::sqrt(model.sigma2());
    const std::size_t M = model.M();
    const std::size_t L = model.L();

    return run_monte_carlo(n_samples, seed, options, [&] {
        return [&, x = std::vector<double>(M), w = std::vector<double>(L), n = std::vector<double>(L),
                yhat = std::vector<double>(L), tmp = std::vector<double>(L), xhat = std::vector<double>(M),
                normal = std::normal_distribution<double>()](std::mt19937_64& engine) mutable {
            fill_normal(engine, normal, x);
            fill_normal(engine, normal, w, noise_sd);
            fill_normal(engine, normal, n);
            matvec_into(parts.P, x, yhat);
            matvec_into(noise_mix, w, tmp);
            for (std::size_t l = 0; l < L; ++l) yhat[l] += tmp[l] + quantizer_scale[l] * n[l];
            matvec_into(estimator, yhat, xhat);
            return normalized_error(x, xhat);
        };
    });
}

McEstimate mc_idrf(const ObservationModel& model, double rate, std::size_t n_samples, std::uint64_t seed,
                   McOptions options) {
    if (n_samples < 1) throw InvalidSampleCount("Monte Carlo needs at least one sample");
    const Matrix estimator = mmse_estimator(model);
    const Matrix& a = model.A();
    const std::size_t M = model.M();
    const std::size_t L = model.L();

    Matrix cond_cov = estimator * a;
    cond_cov = 0.5 * (cond_cov + cond_cov.transpose());
    const auto eig = linalg::sym_eig(cond_cov);
    const Matrix rotate_in = eig.vectors.transpose() * estimator;  // Y -> eigen-coordinates of X~

    const Spectrum cond = spectral_model(model).conditional();
    const double theta = cond.rank == 0 ? std::numeric_limits<double>::infinity() : water_level(cond, rate).theta;

    // Forward test channel X^_l = c_l (X~_l + q_l); a component at or below
    // the water level is reconstructed as 0.
    std::vector<double> gain(M, 0.0);
    std::vector<double> q_sd(M, 0.0);
    for (std::size_t l = 0; l < M; ++l) {
        const double mu = eig.values[l];
        if (!(mu - theta > 1e-12 * mu)) continue;
        gain[l] = (mu - theta) / mu;
        q_sd[l] = std::sqrt(theta * mu / (mu - theta));
    }
    const double noise_sd = std::sqrt(model.sigma2());

    return run_monte_carlo(n_samples, seed, options, [&] {
        return [&, x = std::vector<double>(M), z = std::vector<double>(L), y = std::vector<double>(L),
                t = std::vector<double>(M), xhat = std::vector<double>(M),
                normal = std::normal_distribution<double>()](std::mt19937_64& engine) mutable {
            fill_normal(engine, normal, x);
            fill_normal(engine, normal, z, noise_sd);
            matvec_into(a, x, y);
            for (std::size_t l = 0; l < L; ++l) y[l] += z[l];
            matvec_into(rotate_in, y, t);
            for (std::size_t l = 0; l < M; ++l) {
                const double q = normal(engine);
                t[l] = gain[l] == 0.0 ? 0.0 : gain[l] * (t[l] + q_sd[l] * q);
            }
            matvec_into(eig.vectors, t, xhat);
            return normalized_error(x, xhat);
        };
    });
}

McEstimate mc_mmse(const ObservationModel& model, std::size_t n_samples, std::uint64_t seed, McOptions options) {
    if (n_samples < 1) throw InvalidSampleCount("Monte Carlo needs at least one sample");
    const Matrix estimator = mmse_estimator(model);
    const Matrix& a = model.A();
    const std::size_t M = model.M();
    const std::size_t L = model.L();
    const double noise_sd = std::sqrt(model.sigma2());

    return run_monte_carlo(n_samples, seed, options, [&] {
        return [&, x = std::vector<double>(M), z = std::vector<double>(L), y = std::vector<double>(L),
                xhat = std::vector<double>(M),
                normal = std::normal_distribution<double>()](std::mt19937_64& engine) mutable {
            fill_normal(engine, normal, x);
            fill_normal(engine, normal, z, noise_sd);
            matvec_into(a, x, y);
            for (std::size_t l = 0; l < L; ++l) y[l] += z[l];
            matvec_into(estimator, y, xhat);
            return normalized_error(x, xhat);
        };
    });
}

}  // namespace cedrf
