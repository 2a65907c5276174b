#include "cedrf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cedrf/error.hpp"

namespace cedrf {

ObservationModel::ObservationModel(Matrix a, double sigma2) : a_(std::move(a)), sigma2_(sigma2) {
    if (a_.rows() == 0 || a_.cols() == 0) throw InvalidModel("A must have at least one row and one column");
    if (!(std::isfinite(sigma2_) && sigma2_ > 0.0)) throw InvalidModel("sigma2 must be positive and finite");
    full_rank_ = gram_spectrum(*this).rank == r();
}

bool is_numerically_zero(double value, double largest) noexcept {
    if (largest <= 0.0) return value <= kRankAbsTolerance;
    return value <= kRankRelTolerance * largest;
}

Spectrum Spectrum::from_values(std::vector<double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0) {
            throw InvalidArgument("spectrum values must be finite and non-negative");
        }
        if (i > 0 && values[i] > values[i - 1]) throw InvalidArgument("spectrum values must be non-increasing");
    }
    Spectrum s;
    s.values = std::move(values);
    const double top = s.largest();
    s.rank = static_cast<std::size_t>(
        std::count_if(s.values.begin(), s.values.end(), [&](double v) { return !is_numerically_zero(v, top); }));
    return s;
}

Spectrum gram_spectrum(const ObservationModel& model) {
    const Matrix& a = model.A();
    const auto eig = linalg::sym_eig(a * a.transpose());
    std::vector<double> values = eig.values;
    const double top = std::max(values.empty() ? 0.0 : values.front(), 0.0);
    for (double& v : values) {
        if (v < 0.0 || is_numerically_zero(v, top)) v = 0.0;
    }
    return Spectrum::from_values(std::move(values));
}

Spectrum observation_spectrum(const Spectrum& gram, double sigma2) {
    Spectrum s;
    s.values.reserve(gram.size());
    for (double v : gram.values) s.values.push_back(v + sigma2);
    s.rank = s.values.size();
    return s;
}

Spectrum conditional_spectrum(const Spectrum& gram, double sigma2) {
    Spectrum s;
    s.values.reserve(gram.size());
    for (double v : gram.values) s.values.push_back(v / (v + sigma2));
    s.rank = gram.rank;
    return s;
}

double mmse_floor(const Spectrum& gram, double sigma2, std::size_t M) {
    double explained = 0.0;
    for (double v : gram.values) explained += v / (v + sigma2);
    return 1.0 - explained / static_cast<double>(M);
}

SpectralModel SpectralModel::from_gram(std::vector<double> gram_values, double sigma2, std::size_t M) {
    if (!(std::isfinite(sigma2) && sigma2 > 0.0)) throw InvalidModel("sigma2 must be positive and finite");
    if (M == 0) throw InvalidModel("source dimension M must be positive");
    if (gram_values.empty()) throw InvalidModel("gram spectrum must be non-empty");
    SpectralModel out;
    out.gram = Spectrum::from_values(std::move(gram_values));
    out.sigma2 = sigma2;
    out.M = M;
    out.L = out.gram.size();
    if (out.gram.rank > std::min(out.M, out.L)) {
        throw InvalidModel("gram spectrum has " + std::to_string(out.gram.rank) +
                           " nonzero values but min(M, L) = " + std::to_string(std::min(out.M, out.L)));
    }
    return out;
}

SpectralModel spectral_model(const ObservationModel& model) {
    SpectralModel out;
    out.gram = gram_spectrum(model);
    out.sigma2 = model.sigma2();
    out.M = model.M();
    out.L = model.L();
    return out;
}

Matrix sym_sqrt_pd(const Matrix& s) {
    const auto eig = linalg::sym_eig(s);
    const double top = eig.values.empty() ? 0.0 : eig.values.front();
    if (eig.values.empty() || top <= 0.0 || is_numerically_zero(eig.values.back(), top)) {
        throw NotPositiveDefinite("matrix is not positive definite");
    }
    const std::size_t n = s.rows();
    Matrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double root = std::sqrt(eig.values[k]);
        for (std::size_t i = 0; i < n; ++i) {
            const double vik = eig.vectors(i, k) * root;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * eig.vectors(j, k);
        }
    }
    return out;
}

ObservationModel whiten(const Matrix& sigma_x, const Matrix& a, double sigma2) {
    if (sigma_x.rows() != a.cols() || !sigma_x.square()) {
        throw DimensionMismatch("sigma_x must be " + std::to_string(a.cols()) + "x" + std::to_string(a.cols()));
    }
    return {a * sym_sqrt_pd(sigma_x), sigma2};
}

}  // namespace cedrf
