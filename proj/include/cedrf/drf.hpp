#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cedrf/spectral.hpp"
#include "cedrf/waterfill.hpp"

namespace cedrf {

/// Optimal indirect distortion-rate function D_X|Y(R): water-filling over
/// the spectrum of Sigma_{X|Y}.
double idrf(const SpectralModel& model, double rate);
double idrf(const ObservationModel& model, double rate);

/// Compress-and-estimate distortion-rate function D_CE(R): the encoder
/// water-fills over Sigma_Y and the decoder MMSE-estimates X.
double ce_drf(const SpectralModel& model, double rate);
double ce_drf(const ObservationModel& model, double rate);

/// Rates at or below R_limit give D_CE = D_X|Y.
struct EqualityRegion {
    std::size_t r0 = 1;
    double R_limit = 0.0;  ///< may be +inf
    bool unconditional = false;
};

/// Relative tolerance used to decide that two values of
/// lambda / (lambda + sigma2)^2 coincide.
inline constexpr double kEqualityTolerance = 1e-10;

EqualityRegion equality_region(const SpectralModel& model);
EqualityRegion equality_region(const ObservationModel& model);

/// G(R) = D_CE(R) - D_X|Y(R). Round-off negatives above -1e-12 become 0.
double gap(const SpectralModel& model, double rate);
double gap(const ObservationModel& model, double rate);

/// (L/M) (lambda_1 + sigma2) / (4 sigma2) 2^{-2R/L}.
double gap_upper_bound(const SpectralModel& model, double rate);

/// ((lambda_L + sigma2)/M) (sqrt(l1)/(l1+s2) - sqrt(l2)/(l2+s2))^2 2^{-2R/L}
/// for R > R_2(Sigma_Y); 0 otherwise (and always 0 when L = 1).
double gap_lower_bound(const SpectralModel& model, double rate);

/// Gap for the two-source, two-observation case restricted to
/// l1/(l1+s2)^2 <= l2/(l2+s2)^2; throws ConditionViolated otherwise.
/// Zero up to R_2(Sigma_X|Y), a closed form up to R_2(Sigma_Y), and the
/// general gap beyond.
double gap_2d(double lambda1, double lambda2, double sigma2, double rate);

struct MaxGap {
    double R_star;
    double G_star;
};

/// Location and value of the maximal 2x2 gap (it peaks at R_2(Sigma_Y)).
MaxGap max_gap_2d(double lambda1, double lambda2, double sigma2);

struct AmGm {
    double am;
    double gm;
    double reverse_bound;  ///< GM + ((n-1)/n) (max - min), upper bound on AM
    double lower_bound;    ///< GM + (1/n) (sqrt(max) - sqrt(min))^2, lower bound on AM
};

/// Means of a positive list plus the two AM-GM refinements. Throws
/// NonPositiveInput on empty input or any value <= 0.
AmGm am_gm_pair(std::span<const double> values);

struct DistortionPoint {
    double R = 0.0;
    double d_idrf = 1.0;
    double d_ce = 1.0;
    double gap = 0.0;
    double gap_ub = 0.0;
    double gap_lb = 0.0;
    std::size_t k_idrf = 1;
    std::size_t k_ce = 1;
    double theta_idrf = 0.0;
    double theta_ce = 0.0;
};

DistortionPoint evaluate(const SpectralModel& model, double rate);

/// One DistortionPoint per rate. Throws InvalidGrid unless the grid is
/// non-empty, non-negative and strictly increasing.
std::vector<DistortionPoint> sweep(const SpectralModel& model, std::span<const double> rates);

}  // namespace cedrf
