#pragma once

// Least-squares fits of finite-size energy data:
//   Delta E(N) = a1 - a2/N
//   W(N)       = a1 - a2/N - a3 log^2(a4 N)/N
//   Q(N)       = a3 log^2(a4 N)/N
// with one parameter set shared by the three curves.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ergo::fit {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

enum class SeriesKind { excess, ergotropy, bound };

/// "deltaE", "W", "Q".
std::string to_string(SeriesKind kind);
SeriesKind parse_series_kind(const std::string& label);

struct SeriesPoint {
    double n = 0.0;
    double value = 0.0;
};

struct Series {
    SeriesKind label = SeriesKind::excess;
    std::vector<SeriesPoint> points;

    /// >= 2 points, N strictly increasing and positive.
    void validate() const;
};

struct FitParams {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;  // > 0
    double alpha4 = 0.0;  // > 0
    double residual_norm = 0.0;
    double r2_excess = 0.0;
    double r2_ergotropy = 0.0;
    double r2_bound = 0.0;
    std::size_t iterations = 0;
    double start_alpha4 = 0.0;
};

double model_excess(const FitParams& p, double n);
double model_ergotropy(const FitParams& p, double n);
double model_bound(const FitParams& p, double n);

inline constexpr std::array<double, 5> kDefaultAlpha4Starts{0.5, 1.0, 2.0, 5.0, 10.0};

/// Levenberg-Marquardt on (a1, a2, log a3, log a4) from each a4 start,
/// keeping the lowest residual. The three series must share one N grid.
/// Throws FitError if no start converges.
FitParams shared_fit(std::span<const Series> series,
                     std::span<const double> alpha4_starts = kDefaultAlpha4Starts);

struct LogGammaFit {
    double log_gamma = 0.0;
    double residual = 0.0;  // rms of sqrt(6 pi N Q) - (log gamma + log N)
};

/// Fits Q = log^2(gamma N) / (6 pi N) for log gamma. Needs >= 3 points, all
/// Q > 0.
LogGammaFit fit_log_gamma(const Series& bound);

}  // namespace ergo::fit
