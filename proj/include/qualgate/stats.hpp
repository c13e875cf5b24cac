#pragma once

#include <span>
#include <vector>

namespace qualgate {

/// Paired (index, score) observations for correlation runs.
struct ScoreSeries {
    std::vector<double> ids;
    std::vector<double> values;
};

/// Pearson correlation, population covariance / sd convention (the divisor
/// cancels in the ratio). Throws DegenerateSeries when either side has zero
/// spread.
double pcc(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation: pcc of fractional (average-tie) ranks.
double srcc(std::span<const double> x, std::span<const double> y);

/// 1-based fractional ranks; tied values share the average of their ranks.
std::vector<double> fractional_ranks(std::span<const double> values);

/// (v - min) / (max - min); throws DegenerateSeries on constant input.
std::vector<double> minmax_normalize(std::span<const double> values);

/// Linear-interpolation quantile of a sorted copy, q in [0,1].
double quantile(std::span<const double> values, double q);

/// Gaussian-kernel density estimate on a uniform grid.
struct DensityCurve {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0.0;

    double trapezoid_integral() const;
};

/// Silverman bandwidth: 0.9 * min(sd, IQR/1.34) * n^(-1/5). When exactly one
/// of the two spread estimates collapses to zero (heavy ties), the other is
/// used instead; only fully degenerate samples are an error.
double silverman_bandwidth(std::span<const double> samples);

/// KDE with Silverman bandwidth on 512 points spanning [min-3h, max+3h].
/// The curve is renormalized so its trapezoid integral is exactly 1, which
/// keeps the normalization contract even for tightly clustered samples.
DensityCurve kde_estimate(std::span<const double> samples, int grid_points = 512);

/// KDE on a caller-provided grid with an explicit bandwidth (shared-grid
/// two-class comparisons). Renormalized as above.
DensityCurve kde_on_grid(std::span<const double> samples, std::vector<double> grid,
                         double bandwidth);

/// Generalized Gaussian: shape alpha, scale sigma = sqrt of second moment.
struct GgdParams {
    double alpha = 0.0;
    double sigma = 0.0;
};

/// Asymmetric generalized Gaussian; sigma_l/sigma_r are the left/right scale
/// parameters and eta = gamma(2/a)/gamma(1/a) * (sigma_r - sigma_l) the mean
/// term.
struct AggdParams {
    double alpha = 0.0;
    double eta = 0.0;
    double sigma_l = 0.0;
    double sigma_r = 0.0;
};

/// Multivariate Gaussian fit: sample mean + sample covariance (n-1 divisor),
/// covariance symmetrized. cov is row-major dim x dim.
struct MvgModel {
    int dim = 0;
    std::vector<double> mean;
    std::vector<double> cov;

    double cov_at(int i, int j) const { return cov[static_cast<size_t>(i) * dim + j]; }
};

/// Moment-matching GGD fit: rho = (E|x|)^2 / E[x^2] inverted against
/// r(g) = gamma(2/g)^2 / (gamma(1/g) gamma(3/g)) over a 0.001-step grid on
/// [0.2, 10]. Grid lookup keeps the inversion monotone and reproducible.
GgdParams fit_ggd(std::span<const double> samples);

/// Side-moment AGGD fit (separate left/right second moments, same gamma-grid
/// inversion).
AggdParams fit_aggd(std::span<const double> samples);

/// Requires at least 2*dim rows.
MvgModel fit_mvg(const std::vector<std::vector<double>>& rows);

/// Mean + covariance without the 2*dim row gate, for per-image models whose
/// rank deficiency is handled downstream by a pseudo-inverse.
MvgModel mean_and_cov(const std::vector<std::vector<double>>& rows);

} // namespace qualgate
