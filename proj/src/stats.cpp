#include "qualgate/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qualgate/error.hpp"

namespace qualgate {

namespace {

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw invalid_param("correlation: series lengths differ");
    if (x.size() < 2)
        throw invalid_param("correlation: need at least 2 observations");
    for (double v : x)
        if (!std::isfinite(v)) throw invalid_param("correlation: non-finite value");
    for (double v : y)
        if (!std::isfinite(v)) throw invalid_param("correlation: non-finite value");
}

} // namespace

double pcc(std::span<const double> x, std::span<const double> y) {
    require_pair(x, y);
    const size_t n = x.size();
    const double mx = mean_of(x), my = mean_of(y);
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if (vx == 0.0 || vy == 0.0)
        throw degenerate_series("pcc: zero standard deviation");
    return (cov / n) / (std::sqrt(vx / n) * std::sqrt(vy / n));
}

std::vector<double> fractional_ranks(std::span<const double> values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double srcc(std::span<const double> x, std::span<const double> y) {
    require_pair(x, y);
    const std::vector<double> rx = fractional_ranks(x);
    const std::vector<double> ry = fractional_ranks(y);
    return pcc(rx, ry);
}

std::vector<double> minmax_normalize(std::span<const double> values) {
    if (values.empty()) throw invalid_param("minmax_normalize: empty input");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi <= lo) throw degenerate_series("minmax_normalize: constant input");
    std::vector<double> out(values.size());
    for (size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / (hi - lo);
    return out;
}

double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw invalid_param("quantile: empty input");
    if (q < 0.0 || q > 1.0) throw invalid_param("quantile: q outside [0,1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * (sorted.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - lo;
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double DensityCurve::trapezoid_integral() const {
    double acc = 0.0;
    for (size_t i = 1; i < grid.size(); ++i)
        acc += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    return acc;
}

double silverman_bandwidth(std::span<const double> samples) {
    const size_t n = samples.size();
    const double m = mean_of(samples);
    double ss = 0.0;
    for (double v : samples) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / (n - 1));
    const double iqr = quantile(samples, 0.75) - quantile(samples, 0.25);

    double spread = std::min(sd, iqr / 1.34);
    if (spread == 0.0) spread = std::max(sd, iqr / 1.34);
    if (spread == 0.0)
        throw degenerate_series("kde: all samples equal, zero bandwidth");
    return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

DensityCurve kde_on_grid(std::span<const double> samples, std::vector<double> grid,
                         double bandwidth) {
    if (bandwidth <= 0.0) throw degenerate_series("kde: non-positive bandwidth");
    DensityCurve curve;
    curve.bandwidth = bandwidth;
    curve.grid = std::move(grid);
    curve.density.resize(curve.grid.size());
    const double inv_h = 1.0 / bandwidth;
    const double norm = inv_h / (samples.size() * std::sqrt(2.0 * M_PI));
    for (size_t g = 0; g < curve.grid.size(); ++g) {
        double acc = 0.0;
        for (double s : samples) {
            const double z = (curve.grid[g] - s) * inv_h;
            acc += std::exp(-0.5 * z * z);
        }
        curve.density[g] = acc * norm;
    }
    const double integral = curve.trapezoid_integral();
    if (integral <= 0.0) throw degenerate_series("kde: zero-mass density");
    for (double& d : curve.density) d /= integral;
    return curve;
}

DensityCurve kde_estimate(std::span<const double> samples, int grid_points) {
    if (samples.size() < 5)
        throw insufficient_samples("kde_estimate: need at least 5 samples");
    if (grid_points < 2) throw invalid_param("kde_estimate: grid too small");
    const double h = silverman_bandwidth(samples);
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it - 3.0 * h;
    const double hi = *hi_it + 3.0 * h;
    std::vector<double> grid(grid_points);
    const double step = (hi - lo) / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i) grid[i] = lo + i * step;
    return kde_on_grid(samples, std::move(grid), h);
}

namespace {

// r(g) = gamma(2/g)^2 / (gamma(1/g) gamma(3/g)) tabulated on [0.2, 10] with
// step 0.001; monotone increasing in g.
struct GgdRatioTable {
    std::vector<double> gamma_grid;
    std::vector<double> ratio;

    GgdRatioTable() {
        const double step = 0.001;
        for (double g = 0.2; g <= 10.0 + 1e-12; g += step) {
            gamma_grid.push_back(g);
            ratio.push_back(std::exp(2.0 * std::lgamma(2.0 / g) - std::lgamma(1.0 / g) -
                                     std::lgamma(3.0 / g)));
        }
    }

    double invert(double rho) const {
        // monotone table: binary search for the closest ratio
        const auto it = std::lower_bound(ratio.begin(), ratio.end(), rho);
        if (it == ratio.begin()) return gamma_grid.front();
        if (it == ratio.end()) return gamma_grid.back();
        const size_t hi = static_cast<size_t>(it - ratio.begin());
        const size_t lo = hi - 1;
        return (rho - ratio[lo] <= ratio[hi] - rho) ? gamma_grid[lo] : gamma_grid[hi];
    }
};

const GgdRatioTable& ggd_table() {
    static const GgdRatioTable table;
    return table;
}

} // namespace

GgdParams fit_ggd(std::span<const double> samples) {
    if (samples.size() < 100)
        throw insufficient_samples("fit_ggd: need at least 100 samples");
    double abs_sum = 0.0, sq_sum = 0.0;
    for (double v : samples) {
        abs_sum += std::fabs(v);
        sq_sum += v * v;
    }
    const double n = static_cast<double>(samples.size());
    const double m1 = abs_sum / n, m2 = sq_sum / n;
    if (m2 == 0.0) throw degenerate_series("fit_ggd: all samples zero");
    GgdParams params;
    params.alpha = ggd_table().invert(m1 * m1 / m2);
    params.sigma = std::sqrt(m2);
    return params;
}

AggdParams fit_aggd(std::span<const double> samples) {
    if (samples.size() < 100)
        throw insufficient_samples("fit_aggd: need at least 100 samples");
    size_t n_neg = 0, n_pos = 0;
    double sq_neg = 0.0, sq_pos = 0.0, abs_sum = 0.0;
    for (double v : samples) {
        if (v < 0.0) {
            ++n_neg;
            sq_neg += v * v;
        } else if (v > 0.0) {
            ++n_pos;
            sq_pos += v * v;
        }
        abs_sum += std::fabs(v);
    }
    if (n_neg == 0 || n_pos == 0)
        throw degenerate_series("fit_aggd: samples do not straddle zero");

    const double side_l = std::sqrt(sq_neg / n_neg);
    const double side_r = std::sqrt(sq_pos / n_pos);
    const double n = static_cast<double>(samples.size());
    const double gamma_hat = side_l / side_r;
    const double r_hat = (abs_sum / n) * (abs_sum / n) / ((sq_neg + sq_pos) / n);
    const double r_norm = r_hat * (gamma_hat * gamma_hat * gamma_hat + 1.0) * (gamma_hat + 1.0) /
                          ((gamma_hat * gamma_hat + 1.0) * (gamma_hat * gamma_hat + 1.0));

    AggdParams params;
    params.alpha = ggd_table().invert(r_norm);
    // convert side deviations to the AGGD scale parameters
    const double conv = std::sqrt(std::exp(std::lgamma(1.0 / params.alpha) -
                                           std::lgamma(3.0 / params.alpha)));
    params.sigma_l = side_l * conv;
    params.sigma_r = side_r * conv;
    params.eta = (params.sigma_r - params.sigma_l) *
                 std::exp(std::lgamma(2.0 / params.alpha) - std::lgamma(1.0 / params.alpha));
    return params;
}

MvgModel mean_and_cov(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw invalid_param("mean_and_cov: no rows");
    const int dim = static_cast<int>(rows.front().size());
    for (const auto& row : rows)
        if (static_cast<int>(row.size()) != dim)
            throw invalid_param("mean_and_cov: inconsistent row widths");

    MvgModel model;
    model.dim = dim;
    model.mean.assign(dim, 0.0);
    for (const auto& row : rows)
        for (int j = 0; j < dim; ++j) model.mean[j] += row[j];
    for (int j = 0; j < dim; ++j) model.mean[j] /= static_cast<double>(rows.size());

    model.cov.assign(static_cast<size_t>(dim) * dim, 0.0);
    if (rows.size() > 1) {
        for (const auto& row : rows)
            for (int i = 0; i < dim; ++i) {
                const double di = row[i] - model.mean[i];
                for (int j = i; j < dim; ++j)
                    model.cov[static_cast<size_t>(i) * dim + j] += di * (row[j] - model.mean[j]);
            }
        const double denom = static_cast<double>(rows.size()) - 1.0;
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                const double v = model.cov[static_cast<size_t>(i) * dim + j] / denom;
                model.cov[static_cast<size_t>(i) * dim + j] = v;
                model.cov[static_cast<size_t>(j) * dim + i] = v;
            }
    }
    return model;
}

MvgModel fit_mvg(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw invalid_param("fit_mvg: no rows");
    const size_t dim = rows.front().size();
    if (rows.size() < 2 * dim)
        throw insufficient_samples("fit_mvg: need at least 2x dimension rows");
    return mean_and_cov(rows);
}

} // namespace qualgate
