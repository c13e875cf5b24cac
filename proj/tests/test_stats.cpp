#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qualgate/error.hpp"
#include "qualgate/stats.hpp"
#include "support/synth.hpp"

using namespace qualgate;
using testsupport::Sampler;

TEST_CASE("pcc hand cases") {
    CHECK(pcc(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pcc(std::vector<double>{1, 2, 3}, std::vector<double>{6, 4, 2}) ==
          doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(pcc(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}) ==
          doctest::Approx(0.8).epsilon(1e-12));

    CHECK_THROWS_AS(pcc(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), Error);
    CHECK_THROWS_AS(pcc(std::vector<double>{1}, std::vector<double>{1}), Error);
    CHECK_THROWS_AS(pcc(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("srcc hand cases and ties") {
    CHECK(srcc(std::vector<double>{1, 5, 9}, std::vector<double>{2, 3, 100}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(srcc(std::vector<double>{1, 2, 3}, std::vector<double>{9, 1, 5}) ==
          doctest::Approx(-0.5).epsilon(1e-12));

    // ties in y -> ranks [1.5, 1.5, 3]
    const std::vector<double> tied_ranks = fractional_ranks(std::vector<double>{1, 1, 2});
    CHECK(tied_ranks == std::vector<double>{1.5, 1.5, 3.0});
    CHECK(srcc(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 2}) ==
          doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(srcc(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4}), Error);
}

TEST_CASE("pcc and srcc match the definitional oracles") {
    Sampler sampler(1234);
    for (int trial = 0; trial < 250; ++trial) {
        const size_t n = 2 + sampler.raw().below(199);
        std::vector<double> x(n), y(n);
        const bool with_ties = trial % 3 == 0;
        for (size_t i = 0; i < n; ++i) {
            x[i] = with_ties ? static_cast<double>(sampler.raw().below(6)) : sampler.normal();
            y[i] = with_ties ? static_cast<double>(sampler.raw().below(6)) : sampler.normal();
        }
        const double ox = testsupport::pcc_oracle(x, y);
        if (!std::isfinite(ox)) continue; // degenerate draw
        CHECK(pcc(x, y) == doctest::Approx(ox).epsilon(1e-12));
        CHECK(srcc(x, y) == doctest::Approx(testsupport::srcc_oracle(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("pcc affine invariance, srcc monotone invariance") {
    Sampler sampler(99);
    std::vector<double> x(50), y(50);
    for (size_t i = 0; i < x.size(); ++i) {
        x[i] = sampler.normal();
        y[i] = sampler.normal() + 0.5 * x[i];
    }
    const double base = pcc(x, y);
    std::vector<double> scaled = x;
    for (double& v : scaled) v = 3.7 * v + 11.0;
    CHECK(pcc(scaled, y) == doctest::Approx(base).epsilon(1e-12));

    const double rank_base = srcc(x, y);
    std::vector<double> warped = x;
    for (double& v : warped) v = std::exp(v); // strictly monotone
    CHECK(srcc(warped, y) == doctest::Approx(rank_base).epsilon(1e-12));

    CHECK(srcc(x, x) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> reversed_order = x;
    for (double& v : reversed_order) v = -v;
    CHECK(srcc(x, reversed_order) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("minmax_normalize") {
    CHECK(minmax_normalize(std::vector<double>{2, 4, 6}) == std::vector<double>{0.0, 0.5, 1.0});
    const std::vector<double> unit = {0.0, 0.25, 1.0};
    CHECK(minmax_normalize(unit) == unit);
    // 34.4 inside [10, 50]
    const std::vector<double> ctx = {10.0, 34.4, 50.0};
    CHECK(minmax_normalize(ctx)[1] == doctest::Approx(0.61).epsilon(1e-12));
    CHECK_THROWS_AS(minmax_normalize(std::vector<double>{3, 3, 3}), Error);
}

TEST_CASE("kde against the analytic normal pdf") {
    Sampler sampler(2025);
    std::vector<double> samples(10000);
    for (double& v : samples) v = sampler.normal();
    const DensityCurve curve = kde_estimate(samples);

    CHECK(curve.trapezoid_integral() == doctest::Approx(1.0).epsilon(1e-3));
    for (double d : curve.density) CHECK(d >= 0.0);

    // density at the grid point nearest 0
    size_t nearest = 0;
    for (size_t i = 1; i < curve.grid.size(); ++i)
        if (std::fabs(curve.grid[i]) < std::fabs(curve.grid[nearest])) nearest = i;
    CHECK(std::fabs(curve.density[nearest] - 0.3989) < 0.02);
}

TEST_CASE("kde translation equivariance") {
    Sampler sampler(77);
    std::vector<double> samples(500);
    for (double& v : samples) v = sampler.laplace(2.0);
    const DensityCurve base = kde_estimate(samples);

    const double shift = 13.25;
    std::vector<double> shifted = samples;
    for (double& v : shifted) v += shift;
    const DensityCurve moved = kde_estimate(shifted);

    CHECK(moved.bandwidth == doctest::Approx(base.bandwidth).epsilon(1e-12));
    for (size_t i = 0; i < base.grid.size(); ++i) {
        CHECK(moved.grid[i] - base.grid[i] == doctest::Approx(shift).epsilon(1e-9));
        CHECK(moved.density[i] == doctest::Approx(base.density[i]).epsilon(1e-9));
    }
}

TEST_CASE("kde errors") {
    CHECK_THROWS_AS(kde_estimate(std::vector<double>{1, 2, 3, 4}), Error);
    CHECK_THROWS_AS(kde_estimate(std::vector<double>{5, 5, 5, 5, 5}), Error);
    // heavy ties but nonzero spread must still work
    const std::vector<double> ties = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1};
    CHECK_NOTHROW(kde_estimate(ties));
}

TEST_CASE("fit_ggd recovers known shapes") {
    Sampler sampler(31337);
    std::vector<double> gauss(100000);
    for (double& v : gauss) v = sampler.normal();
    const GgdParams g = fit_ggd(gauss);
    CHECK(std::fabs(g.alpha - 2.0) < 0.1);
    CHECK(g.sigma == doctest::Approx(1.0).epsilon(0.02));

    std::vector<double> laplace(100000);
    for (double& v : laplace) v = sampler.laplace();
    const GgdParams l = fit_ggd(laplace);
    CHECK(std::fabs(l.alpha - 1.0) < 0.1);

    std::vector<double> doubled = gauss;
    for (double& v : doubled) v *= 2.0;
    const GgdParams d = fit_ggd(doubled);
    CHECK(std::fabs(d.alpha - g.alpha) <= 0.02);
    CHECK(d.sigma == doctest::Approx(2.0 * g.sigma).epsilon(0.02));

    CHECK_THROWS_AS(fit_ggd(std::vector<double>(200, 0.0)), Error);
    CHECK_THROWS_AS(fit_ggd(std::vector<double>(50, 1.0)), Error);
}

TEST_CASE("ggd moment ratio is monotone over the gamma grid") {
    // base fact behind the grid inversion
    double prev = 0.0;
    for (double g = 0.2; g <= 10.0; g += 0.001) {
        const double r = std::exp(2.0 * std::lgamma(2.0 / g) - std::lgamma(1.0 / g) -
                                  std::lgamma(3.0 / g));
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("fit_aggd symmetry and recovery") {
    Sampler sampler(555);
    std::vector<double> gauss(100000);
    for (double& v : gauss) v = sampler.normal();
    const AggdParams sym = fit_aggd(gauss);
    CHECK(std::fabs(sym.sigma_l - sym.sigma_r) / sym.sigma_r < 0.03);
    CHECK(std::fabs(sym.eta) < 0.02);

    std::vector<double> mirrored = gauss;
    for (double& v : mirrored) v = -v;
    const AggdParams mir = fit_aggd(mirrored);
    CHECK(mir.sigma_l == doctest::Approx(sym.sigma_r).epsilon(1e-12));
    CHECK(mir.sigma_r == doctest::Approx(sym.sigma_l).epsilon(1e-12));
    CHECK(mir.eta == doctest::Approx(-sym.eta).epsilon(1e-9));

    std::vector<double> skewed(100000);
    for (double& v : skewed) v = sampler.aggd(1.5, 1.0, 2.0);
    const AggdParams rec = fit_aggd(skewed);
    CHECK(std::fabs(rec.alpha - 1.5) < 0.15);
    CHECK(rec.eta > 0.0); // right-heavy input
    CHECK(rec.sigma_r > rec.sigma_l);

    CHECK_THROWS_AS(fit_aggd(std::vector<double>(500, 1.0)), Error);
}

TEST_CASE("fit_mvg") {
    std::vector<std::vector<double>> equal_rows(80, std::vector<double>{1.0, -2.0, 0.5});
    const MvgModel constant = fit_mvg(equal_rows);
    CHECK(constant.mean == std::vector<double>{1.0, -2.0, 0.5});
    for (double v : constant.cov) CHECK(v == 0.0);

    Sampler sampler(808);
    std::vector<std::vector<double>> rows(100000, std::vector<double>(36));
    for (auto& row : rows)
        for (double& v : row) v = sampler.normal();
    const MvgModel model = fit_mvg(rows);
    for (int i = 0; i < 36; ++i) {
        CHECK(std::fabs(model.mean[i]) < 0.02);
        for (int j = 0; j < 36; ++j) {
            const double expected = i == j ? 1.0 : 0.0;
            CHECK(std::fabs(model.cov_at(i, j) - expected) < 0.05);
            CHECK(std::fabs(model.cov_at(i, j) - model.cov_at(j, i)) < 1e-9);
        }
    }

    CHECK_THROWS_AS(fit_mvg(std::vector<std::vector<double>>(71, std::vector<double>(36, 0.0))),
                    Error);
}
