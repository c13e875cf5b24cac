#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "nss_internal.hpp"
#include "qualgate/error.hpp"
#include "qualgate/metrics.hpp"

namespace qualgate {

namespace {

GrayImage extract_patch(const GrayImage& img, int y0, int x0, int size) {
    GrayImage patch(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) patch.at(y, x) = img.at(y0 + y, x0 + x);
    return patch;
}

std::vector<double> to_row(const std::array<double, 36>& features) {
    return {features.begin(), features.end()};
}

// Feature rows for every whole patch; when sharpness selection is on, only
// patches whose mean local sigma reaches keep_fraction of the image maximum
// survive.
std::vector<std::vector<double>> patch_feature_rows(const GrayImage& img, int patch_size,
                                                    double keep_fraction, bool select_sharp) {
    const int rows = img.height / patch_size;
    const int cols = img.width / patch_size;
    if (rows < 1 || cols < 1)
        throw invalid_size("niqe: image smaller than one patch");

    std::vector<double> sharpness(static_cast<size_t>(rows) * cols, 0.0);
    if (select_sharp) {
        GrayImage mu, sigma;
        nss::local_mean_sigma(img, mu, sigma);
        for (int py = 0; py < rows; ++py)
            for (int px = 0; px < cols; ++px) {
                double acc = 0.0;
                for (int y = 0; y < patch_size; ++y)
                    for (int x = 0; x < patch_size; ++x)
                        acc += sigma.at(py * patch_size + y, px * patch_size + x);
                sharpness[static_cast<size_t>(py) * cols + px] =
                    acc / (static_cast<double>(patch_size) * patch_size);
            }
    }
    const double max_sharpness =
        select_sharp ? *std::max_element(sharpness.begin(), sharpness.end()) : 0.0;

    std::vector<std::vector<double>> feature_rows;
    for (int py = 0; py < rows; ++py)
        for (int px = 0; px < cols; ++px) {
            if (select_sharp &&
                sharpness[static_cast<size_t>(py) * cols + px] < keep_fraction * max_sharpness)
                continue;
            const GrayImage patch = extract_patch(img, py * patch_size, px * patch_size, patch_size);
            feature_rows.push_back(to_row(brisque_features(patch)));
        }
    return feature_rows;
}

} // namespace

PristineModel niqe_fit(const std::vector<GrayImage>& corpus, int patch_size,
                       double sharpness_keep_fraction) {
    if (patch_size < 32) throw invalid_param("niqe_fit: patch size below 32");
    if (sharpness_keep_fraction <= 0.0 || sharpness_keep_fraction > 1.0)
        throw invalid_param("niqe_fit: keep fraction outside (0,1]");
    if (corpus.size() < 10)
        throw insufficient_samples("niqe_fit: need at least 10 corpus images");

    std::vector<std::vector<double>> rows;
    for (const GrayImage& img : corpus) {
        auto img_rows = patch_feature_rows(img, patch_size, sharpness_keep_fraction, true);
        rows.insert(rows.end(), img_rows.begin(), img_rows.end());
    }
    if (rows.size() < 72)
        throw insufficient_samples("niqe_fit: fewer than 72 selected patches");

    PristineModel model;
    model.patch_size = patch_size;
    model.sharpness_keep_fraction = sharpness_keep_fraction;
    model.mvg = fit_mvg(rows);
    return model;
}

double niqe_score(const GrayImage& img, const PristineModel& model) {
    const auto rows = patch_feature_rows(img, model.patch_size, 0.0, false);
    if (rows.size() < 2)
        throw insufficient_samples("niqe_score: image yields fewer than 2 patches");
    const MvgModel image_mvg = mean_and_cov(rows);

    const int dim = model.mvg.dim;
    if (image_mvg.dim != dim) throw invalid_param("niqe_score: dimension mismatch");

    Eigen::VectorXd diff(dim);
    Eigen::MatrixXd pooled(dim, dim);
    for (int i = 0; i < dim; ++i) {
        diff(i) = model.mvg.mean[i] - image_mvg.mean[i];
        for (int j = 0; j < dim; ++j)
            pooled(i, j) = 0.5 * (model.mvg.cov_at(i, j) + image_mvg.cov_at(i, j));
    }

    // pseudo-inverse via eigendecomposition; rank-deficient pooled
    // covariances (few patches) just drop the null directions
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(pooled);
    const Eigen::VectorXd& evals = eig.eigenvalues();
    const double tol = std::max(evals.cwiseAbs().maxCoeff(), 0.0) * 1e-10;
    Eigen::VectorXd inv_evals(dim);
    for (int i = 0; i < dim; ++i) inv_evals(i) = evals(i) > tol ? 1.0 / evals(i) : 0.0;
    const Eigen::VectorXd projected = eig.eigenvectors().transpose() * diff;
    const double quad = (projected.array().square() * inv_evals.array()).sum();
    return std::sqrt(std::max(0.0, quad));
}

} // namespace qualgate
