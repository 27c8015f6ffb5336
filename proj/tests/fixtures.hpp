#pragma once

// Scene fixtures shared by the calibration tests and the acceptance suite.

#include "hsfusion/cube.hpp"
#include "hsfusion/operators.hpp"
#include "hsfusion/random.hpp"
#include "hsfusion/salsa.hpp"
#include "hsfusion/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace fixture {

using hsfusion::Matrix;

/// Full-rank positive cube whose bands are independent piecewise-smooth
/// fields: an offset, low-frequency cosines and rectangles drawn per band.
/// Its spectra are well conditioned, so a spectral response is identifiable
/// from it at moderate noise levels.
inline hsfusion::SpectralCube decorrelated_truth(int bands, int width, int height, std::uint64_t seed) {
    hsfusion::CounterRng rng(seed, 100);
    const double two_pi = 2.0 * std::numbers::pi;
    Matrix z = Matrix::Constant(bands, static_cast<Eigen::Index>(width) * height, 0.6);
    for (int l = 0; l < bands; ++l) {
        for (int wave = 0; wave < 3; ++wave) {
            const double fx = std::floor(rng.uniform(0.0, 5.0));
            const double fy = std::floor(rng.uniform(0.0, 5.0));
            const double phase = rng.uniform(0.0, two_pi);
            const double amp = rng.uniform(0.1, 0.25);
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x)
                    z(l, static_cast<Eigen::Index>(y) * width + x) +=
                        amp * std::cos(two_pi * (fx * x / width + fy * y / height) + phase);
        }
        for (int r = 0; r < 8; ++r) {
            const int rw = std::max(2, static_cast<int>(rng.uniform(0.05, 0.4) * width));
            const int rh = std::max(2, static_cast<int>(rng.uniform(0.05, 0.4) * height));
            const int x0 = static_cast<int>(rng.uniform(0.0, width - rw));
            const int y0 = static_cast<int>(rng.uniform(0.0, height - rh));
            const double step = rng.uniform(-0.5, 0.5);
            for (int y = y0; y < y0 + rh; ++y)
                for (int x = x0; x < x0 + rw; ++x) z(l, static_cast<Eigen::Index>(y) * width + x) += step;
        }
    }
    return hsfusion::SpectralCube(Matrix(z.cwiseMax(0.05)), width, height);
}

/// Inputs simulated from a truth Z = E X with the given noise levels.
inline hsfusion::FusionInputs consistent_inputs(const Matrix& e, const Matrix& x, int w, int h,
                                                const hsfusion::ConvolutionKernel& kernel,
                                                const hsfusion::SubsamplingPattern& pattern,
                                                const hsfusion::SpectralResponse& response, double snr_h,
                                                double snr_m, std::uint64_t seed) {
    const hsfusion::SpectralCube truth(Matrix(e * x), w, h);
    hsfusion::ObservationPair pair = hsfusion::simulate_pair(truth, kernel, pattern, response, snr_h, snr_m, seed);
    return {std::move(pair.hsi), std::move(pair.msi), hsfusion::SubspaceBasis(Eigen::MatrixXd(e)),
            kernel,
            pattern,
            response};
}

/// Gradient of the quadratic (lambda_phi = 0) objective and the data
/// right-hand side, both computed with the library's forward/adjoint operators.
inline std::pair<Matrix, Matrix> quadratic_gradient(const Matrix& x, const hsfusion::FusionInputs& in,
                                                    double lambda_m) {
    using namespace hsfusion;
    const Grid g = in.grid();
    const Eigen::MatrixXd& e = in.basis.matrix();
    const Eigen::MatrixXd re = in.response.matrix() * e;
    const auto back_project = [&](const Matrix& low) {
        return Matrix(e.transpose() * blur_adjoint_rows(subsample_adjoint_rows(low, g, in.pattern), g, in.kernel));
    };
    const Matrix rhs = back_project(in.hsi.data()) + lambda_m * re.transpose() * in.msi.data();
    const Matrix hsi_fit = e * subsample_rows(blur_rows(x, g, in.kernel), g, in.pattern);
    const Matrix normal = back_project(hsi_fit) + lambda_m * (re.transpose() * re) * x;
    return {Matrix(normal - rhs), rhs};
}

}  // namespace fixture
