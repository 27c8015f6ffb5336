#include "hsfusion/synthesis.hpp"

#include "hsfusion/error.hpp"
#include "hsfusion/operators.hpp"
#include "hsfusion/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hsfusion {

namespace {

constexpr std::uint64_t kNoiseStream = 0;
constexpr std::uint64_t kHsiNoiseStream = 1;
constexpr std::uint64_t kMsiNoiseStream = 2;
constexpr std::uint64_t kSceneStream = 3;
constexpr std::uint64_t kResponseStream = 4;

SpectralCube add_noise(const SpectralCube& cube, double snr_db, std::uint64_t seed, std::uint64_t stream) {
    if (snr_db == std::numeric_limits<double>::infinity()) return cube;
    if (!std::isfinite(snr_db)) throw InvalidArgument("SNR must be finite or +inf");
    const double n = static_cast<double>(cube.data().size());
    const double sigma = std::sqrt(cube.data().squaredNorm() / (n * std::pow(10.0, snr_db / 10.0)));
    CounterRng rng(seed, stream);
    Matrix noisy = cube.data();
    for (Eigen::Index l = 0; l < noisy.rows(); ++l) {
        for (Eigen::Index p = 0; p < noisy.cols(); ++p) noisy(l, p) += sigma * rng.normal();
    }
    return SpectralCube(std::move(noisy), cube.width(), cube.height());
}

}  // namespace

ConvolutionKernel starck_murtagh_kernel() {
    Eigen::Matrix<double, 5, 1> h;
    h << 1, 4, 6, 4, 1;
    h /= 16.0;
    return ConvolutionKernel(Matrix(h * h.transpose()));
}

SpectralCube add_noise_snr(const SpectralCube& cube, double snr_db, std::uint64_t seed) {
    return add_noise(cube, snr_db, seed, kNoiseStream);
}

ObservationPair simulate_pair(const SpectralCube& truth, const ConvolutionKernel& kernel,
                              const SubsamplingPattern& pattern, const SpectralResponse& response,
                              double snr_h_db, double snr_m_db, std::uint64_t seed) {
    pattern.check_divides(truth.width(), truth.height());
    SpectralCube hsi = subsample_apply(blur_apply(truth, kernel), pattern);
    SpectralCube msi = spectral_apply(truth, response);
    return {add_noise(hsi, snr_h_db, seed, kHsiNoiseStream), add_noise(msi, snr_m_db, seed, kMsiNoiseStream)};
}

SyntheticScene make_synthetic_scene(int bands, int s, int width, int height, std::uint64_t seed) {
    if (bands < 1 || s < 1 || s > bands) throw InvalidArgument("need 1 <= s <= bands");
    if (width < 1 || height < 1) throw InvalidArgument("scene dimensions must be positive");
    CounterRng rng(seed, kSceneStream);

    // Smooth positive signatures: offset plus a few Gaussian bumps.
    Eigen::MatrixXd signatures(bands, s);
    for (int k = 0; k < s; ++k) {
        const double offset = rng.uniform(0.05, 0.2);
        for (int l = 0; l < bands; ++l) signatures(l, k) = offset;
        for (int bump = 0; bump < 3; ++bump) {
            const double amp = rng.uniform(0.1, 0.6);
            const double center = rng.uniform(0.0, bands);
            const double sigma = rng.uniform(bands / 20.0, bands / 6.0) + 0.5;
            for (int l = 0; l < bands; ++l) {
                const double t = (l - center) / sigma;
                signatures(l, k) += amp * std::exp(-0.5 * t * t);
            }
        }
    }

    // Abundances: periodic low-frequency fields plus rectangles shared by all rows.
    const Eigen::Index n = static_cast<Eigen::Index>(width) * height;
    Matrix abundances = Matrix::Constant(s, n, 0.5);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int k = 0; k < s; ++k) {
        for (int wave = 0; wave < 3; ++wave) {
            const double fx = std::floor(rng.uniform(0.0, 4.0));
            const double fy = std::floor(rng.uniform(0.0, 4.0));
            const double phase = rng.uniform(0.0, two_pi);
            const double amp = rng.uniform(0.1, 0.3);
            for (int y = 0; y < height; ++y) {
                for (int x = 0; x < width; ++x) {
                    abundances(k, static_cast<Eigen::Index>(y) * width + x) +=
                        amp * std::cos(two_pi * (fx * x / width + fy * y / height) + phase);
                }
            }
        }
    }
    const int rectangles = 6;
    for (int r = 0; r < rectangles; ++r) {
        const int rw = std::max(2, static_cast<int>(rng.uniform(0.1, 0.45) * width));
        const int rh = std::max(2, static_cast<int>(rng.uniform(0.1, 0.45) * height));
        const int x0 = static_cast<int>(rng.uniform(0.0, std::max(1, width - rw)));
        const int y0 = static_cast<int>(rng.uniform(0.0, std::max(1, height - rh)));
        Eigen::VectorXd step(s);
        for (int k = 0; k < s; ++k) step(k) = rng.uniform(-0.5, 0.5);
        for (int y = y0; y < std::min(height, y0 + rh); ++y) {
            for (int x = x0; x < std::min(width, x0 + rw); ++x) {
                abundances.col(static_cast<Eigen::Index>(y) * width + x) += step;
            }
        }
    }
    abundances = abundances.cwiseMax(0.02) / static_cast<double>(s);

    const Matrix truth = signatures * abundances;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(signatures);
    Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(bands, s);
    Matrix coeffs = basis.transpose() * truth;
    return {SpectralCube(truth, width, height), SubspaceBasis(std::move(basis)),
            SpectralCube(std::move(coeffs), width, height)};
}

SpectralCube make_synthetic_truth(int bands, int s, int width, int height, std::uint64_t seed) {
    return make_synthetic_scene(bands, s, width, height, seed).truth;
}

SpectralResponse make_synthetic_response(int msi_bands, int hsi_bands, std::uint64_t seed) {
    if (msi_bands < 1 || hsi_bands < 1) throw InvalidArgument("band counts must be positive");
    CounterRng rng(seed, kResponseStream);
    Matrix r(msi_bands, hsi_bands);
    const double spacing = static_cast<double>(hsi_bands) / msi_bands;
    for (int m = 0; m < msi_bands; ++m) {
        const double center = (m + 0.5) * spacing + rng.uniform(-0.2, 0.2) * spacing;
        const double width = spacing * rng.uniform(0.4, 0.7) + 0.5;
        for (int l = 0; l < hsi_bands; ++l) {
            const double t = (l - center) / width;
            r(m, l) = std::exp(-0.5 * t * t);
        }
        r.row(m) /= r.row(m).sum();
    }
    return SpectralResponse(std::move(r));
}

}  // namespace hsfusion
