#include "hsfusion/calibration.hpp"

#include "hsfusion/error.hpp"
#include "hsfusion/operators.hpp"

#include <cmath>

namespace hsfusion {

namespace {

int wrap(int i, int n) {
    const int r = i % n;
    return r < 0 ? r + n : r;
}

// Column t = a * k + c holds M(shift_t(Y_m)) flattened band-major, so that
// G * taps = vec(M(Y_m * b)) for the cyclic convolution used by blur_rows.
Eigen::MatrixXd tap_design(const SpectralCube& msi, const SubsamplingPattern& pattern, int k) {
    const int w = msi.width();
    const int h = msi.height();
    const int r = (k - 1) / 2;
    const auto sampled = sampled_pixels({w, h}, pattern);
    const auto nh = static_cast<Eigen::Index>(sampled.size());
    Eigen::MatrixXd g(msi.bands() * nh, k * k);
    for (int a = 0; a < k; ++a) {
        for (int c = 0; c < k; ++c) {
            const int dy = a - r;
            const int dx = c - r;
            for (int l = 0; l < msi.bands(); ++l) {
                for (Eigen::Index j = 0; j < nh; ++j) {
                    const auto p = sampled[static_cast<std::size_t>(j)];
                    const int x = static_cast<int>(p % w);
                    const int y = static_cast<int>(p / w);
                    g(l * nh + j, a * k + c) = msi.at(l, wrap(x - dx, w), wrap(y - dy, h));
                }
            }
        }
    }
    return g;
}

// Squared horizontal and vertical first differences between taps.
Eigen::MatrixXd smoothness_gram(int k) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * k * (k - 1), k * k);
    int row = 0;
    for (int a = 0; a < k; ++a) {
        for (int c = 0; c + 1 < k; ++c) {
            d(row, a * k + c) = -1.0;
            d(row++, a * k + c + 1) = 1.0;
        }
    }
    for (int a = 0; a + 1 < k; ++a) {
        for (int c = 0; c < k; ++c) {
            d(row, a * k + c) = -1.0;
            d(row++, (a + 1) * k + c) = 1.0;
        }
    }
    return d.transpose() * d;
}

Eigen::VectorXd gaussian_taps(int k) {
    const double sigma = k / 4.0;
    const int r = (k - 1) / 2;
    Eigen::VectorXd taps(k * k);
    for (int a = 0; a < k; ++a) {
        for (int c = 0; c < k; ++c) {
            taps(a * k + c) = std::exp(-0.5 * ((a - r) * (a - r) + (c - r) * (c - r)) / (sigma * sigma));
        }
    }
    return taps / taps.sum();
}

}  // namespace

CalibrationResult calibrate(const SpectralCube& hsi, const SpectralCube& msi,
                            const SubsamplingPattern& pattern, const CalibrationOptions& options) {
    const int k = options.kernel_support;
    if (k < 1 || k % 2 == 0) throw InvalidArgument("kernel support must be a positive odd integer");
    if (k > msi.width() || k > msi.height()) throw GeometryError("kernel support exceeds the MSI grid");
    pattern.check_divides(msi.width(), msi.height());
    if (hsi.width() * pattern.factor != msi.width() || hsi.height() * pattern.factor != msi.height()) {
        throw GeometryError("HSI grid times factor does not match the MSI grid");
    }
    if (options.smooth_b < 0) throw InvalidArgument("smooth_b must be >= 0");
    if (options.max_alt_iters < 1) throw InvalidArgument("max_alt_iters must be >= 1");

    const Matrix& yh = hsi.data();
    const double ridge = options.ridge_r.value_or(1e-6 * yh.squaredNorm());
    if (!(ridge >= 0)) throw InvalidArgument("ridge_r must be >= 0");

    const int lm = msi.bands();
    const int lh = hsi.bands();
    const Eigen::Index nh = hsi.pixels();

    const Eigen::MatrixXd design = tap_design(msi, pattern, k);
    const Eigen::MatrixXd design_gram = design.transpose() * design;
    const Eigen::MatrixXd smooth_gram = options.smooth_b * smoothness_gram(k);

    const Eigen::MatrixXd yh_gram = yh * yh.transpose() + ridge * Eigen::MatrixXd::Identity(lh, lh);
    const Eigen::LDLT<Eigen::MatrixXd> yh_solver(yh_gram);
    if (yh_solver.info() != Eigen::Success || !yh_solver.isPositive() ||
        yh_solver.vectorD().minCoeff() <= 1e-13 * yh_solver.vectorD().maxCoeff()) {
        throw NumericalError("response step is rank deficient; increase ridge_r");
    }

    // KKT system of the unit-sum constrained tap step.
    const int kk = k * k;
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(kk + 1, kk + 1);
    kkt.topLeftCorner(kk, kk) = design_gram + smooth_gram;
    kkt.block(0, kk, kk, 1).setOnes();
    kkt.block(kk, 0, 1, kk).setOnes();
    const Eigen::FullPivLU<Eigen::MatrixXd> kkt_solver(kkt);
    if (!kkt_solver.isInvertible()) throw NumericalError("kernel step is rank deficient; MSI lacks texture");

    Eigen::VectorXd taps = gaussian_taps(k);
    Eigen::MatrixXd response = Eigen::MatrixXd::Constant(lm, lh, 1.0 / lh);

    const auto target_of = [&](const Eigen::VectorXd& t) {
        const Eigen::VectorXd flat = design * t;
        return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                   flat.data(), lm, nh)
            .eval();
    };
    const auto cost = [&](const Eigen::MatrixXd& rr, const Eigen::VectorXd& t) {
        const double fit = (rr * yh - target_of(t)).squaredNorm();
        return fit + ridge * rr.squaredNorm() + t.dot(smooth_gram * t);
    };

    CalibrationResult result{ConvolutionKernel::delta(), SpectralResponse::identity(1), {}, 0, ridge};
    result.residual_history.push_back(cost(response, taps));
    const double initial = result.residual_history.back();
    double previous = initial;
    for (int it = 1; it <= options.max_alt_iters; ++it) {
        // R-step: R (Y_h Y_h^T + ridge I) = T Y_h^T.
        const Eigen::MatrixXd rhs = target_of(taps) * yh.transpose();
        response = yh_solver.solve(rhs.transpose()).transpose();
        result.residual_history.push_back(cost(response, taps));

        // b-step: stacked rows of R Y_h as the target.
        const Matrix ryh = response * yh;
        const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(ryh.data(), ryh.size());
        Eigen::VectorXd kkt_rhs(kk + 1);
        kkt_rhs.head(kk) = design.transpose() * a;
        kkt_rhs(kk) = 1.0;
        taps = kkt_solver.solve(kkt_rhs).head(kk);
        taps /= taps.sum();
        result.residual_history.push_back(cost(response, taps));

        result.alternations = it;
        const double current = result.residual_history.back();
        if (!std::isfinite(current)) throw NumericalError("calibration diverged");
        if (current <= 1e-28 * initial) break;
        if (previous - current < options.rel_tol * previous) break;
        previous = current;
    }

    Matrix kernel_taps(k, k);
    for (int a = 0; a < k; ++a) {
        for (int c = 0; c < k; ++c) kernel_taps(a, c) = taps(a * k + c);
    }
    result.kernel = ConvolutionKernel(std::move(kernel_taps));
    result.response = SpectralResponse(Matrix(response.cwiseMax(0.0)));
    return result;
}

}  // namespace hsfusion
