#include "hsfusion/cube.hpp"

#include "hsfusion/error.hpp"

#include <cmath>
#include <sstream>

namespace hsfusion {

SpectralCube::SpectralCube(int bands, int width, int height)
    : SpectralCube(Matrix::Zero(bands, static_cast<Eigen::Index>(width) * height), width, height) {}

SpectralCube::SpectralCube(Matrix data, int width, int height)
    : data_(std::move(data)), width_(width), height_(height) {
    if (width <= 0 || height <= 0 || data_.rows() <= 0) {
        throw GeometryError("cube dimensions must be positive");
    }
    if (data_.cols() != static_cast<Eigen::Index>(width) * height) {
        std::ostringstream msg;
        msg << "cube data has " << data_.cols() << " columns, expected " << width << "x" << height;
        throw GeometryError(msg.str());
    }
    if (!data_.allFinite()) {
        for (Eigen::Index l = 0; l < data_.rows(); ++l) {
            for (Eigen::Index j = 0; j < data_.cols(); ++j) {
                if (!std::isfinite(data_(l, j))) {
                    std::ostringstream msg;
                    msg << "non-finite value at band " << l << ", pixel (" << j % width << ", "
                        << j / width << ")";
                    throw NumericalError(msg.str());
                }
            }
        }
    }
}

ConvolutionKernel::ConvolutionKernel(Matrix taps) : taps_(std::move(taps)) {
    if (taps_.rows() != taps_.cols() || taps_.rows() % 2 == 0) {
        throw GeometryError("kernel must be square with odd side length");
    }
    if (!taps_.allFinite()) throw NumericalError("kernel has non-finite taps");
    const double sum = taps_.sum();
    if (std::abs(sum) < 1e-300) throw NumericalError("kernel taps sum to zero; cannot normalize");
    taps_ /= sum;
}

ConvolutionKernel ConvolutionKernel::delta() {
    return ConvolutionKernel(Matrix::Ones(1, 1));
}

SubsamplingPattern::SubsamplingPattern(int f, int ox, int oy) : factor(f), offset_x(ox), offset_y(oy) {
    if (factor < 1) throw InvalidArgument("subsampling factor must be >= 1");
    if (ox < 0 || ox >= factor || oy < 0 || oy >= factor) {
        throw InvalidArgument("subsampling offsets must lie in [0, factor)");
    }
}

void SubsamplingPattern::check_divides(int width, int height) const {
    if (width % factor != 0 || height % factor != 0) {
        std::ostringstream msg;
        msg << "image size " << width << "x" << height << " is not divisible by subsampling factor "
            << factor;
        throw GeometryError(msg.str());
    }
}

SpectralResponse::SpectralResponse(Matrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.cols() == 0) throw GeometryError("empty spectral response");
    if (!matrix_.allFinite()) throw NumericalError("spectral response has non-finite entries");
    for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
        if ((matrix_.row(r).array() == 0.0).all()) {
            throw InvalidArgument("spectral response row " + std::to_string(r) + " is all zero");
        }
    }
}

SpectralResponse SpectralResponse::identity(int bands) {
    return SpectralResponse(Matrix::Identity(bands, bands));
}

SubspaceBasis::SubspaceBasis(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.cols() == 0) throw GeometryError("empty subspace basis");
    if (matrix_.cols() > matrix_.rows()) throw GeometryError("basis has more columns than bands");
    if (!matrix_.allFinite()) throw NumericalError("subspace basis has non-finite entries");
}

double SubspaceBasis::orthonormality_error() const {
    const Eigen::MatrixXd gram = matrix_.transpose() * matrix_;
    return (gram - Eigen::MatrixXd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

}  // namespace hsfusion
