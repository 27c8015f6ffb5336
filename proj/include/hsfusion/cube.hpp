#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>

namespace hsfusion {

/// Dense real matrix with contiguous rows. A row of a cube matrix is one band.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// A spectral image stored as bands x pixels. Pixels of a band are row-major
/// (x fastest), so pixel (x, y) sits in column y * width + x.
class SpectralCube {
public:
    SpectralCube() = default;

    /// Zero-filled cube.
    SpectralCube(int bands, int width, int height);

    /// Takes ownership of `data`; throws GeometryError on a shape mismatch and
    /// NumericalError (naming the band and pixel) on a non-finite value.
    SpectralCube(Matrix data, int width, int height);

    int bands() const { return static_cast<int>(data_.rows()); }
    int width() const { return width_; }
    int height() const { return height_; }
    Eigen::Index pixels() const { return data_.cols(); }

    const Matrix& data() const { return data_; }

    auto band(int l) const { return data_.row(l); }

    double at(int l, int x, int y) const { return data_(l, static_cast<Eigen::Index>(y) * width_ + x); }

    bool same_geometry(const SpectralCube& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    Matrix data_;
    int width_ = 0;
    int height_ = 0;
};

/// Point spread function with odd side length. Taps are normalized to unit sum
/// on construction; the center tap is at ((k-1)/2, (k-1)/2).
class ConvolutionKernel {
public:
    explicit ConvolutionKernel(Matrix taps);

    /// Single unit tap.
    static ConvolutionKernel delta();

    int size() const { return static_cast<int>(taps_.rows()); }
    int radius() const { return (size() - 1) / 2; }
    const Matrix& taps() const { return taps_; }
    double tap(int row, int col) const { return taps_(row, col); }

private:
    Matrix taps_;
};

/// Uniform decimation keeping pixels with x = offset_x (mod factor) and
/// y = offset_y (mod factor).
struct SubsamplingPattern {
    int factor = 1;
    int offset_x = 0;
    int offset_y = 0;

    SubsamplingPattern() = default;
    SubsamplingPattern(int factor, int offset_x = 0, int offset_y = 0);

    /// Throws GeometryError unless both dimensions are divisible by factor.
    void check_divides(int width, int height) const;
};

/// L_m x L_h matrix whose rows are multispectral band responses.
class SpectralResponse {
public:
    explicit SpectralResponse(Matrix matrix);

    static SpectralResponse identity(int bands);

    int msi_bands() const { return static_cast<int>(matrix_.rows()); }
    int hsi_bands() const { return static_cast<int>(matrix_.cols()); }
    const Matrix& matrix() const { return matrix_; }

private:
    Matrix matrix_;
};

/// L_h x s basis of the spectral signal subspace.
class SubspaceBasis {
public:
    SubspaceBasis() = default;
    explicit SubspaceBasis(Eigen::MatrixXd matrix);

    int bands() const { return static_cast<int>(matrix_.rows()); }
    int dim() const { return static_cast<int>(matrix_.cols()); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    /// Largest absolute deviation of E^T E from the identity.
    double orthonormality_error() const;

private:
    Eigen::MatrixXd matrix_;
};

}  // namespace hsfusion
