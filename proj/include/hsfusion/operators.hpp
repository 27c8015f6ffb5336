#pragma once

#include "hsfusion/cube.hpp"
#include "hsfusion/fft.hpp"

#include <vector>

namespace hsfusion {

/// Image grid shared by every row of a bands x pixels matrix.
struct Grid {
    int width = 0;
    int height = 0;

    Eigen::Index pixels() const { return static_cast<Eigen::Index>(width) * height; }
    bool operator==(const Grid&) const = default;
};

inline Grid grid_of(const SpectralCube& cube) { return {cube.width(), cube.height()}; }

enum class Difference { horizontal, vertical };

/// DFT eigenvalues of a cyclic convolution on a grid: applying the operator
/// equals inverse_dft(values * dft(x)).
struct FrequencyDiagonal {
    int width = 0;
    int height = 0;
    std::vector<Complex> values;
};

// Matrix-level operators. Every row of `in` is an image on `grid`; the forward
// operators are the right products X B, X D_h, X D_v of the row-vector model.

Matrix blur_rows(const Matrix& in, Grid grid, const ConvolutionKernel& kernel);
Matrix blur_adjoint_rows(const Matrix& in, Grid grid, const ConvolutionKernel& kernel);
Matrix diff_rows(const Matrix& in, Grid grid, Difference dir);
Matrix diff_adjoint_rows(const Matrix& in, Grid grid, Difference dir);
Matrix subsample_rows(const Matrix& in, Grid grid, const SubsamplingPattern& pattern);
Matrix subsample_adjoint_rows(const Matrix& in, Grid full, const SubsamplingPattern& pattern);

/// Column indices (in the full grid) of the pixels retained by `pattern`,
/// ordered as the pixels of the subsampled grid.
std::vector<Eigen::Index> sampled_pixels(Grid full, const SubsamplingPattern& pattern);

/// Applies a cyclic operator (or its adjoint) through its spectrum.
Matrix spectrum_apply_rows(const Matrix& in, const FrequencyDiagonal& spectrum, const Fft2d& fft,
                           bool adjoint = false);

// Cube-level operators.

SpectralCube blur_apply(const SpectralCube& cube, const ConvolutionKernel& kernel);
SpectralCube blur_adjoint(const SpectralCube& cube, const ConvolutionKernel& kernel);
SpectralCube subsample_apply(const SpectralCube& cube, const SubsamplingPattern& pattern);
SpectralCube subsample_adjoint(const SpectralCube& cube, const SubsamplingPattern& pattern,
                               int full_width, int full_height);
SpectralCube spectral_apply(const SpectralCube& cube, const SpectralResponse& response);
/// R^T applied per pixel: L_m bands in, L_h bands out.
SpectralCube spectral_adjoint(const SpectralCube& cube, const SpectralResponse& response);
SpectralCube diff_h(const SpectralCube& cube);
SpectralCube diff_v(const SpectralCube& cube);
SpectralCube diff_h_adjoint(const SpectralCube& cube);
SpectralCube diff_v_adjoint(const SpectralCube& cube);

/// Spectrum of the blur with the kernel center anchored at the DFT origin.
FrequencyDiagonal operator_spectrum(const ConvolutionKernel& kernel, int width, int height);
FrequencyDiagonal operator_spectrum(Difference dir, int width, int height);

SpectralCube spectrum_apply(const SpectralCube& cube, const FrequencyDiagonal& spectrum,
                            bool adjoint = false);

}  // namespace hsfusion

namespace hsfusion {

/// Nearest-neighbour (zero-order hold) upsampling: full-grid pixel (x, y)
/// copies low-resolution pixel (x / factor, y / factor).
Matrix upsample_nearest_rows(const Matrix& low, Grid full, int factor);

}  // namespace hsfusion
