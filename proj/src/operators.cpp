#include "hsfusion/operators.hpp"

#include "hsfusion/error.hpp"

#include <sstream>

namespace hsfusion {

namespace {

int wrap(int i, int n) {
    const int r = i % n;
    return r < 0 ? r + n : r;
}

void check_rows(const Matrix& in, Grid grid) {
    if (grid.width <= 0 || grid.height <= 0 || in.cols() != grid.pixels()) {
        throw GeometryError("matrix column count does not match image grid");
    }
}

void check_kernel_fits(const ConvolutionKernel& kernel, Grid grid) {
    if (kernel.size() > grid.width || kernel.size() > grid.height) {
        std::ostringstream msg;
        msg << kernel.size() << "x" << kernel.size() << " kernel does not fit a " << grid.width << "x"
            << grid.height << " image";
        throw GeometryError(msg.str());
    }
}

// sign = +1 convolves, -1 correlates (the adjoint).
Matrix cyclic_filter(const Matrix& in, Grid grid, const ConvolutionKernel& kernel, int sign) {
    check_rows(in, grid);
    check_kernel_fits(kernel, grid);
    const int w = grid.width;
    const int h = grid.height;
    const int r = kernel.radius();
    const int k = kernel.size();
    Matrix out = Matrix::Zero(in.rows(), in.cols());
#pragma omp parallel for if (in.rows() > 1)
    for (Eigen::Index l = 0; l < in.rows(); ++l) {
        const double* src = in.row(l).data();
        double* dst = out.row(l).data();
        for (int a = 0; a < k; ++a) {
            const int dy = sign * (a - r);
            for (int b = 0; b < k; ++b) {
                const double t = kernel.tap(a, b);
                if (t == 0.0) continue;
                const int dx = sign * (b - r);
                for (int y = 0; y < h; ++y) {
                    const double* src_row = src + static_cast<Eigen::Index>(wrap(y - dy, h)) * w;
                    double* dst_row = dst + static_cast<Eigen::Index>(y) * w;
                    for (int x = 0; x < w; ++x) dst_row[x] += t * src_row[wrap(x - dx, w)];
                }
            }
        }
    }
    return out;
}

FrequencyDiagonal stencil_spectrum(const Matrix& placed, int width, int height) {
    Fft2d fft(width, height);
    FrequencyDiagonal spectrum{width, height, std::vector<Complex>(static_cast<std::size_t>(width) * height)};
    for (Eigen::Index p = 0; p < placed.size(); ++p) spectrum.values[static_cast<std::size_t>(p)] = placed(p);
    fft.forward(spectrum.values);
    return spectrum;
}

}  // namespace

Matrix blur_rows(const Matrix& in, Grid grid, const ConvolutionKernel& kernel) {
    return cyclic_filter(in, grid, kernel, +1);
}

Matrix blur_adjoint_rows(const Matrix& in, Grid grid, const ConvolutionKernel& kernel) {
    return cyclic_filter(in, grid, kernel, -1);
}

Matrix diff_rows(const Matrix& in, Grid grid, Difference dir) {
    check_rows(in, grid);
    const int w = grid.width;
    const int h = grid.height;
    Matrix out(in.rows(), in.cols());
    for (Eigen::Index l = 0; l < in.rows(); ++l) {
        const double* src = in.row(l).data();
        double* dst = out.row(l).data();
        for (int y = 0; y < h; ++y) {
            const int yn = dir == Difference::vertical ? (y + 1) % h : y;
            for (int x = 0; x < w; ++x) {
                const int xn = dir == Difference::horizontal ? (x + 1) % w : x;
                dst[y * w + x] = src[yn * w + xn] - src[y * w + x];
            }
        }
    }
    return out;
}

Matrix diff_adjoint_rows(const Matrix& in, Grid grid, Difference dir) {
    check_rows(in, grid);
    const int w = grid.width;
    const int h = grid.height;
    Matrix out(in.rows(), in.cols());
    for (Eigen::Index l = 0; l < in.rows(); ++l) {
        const double* src = in.row(l).data();
        double* dst = out.row(l).data();
        for (int y = 0; y < h; ++y) {
            const int yp = dir == Difference::vertical ? (y + h - 1) % h : y;
            for (int x = 0; x < w; ++x) {
                const int xp = dir == Difference::horizontal ? (x + w - 1) % w : x;
                dst[y * w + x] = src[yp * w + xp] - src[y * w + x];
            }
        }
    }
    return out;
}

std::vector<Eigen::Index> sampled_pixels(Grid full, const SubsamplingPattern& pattern) {
    pattern.check_divides(full.width, full.height);
    const int d = pattern.factor;
    const int wl = full.width / d;
    const int hl = full.height / d;
    std::vector<Eigen::Index> idx;
    idx.reserve(static_cast<std::size_t>(wl) * hl);
    for (int v = 0; v < hl; ++v) {
        for (int u = 0; u < wl; ++u) {
            idx.push_back(static_cast<Eigen::Index>(pattern.offset_y + d * v) * full.width +
                          pattern.offset_x + d * u);
        }
    }
    return idx;
}

Matrix subsample_rows(const Matrix& in, Grid grid, const SubsamplingPattern& pattern) {
    check_rows(in, grid);
    const auto idx = sampled_pixels(grid, pattern);
    Matrix out(in.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = in.col(idx[j]);
    return out;
}

Matrix subsample_adjoint_rows(const Matrix& in, Grid full, const SubsamplingPattern& pattern) {
    const auto idx = sampled_pixels(full, pattern);
    if (in.cols() != static_cast<Eigen::Index>(idx.size())) {
        throw GeometryError("low-resolution image does not match subsampling pattern and full grid");
    }
    Matrix out = Matrix::Zero(in.rows(), full.pixels());
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(idx[j]) = in.col(static_cast<Eigen::Index>(j));
    return out;
}

Matrix spectrum_apply_rows(const Matrix& in, const FrequencyDiagonal& spectrum, const Fft2d& fft,
                           bool adjoint) {
    const Grid grid{spectrum.width, spectrum.height};
    check_rows(in, grid);
    if (fft.width() != grid.width || fft.height() != grid.height) {
        throw GeometryError("FFT plan does not match spectrum grid");
    }
    Matrix out(in.rows(), in.cols());
#pragma omp parallel for if (in.rows() > 1)
    for (Eigen::Index l = 0; l < in.rows(); ++l) {
        std::vector<Complex> buf(static_cast<std::size_t>(in.cols()));
        for (Eigen::Index p = 0; p < in.cols(); ++p) buf[static_cast<std::size_t>(p)] = in(l, p);
        fft.forward(buf);
        for (std::size_t p = 0; p < buf.size(); ++p) {
            buf[p] *= adjoint ? std::conj(spectrum.values[p]) : spectrum.values[p];
        }
        fft.inverse(buf);
        for (Eigen::Index p = 0; p < in.cols(); ++p) out(l, p) = buf[static_cast<std::size_t>(p)].real();
    }
    return out;
}

SpectralCube blur_apply(const SpectralCube& cube, const ConvolutionKernel& kernel) {
    return SpectralCube(blur_rows(cube.data(), grid_of(cube), kernel), cube.width(), cube.height());
}

SpectralCube blur_adjoint(const SpectralCube& cube, const ConvolutionKernel& kernel) {
    return SpectralCube(blur_adjoint_rows(cube.data(), grid_of(cube), kernel), cube.width(),
                        cube.height());
}

SpectralCube subsample_apply(const SpectralCube& cube, const SubsamplingPattern& pattern) {
    return SpectralCube(subsample_rows(cube.data(), grid_of(cube), pattern),
                        cube.width() / pattern.factor, cube.height() / pattern.factor);
}

SpectralCube subsample_adjoint(const SpectralCube& cube, const SubsamplingPattern& pattern,
                               int full_width, int full_height) {
    if (full_width != cube.width() * pattern.factor || full_height != cube.height() * pattern.factor) {
        throw GeometryError("full grid is not the low-resolution grid times the subsampling factor");
    }
    return SpectralCube(subsample_adjoint_rows(cube.data(), {full_width, full_height}, pattern),
                        full_width, full_height);
}

SpectralCube spectral_apply(const SpectralCube& cube, const SpectralResponse& response) {
    if (response.hsi_bands() != cube.bands()) {
        std::ostringstream msg;
        msg << "spectral response expects " << response.hsi_bands() << " bands, cube has "
            << cube.bands();
        throw GeometryError(msg.str());
    }
    return SpectralCube(Matrix(response.matrix() * cube.data()), cube.width(), cube.height());
}

SpectralCube spectral_adjoint(const SpectralCube& cube, const SpectralResponse& response) {
    if (response.msi_bands() != cube.bands()) {
        std::ostringstream msg;
        msg << "spectral response has " << response.msi_bands() << " rows, cube has " << cube.bands()
            << " bands";
        throw GeometryError(msg.str());
    }
    return SpectralCube(Matrix(response.matrix().transpose() * cube.data()), cube.width(), cube.height());
}

SpectralCube diff_h(const SpectralCube& cube) {
    return SpectralCube(diff_rows(cube.data(), grid_of(cube), Difference::horizontal), cube.width(),
                        cube.height());
}

SpectralCube diff_v(const SpectralCube& cube) {
    return SpectralCube(diff_rows(cube.data(), grid_of(cube), Difference::vertical), cube.width(),
                        cube.height());
}

SpectralCube diff_h_adjoint(const SpectralCube& cube) {
    return SpectralCube(diff_adjoint_rows(cube.data(), grid_of(cube), Difference::horizontal),
                        cube.width(), cube.height());
}

SpectralCube diff_v_adjoint(const SpectralCube& cube) {
    return SpectralCube(diff_adjoint_rows(cube.data(), grid_of(cube), Difference::vertical),
                        cube.width(), cube.height());
}

FrequencyDiagonal operator_spectrum(const ConvolutionKernel& kernel, int width, int height) {
    check_kernel_fits(kernel, {width, height});
    const int r = kernel.radius();
    Matrix placed = Matrix::Zero(height, width);
    for (int a = 0; a < kernel.size(); ++a) {
        for (int b = 0; b < kernel.size(); ++b) {
            placed(wrap(a - r, height), wrap(b - r, width)) += kernel.tap(a, b);
        }
    }
    return stencil_spectrum(placed, width, height);
}

FrequencyDiagonal operator_spectrum(Difference dir, int width, int height) {
    if (width <= 0 || height <= 0) throw GeometryError("grid must be non-empty");
    // y[n] = x[n+1] - x[n]: impulse response -1 at the origin, +1 at offset -1.
    Matrix placed = Matrix::Zero(height, width);
    placed(0, 0) -= 1.0;
    if (dir == Difference::horizontal) {
        placed(0, width - 1) += 1.0;
    } else {
        placed(height - 1, 0) += 1.0;
    }
    return stencil_spectrum(placed, width, height);
}

SpectralCube spectrum_apply(const SpectralCube& cube, const FrequencyDiagonal& spectrum, bool adjoint) {
    Fft2d fft(spectrum.width, spectrum.height);
    return SpectralCube(spectrum_apply_rows(cube.data(), spectrum, fft, adjoint), cube.width(),
                        cube.height());
}

}  // namespace hsfusion

namespace hsfusion {

Matrix upsample_nearest_rows(const Matrix& low, Grid full, int factor) {
    if (factor < 1 || full.width % factor != 0 || full.height % factor != 0) {
        throw GeometryError("full grid is not divisible by the upsampling factor");
    }
    const int wl = full.width / factor;
    if (low.cols() != static_cast<Eigen::Index>(wl) * (full.height / factor)) {
        throw GeometryError("low-resolution image does not match the full grid");
    }
    Matrix out(low.rows(), full.pixels());
    for (int y = 0; y < full.height; ++y) {
        for (int x = 0; x < full.width; ++x) {
            out.col(static_cast<Eigen::Index>(y) * full.width + x) =
                low.col(static_cast<Eigen::Index>(y / factor) * wl + x / factor);
        }
    }
    return out;
}

}  // namespace hsfusion
