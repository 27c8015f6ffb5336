#pragma once

#include <complex>
#include <span>

namespace hsfusion {

using Complex = std::complex<double>;

/// In-place 2D complex DFT over a width x height grid stored row-major.
/// Forward uses the exp(-2*pi*i*k*n/N) kernel and no scaling; inverse scales by
/// 1/(width*height) so that inverse(forward(x)) == x. Plans are created once;
/// transforms may run concurrently from several threads on distinct buffers.
class Fft2d {
public:
    Fft2d(int width, int height);
    ~Fft2d();

    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;
    Fft2d(Fft2d&& other) noexcept;
    Fft2d& operator=(Fft2d&& other) noexcept;

    int width() const { return width_; }
    int height() const { return height_; }
    int size() const { return width_ * height_; }

    void forward(std::span<Complex> data) const;
    void inverse(std::span<Complex> data) const;

private:
    int width_ = 0;
    int height_ = 0;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

}  // namespace hsfusion
