#include "hsfusion/fft.hpp"

#include "hsfusion/error.hpp"

#include <fftw3.h>

#include <mutex>
#include <utility>
#include <vector>

namespace hsfusion {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Fft2d::Fft2d(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw GeometryError("FFT grid must be non-empty");
    std::vector<Complex> scratch(static_cast<std::size_t>(width) * height);
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft_2d(height, width, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                     FFTW_FORWARD, flags);
    inverse_plan_ = fftw_plan_dft_2d(height, width, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                     FFTW_BACKWARD, flags);
    if (!forward_plan_ || !inverse_plan_) throw NumericalError("FFTW planning failed");
}

Fft2d::~Fft2d() {
    if (!forward_plan_ && !inverse_plan_) return;
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

Fft2d::Fft2d(Fft2d&& other) noexcept
    : width_(other.width_),
      height_(other.height_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

Fft2d& Fft2d::operator=(Fft2d&& other) noexcept {
    if (this != &other) {
        std::swap(width_, other.width_);
        std::swap(height_, other.height_);
        std::swap(forward_plan_, other.forward_plan_);
        std::swap(inverse_plan_, other.inverse_plan_);
    }
    return *this;
}

void Fft2d::forward(std::span<Complex> data) const {
    if (static_cast<int>(data.size()) != size()) throw GeometryError("FFT buffer size mismatch");
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()), as_fftw(data.data()));
}

void Fft2d::inverse(std::span<Complex> data) const {
    if (static_cast<int>(data.size()) != size()) throw GeometryError("FFT buffer size mismatch");
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(data.data()), as_fftw(data.data()));
    const double scale = 1.0 / static_cast<double>(size());
    for (auto& v : data) v *= scale;
}

}  // namespace hsfusion
