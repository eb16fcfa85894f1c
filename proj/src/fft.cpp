#include "skm/fft.hpp"

#include <fftw3.h>

#include <cstdint>
#include <mutex>
#include <utility>

namespace skm {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft2d::Fft2d(std::size_t n) : n_(n) {
  ComplexArray scratch(n * n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const int ni = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr)
    throw std::runtime_error("Fft2d: FFTW planner failed");
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

Fft2d::Fft2d(Fft2d&& other) noexcept
    : n_(other.n_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

Fft2d& Fft2d::operator=(Fft2d&& other) noexcept {
  std::swap(n_, other.n_);
  std::swap(forward_plan_, other.forward_plan_);
  std::swap(inverse_plan_, other.inverse_plan_);
  return *this;
}

void Fft2d::execute(void* plan, std::span<Complex> data) const {
  if (data.size() != n_ * n_) throw ParameterError("Fft2d: array size does not match plan");
  if (reinterpret_cast<std::uintptr_t>(data.data()) % AlignedAllocator<Complex>::alignment != 0)
    throw ParameterError("Fft2d: array is not 64-byte aligned");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan), buf, buf);
}

void Fft2d::forward(std::span<Complex> data) const { execute(forward_plan_, data); }
void Fft2d::inverse(std::span<Complex> data) const { execute(inverse_plan_, data); }

}  // namespace skm
