#pragma once

#include <cstddef>
#include <span>

#include "skm/grid.hpp"

namespace skm {

/// In-place square 2-D complex FFT backed by FFTW.
///
/// Both directions are unnormalized (inverse(forward(x)) == n^2 x). Plans are
/// created once per instance under a global planner lock; execution on any
/// 64-byte aligned array of the right size is thread-safe, but an instance is
/// meant to be owned by a single worker.
class Fft2d {
 public:
  explicit Fft2d(std::size_t n);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;
  Fft2d(Fft2d&& other) noexcept;
  Fft2d& operator=(Fft2d&& other) noexcept;

  std::size_t n() const { return n_; }

  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

 private:
  void execute(void* plan, std::span<Complex> data) const;

  std::size_t n_ = 0;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace skm
