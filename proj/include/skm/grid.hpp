#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace skm {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

/// Raised when a requested operation cannot be represented on the sampling grid
/// (mode support larger than the grid, undersampled propagation kernel, ...).
class SamplingViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for out-of-range or inconsistent parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 64-byte aligned allocator so every array can be handed straight to FFTW.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    std::size_t bytes = n * sizeof(T);
    bytes = (bytes + alignment - 1) / alignment * alignment;
    void* p = std::aligned_alloc(alignment, bytes == 0 ? alignment : bytes);
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using ComplexArray = std::vector<Complex, AlignedAllocator<Complex>>;
using RealArray = std::vector<double>;

/// Square, uniform, cell-centred transverse grid.
///
/// Pixel (ix, iy) sits at x = (ix - n/2 + 1/2) dx, y = (iy - n/2 + 1/2) dx, so for
/// even n the beam axis falls on a pixel corner. Arrays are stored row-major with
/// y as the slow index: flat index = iy * n + ix.
class SamplingGrid {
 public:
  SamplingGrid(std::size_t n_points, double spacing);

  std::size_t n() const { return n_; }
  double spacing() const { return dx_; }
  double extent() const { return static_cast<double>(n_) * dx_; }
  std::size_t size() const { return n_ * n_; }
  double pixel_area() const { return dx_ * dx_; }

  double coord(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(n_) / 2.0 + 0.5) * dx_;
  }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * n_ + ix; }

  /// Angular spatial frequency (rad/m) of FFT bin i in standard FFT order.
  double frequency(std::size_t i) const;
  double frequency_spacing() const;

  bool operator==(const SamplingGrid& other) const = default;

 private:
  std::size_t n_;
  double dx_;
};

void require_same_grid(const SamplingGrid& a, const SamplingGrid& b, const char* what);

}  // namespace skm
