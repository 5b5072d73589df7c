#include "uwbsim/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>

namespace uwbsim {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  in_ = static_cast<double*>(fftw_malloc(sizeof(double) * n_));
  out_ = static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * (n_ / 2 + 1)));
  if (in_ == nullptr || out_ == nullptr) {
    fftw_free(in_);
    fftw_free(out_);
    throw std::bad_alloc();
  }
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), in_, reinterpret_cast<fftw_complex*>(out_),
                               FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

std::span<const std::complex<double>> RealFft::forward(std::span<const double> in) {
  const std::size_t m = std::min(in.size(), n_);
  std::copy_n(in.begin(), m, in_);
  std::fill(in_ + m, in_ + n_, 0.0);
  fftw_execute(static_cast<fftw_plan>(plan_));
  return {out_, n_ / 2 + 1};
}

RealIfft::RealIfft(std::size_t n) : n_(n) {
  in_ = static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * (n_ / 2 + 1)));
  out_ = static_cast<double*>(fftw_malloc(sizeof(double) * n_));
  if (in_ == nullptr || out_ == nullptr) {
    fftw_free(in_);
    fftw_free(out_);
    throw std::bad_alloc();
  }
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_), reinterpret_cast<fftw_complex*>(in_), out_,
                               FFTW_ESTIMATE);
}

RealIfft::~RealIfft() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

std::span<const double> RealIfft::inverse(std::span<const std::complex<double>> bins) {
  // c2r destroys its input, so always copy.
  const std::size_t nb = n_ / 2 + 1;
  const std::size_t m = std::min(bins.size(), nb);
  std::copy_n(bins.begin(), m, in_);
  std::fill(in_ + m, in_ + nb, std::complex<double>{});
  fftw_execute(static_cast<fftw_plan>(plan_));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    out_[i] *= scale;
  }
  return {out_, n_};
}

std::size_t fast_fft_size(std::size_t n) {
  if (n <= 1) {
    return 1;
  }
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u, 7u}) {
      while (r % p == 0) {
        r /= p;
      }
    }
    if (r == 1) {
      return m;
    }
  }
}

} // namespace uwbsim
