#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace uwbsim {

/// Real-to-complex forward FFT of a fixed size with owned buffers.
/// Plans are created under a process-wide lock (the FFTW planner is not
/// reentrant); execution is thread-safe per instance.
class RealFft {
public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  [[nodiscard]] std::size_t size() const { return n_; }

  /// Copies `in` (zero-padded or truncated to n) and returns n/2+1 bins.
  std::span<const std::complex<double>> forward(std::span<const double> in);

private:
  std::size_t n_;
  double* in_;
  std::complex<double>* out_;
  void* plan_;
};

/// Inverse of RealFft, normalised so inverse(forward(x)) == x.
class RealIfft {
public:
  explicit RealIfft(std::size_t n);
  ~RealIfft();
  RealIfft(const RealIfft&) = delete;
  RealIfft& operator=(const RealIfft&) = delete;

  std::span<const double> inverse(std::span<const std::complex<double>> bins);

private:
  std::size_t n_;
  std::complex<double>* in_;
  double* out_;
  void* plan_;
};

/// Smallest n' >= n whose only prime factors are 2, 3, 5 and 7.
std::size_t fast_fft_size(std::size_t n);

} // namespace uwbsim
