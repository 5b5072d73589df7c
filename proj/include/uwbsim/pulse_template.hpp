#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace uwbsim {

/// 4-bit amplitude codes of the pulse envelope, one per equal-width tap.
class PulseTemplate {
public:
  static constexpr int kMaxCode = 15;

  /// Throws ParameterError if a code is outside [0, 15], every code is zero,
  /// or `symmetric` is set and the taps are not a palindrome.
  PulseTemplate(std::vector<int> taps, bool symmetric);

  /// Symmetric flag is inferred from the taps.
  static PulseTemplate from_taps(std::vector<int> taps);

  [[nodiscard]] std::span<const int> taps() const { return taps_; }
  [[nodiscard]] std::size_t n_taps() const { return taps_.size(); }
  [[nodiscard]] bool symmetric() const { return symmetric_; }

  /// Sum of squared codes.
  [[nodiscard]] double code_energy() const;
  /// Mean of (code / 15)^2 over the taps.
  [[nodiscard]] double mean_square_level() const;

  [[nodiscard]] PulseTemplate reversed() const;

  /// "2,6,9,13,13,9,6,2"
  [[nodiscard]] std::string to_string() const;
  static PulseTemplate parse(const std::string& text);

  bool operator==(const PulseTemplate&) const = default;

private:
  std::vector<int> taps_;
  bool symmetric_;
};

struct TriangleShape {
  /// Apex position as a fraction of the pulse, in (0, 1). 0.5 is symmetric.
  double rise_fraction = 0.5;
};

/// Samples a unit-peak triangle at tap centres t = (k + 0.5) / n and rounds
/// 15 * envelope half-up. Requires 2 <= n_taps <= 32.
PulseTemplate quantize_template(std::size_t n_taps, TriangleShape shape = {});

} // namespace uwbsim
