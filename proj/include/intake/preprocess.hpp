#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "intake/signal.hpp"

// Inertial-signal conditioning: median smoothing, gravity removal via a
// linear-phase high-pass FIR, and sensor-frame rotation.

namespace intake {

struct FilterSpec {
  int median_window = 5;          // odd, >= 3
  double highpass_cutoff_hz = 1.0;
  int highpass_taps = 101;        // odd, >= 11

  // Rate-dependent checks (cutoff below Nyquist).
  void validate(double rate_hz) const;
};

// Proper rotation (orthonormal, det +1 within 1e-9).
class Rotation {
 public:
  Rotation();  // identity
  explicit Rotation(const std::array<double, 9>& row_major);

  static Rotation about_x(double angle_rad);
  static Rotation about_y(double angle_rad);
  static Rotation about_z(double angle_rad);
  // Simulates alternative watch placements: free rotation about the forearm
  // (z) plus tilts of at most max_tilt_rad about x and y.
  static Rotation random_wrist_placement(std::mt19937_64& rng, double max_tilt_rad = 0.2617993877991494);

  Vec3 apply(const Vec3& v) const;
  // Composition: (a.compose(b)).apply(v) == a.apply(b.apply(v)).
  Rotation compose(const Rotation& other) const;
  const std::array<double, 9>& coeffs() const { return m_; }

 private:
  explicit Rotation(std::array<double, 9> m, bool /*unchecked*/) : m_(m) {}
  std::array<double, 9> m_;
};

// Per-window median with clamped-edge replication; output length equals input
// length. Window must be odd and >= 3.
std::vector<double> median_filter(const std::vector<double>& signal, int median_window);

// Median filter applied to all six inertial channels.
InertialRecording median_smooth(const InertialRecording& rec, int median_window);

// Hamming-windowed-sinc high-pass with exact DC null (lowpass prototype is
// normalized to unit DC gain before spectral inversion). Odd tap count.
std::vector<double> design_highpass_fir(double cutoff_hz, double rate_hz, int taps);

// Complex magnitude of the filter's frequency response at f_hz.
double fir_response_magnitude(const std::vector<double>& taps, double rate_hz, double f_hz);

// Convolution with group-delay compensation: output[i] lines up with input[i],
// ends are zero-padded. Taps must be odd.
std::vector<double> convolve_centered(const std::vector<double>& signal,
                                      const std::vector<double>& taps);

// High-pass filters the three accelerometer channels; gyro passes through.
InertialRecording remove_gravity(const InertialRecording& rec, const FilterSpec& spec);

// Rotates every accel and gyro sample into a new sensor frame.
InertialRecording rotate_frame(const InertialRecording& rec, const Rotation& r);

// median_smooth followed by remove_gravity.
InertialRecording preprocess(const InertialRecording& rec, const FilterSpec& spec);

}  // namespace intake
