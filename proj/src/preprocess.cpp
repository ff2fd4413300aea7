#include "intake/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace intake {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void FilterSpec::validate(double rate_hz) const {
  if (median_window < 3 || median_window % 2 == 0)
    throw std::invalid_argument("FilterSpec: median_window must be odd and >= 3");
  if (highpass_taps < 11 || highpass_taps % 2 == 0)
    throw std::invalid_argument("FilterSpec: highpass_taps must be odd and >= 11");
  if (!(highpass_cutoff_hz > 0.0))
    throw std::invalid_argument("FilterSpec: highpass_cutoff_hz must be > 0");
  if (!(highpass_cutoff_hz < rate_hz / 2.0))
    throw std::invalid_argument("FilterSpec: highpass_cutoff_hz must be below Nyquist");
}

Rotation::Rotation() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Rotation::Rotation(const std::array<double, 9>& row_major) : m_(row_major) {
  // R^T R = I and det(R) = +1, both within 1e-9.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += m_[k * 3 + i] * m_[k * 3 + j];
      const double expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(dot - expected) > 1e-9)
        throw std::invalid_argument("Rotation: matrix is not orthonormal");
    }
  }
  const double det = m_[0] * (m_[4] * m_[8] - m_[5] * m_[7]) -
                     m_[1] * (m_[3] * m_[8] - m_[5] * m_[6]) +
                     m_[2] * (m_[3] * m_[7] - m_[4] * m_[6]);
  if (std::abs(det - 1.0) > 1e-9) throw std::invalid_argument("Rotation: determinant is not +1");
}

Rotation Rotation::about_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Rotation({1, 0, 0, 0, c, -s, 0, s, c}, true);
}

Rotation Rotation::about_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Rotation({c, 0, s, 0, 1, 0, -s, 0, c}, true);
}

Rotation Rotation::about_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Rotation({c, -s, 0, s, c, 0, 0, 0, 1}, true);
}

Rotation Rotation::random_wrist_placement(std::mt19937_64& rng, double max_tilt_rad) {
  const double roll = uniform01(rng) * 2.0 * kPi;
  const double tilt_x = (uniform01(rng) * 2.0 - 1.0) * max_tilt_rad;
  const double tilt_y = (uniform01(rng) * 2.0 - 1.0) * max_tilt_rad;
  return about_z(roll).compose(about_x(tilt_x)).compose(about_y(tilt_y));
}

Vec3 Rotation::apply(const Vec3& v) const {
  return Vec3{m_[0] * v.x + m_[1] * v.y + m_[2] * v.z,
              m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
              m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
}

Rotation Rotation::compose(const Rotation& other) const {
  std::array<double, 9> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += m_[i * 3 + k] * other.m_[k * 3 + j];
      out[i * 3 + j] = acc;
    }
  return Rotation(out, true);
}

std::vector<double> median_filter(const std::vector<double>& signal, int median_window) {
  if (median_window < 3 || median_window % 2 == 0)
    throw std::invalid_argument("median_filter: window must be odd and >= 3");
  const int n = static_cast<int>(signal.size());
  std::vector<double> out(signal.size());
  const int half = median_window / 2;
  std::vector<double> buf(static_cast<std::size_t>(median_window));
  for (int i = 0; i < n; ++i) {
    for (int k = -half; k <= half; ++k) {
      const int idx = std::clamp(i + k, 0, n - 1);
      buf[static_cast<std::size_t>(k + half)] = signal[static_cast<std::size_t>(idx)];
    }
    auto mid = buf.begin() + half;
    std::nth_element(buf.begin(), mid, buf.end());
    out[static_cast<std::size_t>(i)] = *mid;
  }
  return out;
}

InertialRecording median_smooth(const InertialRecording& rec, int median_window) {
  auto filter_axis = [&](const std::vector<Vec3>& src, auto member) {
    std::vector<double> channel(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) channel[i] = src[i].*member;
    return median_filter(channel, median_window);
  };
  auto rebuild = [&](const std::vector<Vec3>& src) {
    const auto xs = filter_axis(src, &Vec3::x);
    const auto ys = filter_axis(src, &Vec3::y);
    const auto zs = filter_axis(src, &Vec3::z);
    std::vector<Vec3> out(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) out[i] = Vec3{xs[i], ys[i], zs[i]};
    return out;
  };
  return InertialRecording(rec.subject_id(), rec.start_time(), rec.rate(), rebuild(rec.accel()),
                           rebuild(rec.gyro()));
}

std::vector<double> design_highpass_fir(double cutoff_hz, double rate_hz, int taps) {
  if (taps < 11 || taps % 2 == 0)
    throw std::invalid_argument("design_highpass_fir: taps must be odd and >= 11");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < rate_hz / 2.0))
    throw std::invalid_argument("design_highpass_fir: cutoff must lie in (0, rate/2)");

  // Hamming-windowed sinc lowpass prototype.
  const double ft = cutoff_hz / rate_hz;
  const int m = taps - 1;
  std::vector<double> low(static_cast<std::size_t>(taps));
  double dc = 0.0;
  for (int n = 0; n < taps; ++n) {
    const double offset = static_cast<double>(n) - static_cast<double>(m) / 2.0;
    const double sinc = (n * 2 == m) ? 2.0 * ft : std::sin(2.0 * kPi * ft * offset) / (kPi * offset);
    const double hamming = 0.54 - 0.46 * std::cos(2.0 * kPi * n / m);
    low[static_cast<std::size_t>(n)] = sinc * hamming;
    dc += low[static_cast<std::size_t>(n)];
  }
  // Unit DC gain before inversion gives the highpass an exact null at DC.
  for (double& c : low) c /= dc;
  std::vector<double> high(low.size());
  for (int n = 0; n < taps; ++n)
    high[static_cast<std::size_t>(n)] = ((n * 2 == m) ? 1.0 : 0.0) - low[static_cast<std::size_t>(n)];
  return high;
}

double fir_response_magnitude(const std::vector<double>& taps, double rate_hz, double f_hz) {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    const double phase = -2.0 * kPi * f_hz * static_cast<double>(k) / rate_hz;
    re += taps[k] * std::cos(phase);
    im += taps[k] * std::sin(phase);
  }
  return std::sqrt(re * re + im * im);
}

std::vector<double> convolve_centered(const std::vector<double>& signal,
                                      const std::vector<double>& taps) {
  if (taps.empty() || taps.size() % 2 == 0)
    throw std::invalid_argument("convolve_centered: taps must be odd");
  const int n = static_cast<int>(signal.size());
  const int t = static_cast<int>(taps.size());
  const int delay = (t - 1) / 2;
  std::vector<double> out(signal.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < t; ++k) {
      const int j = i + delay - k;
      if (j >= 0 && j < n) acc += taps[static_cast<std::size_t>(k)] * signal[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

InertialRecording remove_gravity(const InertialRecording& rec, const FilterSpec& spec) {
  spec.validate(rec.rate());
  const std::vector<double> taps =
      design_highpass_fir(spec.highpass_cutoff_hz, rec.rate(), spec.highpass_taps);
  auto filter_axis = [&](auto member) {
    std::vector<double> channel(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) channel[i] = rec.accel()[i].*member;
    return convolve_centered(channel, taps);
  };
  const auto xs = filter_axis(&Vec3::x);
  const auto ys = filter_axis(&Vec3::y);
  const auto zs = filter_axis(&Vec3::z);
  std::vector<Vec3> accel(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i) accel[i] = Vec3{xs[i], ys[i], zs[i]};
  return InertialRecording(rec.subject_id(), rec.start_time(), rec.rate(), std::move(accel),
                           rec.gyro());
}

InertialRecording rotate_frame(const InertialRecording& rec, const Rotation& r) {
  std::vector<Vec3> accel(rec.size());
  std::vector<Vec3> gyro(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i) {
    accel[i] = r.apply(rec.accel()[i]);
    gyro[i] = r.apply(rec.gyro()[i]);
  }
  return InertialRecording(rec.subject_id(), rec.start_time(), rec.rate(), std::move(accel),
                           std::move(gyro));
}

InertialRecording preprocess(const InertialRecording& rec, const FilterSpec& spec) {
  return remove_gravity(median_smooth(rec, spec.median_window), spec);
}

}  // namespace intake
