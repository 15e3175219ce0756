#include "slowlight/fft.hpp"

#include <cmath>
#include <numbers>

#include "slowlight/errors.hpp"

namespace slowlight {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<Complex>& data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n))
    throw NumericalError("fft: size must be a power of two, got " + std::to_string(n));
  if (n == 1) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = data[i + k];
        const Complex v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= inv_n;
  }
}

std::vector<double> hilbert_transform(const std::vector<double>& signal) {
  const std::size_t n = signal.size();
  if (!is_power_of_two(n))
    throw NumericalError("hilbert_transform: size must be a power of two");
  std::vector<Complex> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = Complex(signal[i], 0.0);
  fft(buf, false);
  // Analytic signal: keep DC and Nyquist, double positive frequencies,
  // zero negative frequencies.
  for (std::size_t k = 1; k < n / 2; ++k) buf[k] *= 2.0;
  for (std::size_t k = n / 2 + 1; k < n; ++k) buf[k] = Complex(0.0, 0.0);
  fft(buf, true);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].imag();
  return out;
}

}  // namespace slowlight
