#pragma once

#include <complex>
#include <vector>

namespace slowlight {

using Complex = std::complex<double>;

// In-place radix-2 FFT. Size must be a power of two.
// Forward convention: X[k] = sum_m x[m] exp(-2*pi*i*k*m/N).
// The inverse includes the 1/N factor.
void fft(std::vector<Complex>& data, bool inverse);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

// Discrete Hilbert transform of a real signal via the analytic-signal FFT
// method (H{cos} = sin). The signal should decay to ~0 at both ends; the
// caller is responsible for baseline subtraction. Size must be a power of two.
std::vector<double> hilbert_transform(const std::vector<double>& signal);

}  // namespace slowlight
