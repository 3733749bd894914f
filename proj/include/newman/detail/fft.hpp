#pragma once

#include <complex>
#include <span>
#include <vector>

namespace newman::detail {

enum class Direction { Forward = -1, Inverse = +1 };

/// Unscaled in-place DFT, y[n] = sum_k x[k] exp(sign * 2 pi i k n / N), via FFTW.
/// Plans are cached per (N, direction) and safe to use from several threads.
void dft_inplace(std::span<std::complex<double>> data, Direction dir);

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> data,
                                      Direction dir);

}  // namespace newman::detail
