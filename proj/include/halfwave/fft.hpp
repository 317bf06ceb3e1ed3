#ifndef HALFWAVE_FFT_HPP
#define HALFWAVE_FFT_HPP

// Thin FFTW wrapper with a process-wide plan cache.  Plans are created with
// FFTW_ESTIMATE so results are reproducible run to run, and FFTW_UNALIGNED
// so they can execute on any caller buffer.  Plan creation is serialized
// behind a mutex (fftw planning is not thread-safe; execution is).

#include <complex>
#include <vector>

#include "halfwave/grid.hpp"

namespace halfwave::fft {

/// Forward DFT (negative exponent), unnormalized, in row-major layout.
std::vector<std::complex<double>> forward(const GridSpec& grid,
                                          const std::vector<std::complex<double>>& in);

/// Inverse DFT normalized by 1/N^n, so inverse(forward(u)) == u.
std::vector<std::complex<double>> inverse(const GridSpec& grid,
                                          const std::vector<std::complex<double>>& in);

}  // namespace halfwave::fft

#endif
