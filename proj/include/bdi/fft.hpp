#pragma once

#include <complex>
#include <vector>

namespace bdi {

// In-place DFT via FFTW. Forward uses e^{-2 pi i jk/n}; the inverse is
// unnormalized.
void fft(std::vector<std::complex<double>>& data, bool inverse = false);

}  // namespace bdi
