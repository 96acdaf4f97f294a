#ifndef QNET_FFT_HPP
#define QNET_FFT_HPP

#include <complex>
#include <vector>

namespace qnet {

// In-place DFT with kernel e^{-2 pi i k n / M} (forward) or e^{+2 pi i k n / M}
// (inverse, unscaled). Radix-2 for power-of-two sizes, direct O(M^2) otherwise.
void dft(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace qnet

#endif
