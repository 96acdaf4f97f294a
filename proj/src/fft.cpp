#include "qnet/fft.hpp"

#include <cmath>

namespace qnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

void dft_direct(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n, 0.0);
    const double sign = inverse ? 2.0 : -2.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sign * kPi * static_cast<double>(k * j % n) / static_cast<double>(n);
            out[k] += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
    }
    a = std::move(out);
}

}  // namespace

void dft(std::vector<std::complex<double>>& data, bool inverse) {
    if (data.empty()) return;
    if (is_pow2(data.size()))
        fft_radix2(data, inverse);
    else
        dft_direct(data, inverse);
}

}  // namespace qnet
