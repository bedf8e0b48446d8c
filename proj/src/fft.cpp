#include "nlslab/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace nlslab::fft {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace {

// Twiddles for the forward direction (sign = -1), half-size table.
const std::vector<cplx>& twiddles(std::size_t n) {
    static std::map<std::size_t, std::vector<cplx>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        double ang = -2.0 * PI * static_cast<double>(k) / static_cast<double>(n);
        w[k] = cplx(std::cos(ang), std::sin(ang));
    }
    return cache.emplace(n, std::move(w)).first->second;
}

void bit_reverse(cplx* a, std::size_t n) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

}  // namespace

void transform(cplx* a, std::size_t n, int sign) {
    if (n == 0) throw domain_error("fft: empty input");
    if (!is_pow2(n)) throw domain_error("fft: length must be a power of two");
    if (n == 1) return;
    const auto& w = twiddles(n);
    bit_reverse(a, n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx tw = w[k * step];
                if (sign > 0) tw = std::conj(tw);
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * tw;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

void transform_strided(cplx* data, std::size_t n, std::ptrdiff_t stride, int sign) {
    if (stride == 1) {
        transform(data, n, sign);
        return;
    }
    static thread_local std::vector<cplx> scratch;
    scratch.resize(n);
    for (std::size_t i = 0; i < n; ++i) scratch[i] = data[static_cast<std::ptrdiff_t>(i) * stride];
    transform(scratch.data(), n, sign);
    for (std::size_t i = 0; i < n; ++i) data[static_cast<std::ptrdiff_t>(i) * stride] = scratch[i];
}

}  // namespace nlslab::fft
