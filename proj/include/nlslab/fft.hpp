#pragma once

#include <cstddef>
#include <vector>

#include "nlslab/common.hpp"

namespace nlslab::fft {

// In-place radix-2 DFT, X_k = sum_j x_j exp(-2*pi*i*j*k/n) for sign=-1
// (forward) and the unnormalized conjugate sum for sign=+1. n must be a
// power of two. Twiddle tables are cached per size.
void transform(cplx* data, std::size_t n, int sign);

// Strided variant used for multi-dimensional transforms: element i lives at
// data[offset + i*stride].
void transform_strided(cplx* data, std::size_t n, std::ptrdiff_t stride, int sign);

inline void forward(std::vector<cplx>& v) { transform(v.data(), v.size(), -1); }
inline void inverse_unnormalized(std::vector<cplx>& v) { transform(v.data(), v.size(), +1); }

bool is_pow2(std::size_t n);

}  // namespace nlslab::fft
