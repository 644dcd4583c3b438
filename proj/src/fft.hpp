#pragma once

// Thin FFTW wrapper. Plans are built with FFTW_ESTIMATE on library-owned
// aligned buffers so results are bit-identical regardless of caller memory
// or thread. Planning is serialized internally; execution is reentrant.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sedlab::fft {

using cplx = std::complex<double>;

/// Forward real transform: out[k] = sum_j in[j] exp(-2 pi i j k / n), k = 0..n/2.
std::vector<cplx> forward(std::span<const double> in);

/// Inverse of a Hermitian half spectrum (size n/2 + 1), unnormalized:
/// out[j] = sum_k X[k] exp(+2 pi i j k / n) over the full Hermitian extension.
std::vector<double> backward(std::span<const cplx> half, std::size_t n);

/// Complex transform, sign -1 (forward) or +1 (backward), unnormalized.
std::vector<cplx> complex(std::span<const cplx> in, int sign);

std::size_t next_pow2(std::size_t n);

}  // namespace sedlab::fft
