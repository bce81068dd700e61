#pragma once

#include "floquet/types.hpp"

namespace floquet::detail {

// Unnormalized forward transform X_j = sum_s x_s e^{-2 pi i j s / n}.
// Dispatches to radix-2 for powers of two, direct summation for small n and
// Bluestein's chirp-z algorithm otherwise.
void fft_unnormalized(CVector& x);

// Reference O(n^2) summation with a twiddle table.
void dft_direct(CVector& x);

}  // namespace floquet::detail
