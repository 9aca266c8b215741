#pragma once

#include <vector>

#include "mafd/cmatrix.hpp"

namespace mafd {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// In-place radix-2 FFT. Forward uses exp(-2*pi*i*jk/n); inverse uses
/// exp(+2*pi*i*jk/n) and does NOT apply the 1/n factor.
void fft_radix2(std::vector<cdouble>& a, bool inverse);

} // namespace mafd
