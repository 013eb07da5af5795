#pragma once

#include "sptq/rng.hpp"
#include "sptq/types.hpp"

namespace sptq {

cmat random_complex(Stream& rng, int rows, int cols);
cmat random_hermitian(Stream& rng, int n);
// Haar unitary from QR of a complex Ginibre matrix with the phase fix.
cmat random_unitary(Stream& rng, int n);
rmat random_skew(Stream& rng, int n);

}  // namespace sptq
