// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include "tentflow/grid.hpp"

namespace tentflow::detail {

/// Unnormalized r2c transform of a grid-sized real array.
void forward_r2c(const PeriodicGrid& grid, const double* in, std::complex<double>* out);

/// Unnormalized c2r transform; the input buffer is overwritten.
void inverse_c2r(const PeriodicGrid& grid, std::complex<double>* in, double* out);

}  // namespace tentflow::detail
