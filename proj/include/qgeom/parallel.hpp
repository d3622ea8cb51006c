#pragma once

#include <cstddef>

namespace qgeom {

/// Worker count for parallel kernels: QGEOM_THREADS when set to a positive
/// integer, otherwise the OpenMP default.
int configured_threads();

}  // namespace qgeom
