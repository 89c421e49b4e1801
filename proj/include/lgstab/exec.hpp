#pragma once

namespace lgstab {

/// Selects the serial reference loop or the OpenMP element-parallel loop.
/// Both produce bit-identical results: per-element contributions are
/// computed independently and merged in element order.
enum class Exec { serial, parallel };

int max_threads();

}  // namespace lgstab
