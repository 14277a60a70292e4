#pragma once

namespace thermo {

// Kernel execution policy. Parallel kernels must produce output identical to
// their serial reference (reductions happen in a fixed sorted order).
enum class Exec { Serial, Parallel };

int worker_count(); // honors OMP_NUM_THREADS

} // namespace thermo
