#pragma once

#include <optional>

namespace bglab {

/// Sets the OpenMP team size. An explicit request wins over the
/// BGLAB_THREADS environment variable; with neither, the OpenMP default is
/// kept. Returns the resulting thread count.
int configure_threads(std::optional<int> requested = std::nullopt);

int thread_count();

}  // namespace bglab
