#pragma once

#include <cstddef>

namespace zetacorr {

// Global worker count for every OpenMP kernel. 0 = leave the OpenMP default.
void set_threads(int n);
int threads();

// Kernels split their index range into chunks of this fixed size regardless
// of the worker count; chunk results are merged in chunk order, which is what
// makes the output independent of --threads.
inline constexpr std::size_t kDefaultChunk = 4096;

inline std::size_t chunk_count(std::size_t n, std::size_t chunk) {
    return (n + chunk - 1) / chunk;
}

}  // namespace zetacorr
