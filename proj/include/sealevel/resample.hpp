#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sealevel {

// Stationary bootstrap index sample: geometric block lengths with the given
// mean (support 1, 2, ...), uniformly random block starts, circular wrap.
// Output length equals n.
std::vector<std::size_t> stationary_bootstrap_indices(std::size_t n, double mean_block,
                                                      std::mt19937_64& rng);

}  // namespace sealevel
