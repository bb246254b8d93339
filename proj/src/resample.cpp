#include "sealevel/resample.hpp"

#include <stdexcept>

namespace sealevel {

std::vector<std::size_t> stationary_bootstrap_indices(std::size_t n, double mean_block,
                                                      std::mt19937_64& rng) {
    if (n == 0) throw std::invalid_argument("stationary bootstrap of an empty series");
    if (!(mean_block >= 1.0)) throw std::invalid_argument("mean block length must be >= 1");
    std::uniform_int_distribution<std::size_t> start(0, n - 1);
    // geometric on {1,2,...} with mean mean_block
    std::geometric_distribution<std::size_t> geo(1.0 / mean_block);
    std::vector<std::size_t> idx;
    idx.reserve(n);
    while (idx.size() < n) {
        std::size_t pos = start(rng);
        std::size_t len = geo(rng) + 1;
        for (std::size_t i = 0; i < len && idx.size() < n; ++i)
            idx.push_back((pos + i) % n);
    }
    return idx;
}

}  // namespace sealevel
