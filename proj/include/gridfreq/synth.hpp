#pragma once

#include <cstdint>

#include "gridfreq/network.hpp"

namespace gridfreq {

/// Deterministic synthetic analogue of the GB 36-zone system: 36 zones in a
/// ring-plus-chords mesh of exactly 69 lines, 76 synchronous generators
/// (H = 5 s everywhere), 8 fixed-injection interconnectors importing a net
/// 2,000 MW, and a total demand of 40,000 MW with zone Z8 pinned at
/// 3,669.5 MW, the system maximum. Pure function of the seed.
NetworkModel synthesize_gb36(std::uint64_t seed);

}  // namespace gridfreq
