#ifndef OSA_COMBINATORICS_HPP
#define OSA_COMBINATORICS_HPP

#include <cstdint>
#include <vector>

#include "osa/channel_model.hpp"

namespace osa {

std::uint64_t binomial(int n, int k);

// All size-m subsets of {0..n-1} in lexicographic order of their
// ascending member tuples: {0,1,4} precedes {0,2,3}. This is the
// canonical set order everywhere (sweep order, tie-breaking).
std::vector<ChannelMask> subsets_of_size(int n, int m);

// Set bits of a mask in ascending order.
std::vector<int> mask_members(ChannelMask mask);

}  // namespace osa

#endif  // OSA_COMBINATORICS_HPP
