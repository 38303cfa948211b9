#include "osa/combinatorics.hpp"

#include <stdexcept>

namespace osa {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::vector<ChannelMask> subsets_of_size(int n, int m) {
  if (m < 0 || m > n) throw std::invalid_argument("subsets_of_size: m out of range");
  std::vector<ChannelMask> out;
  out.reserve(binomial(n, m));
  if (m == 0) {
    out.push_back(0);
    return out;
  }
  std::vector<int> idx(m);
  for (int j = 0; j < m; ++j) idx[j] = j;
  while (true) {
    ChannelMask mask = 0;
    for (int j : idx) mask |= ChannelMask{1} << j;
    out.push_back(mask);
    int j = m - 1;
    while (j >= 0 && idx[j] == n - m + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (int l = j + 1; l < m; ++l) idx[l] = idx[l - 1] + 1;
  }
  return out;
}

std::vector<int> mask_members(ChannelMask mask) {
  std::vector<int> members;
  members.reserve(static_cast<std::size_t>(mask_size(mask)));
  for (int i = 0; mask >> i; ++i) {
    if ((mask >> i) & 1) members.push_back(i);
  }
  return members;
}

}  // namespace osa
