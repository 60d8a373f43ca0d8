// Bit-parallel LCS length (Allison-Dix / Hyyro). Each bit of `v` tracks one
// position of the first sequence; after scanning the second sequence the
// LCS length is the number of cleared bits.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "genadapt/genplan.hpp"

namespace genadapt {

namespace {

std::size_t lcs_length(std::span<const LinkId> a, std::span<const LinkId> b) {
  if (a.empty() || b.empty()) return 0;
  const std::size_t words = (a.size() + 63) / 64;

  // Match masks for every distinct symbol of `a`.
  std::vector<LinkId> symbols(a.begin(), a.end());
  std::sort(symbols.begin(), symbols.end());
  symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
  std::vector<std::uint64_t> masks(symbols.size() * words, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto s = std::lower_bound(symbols.begin(), symbols.end(), a[i]) - symbols.begin();
    masks[s * words + i / 64] |= std::uint64_t{1} << (i % 64);
  }

  std::vector<std::uint64_t> v(words, ~std::uint64_t{0});
  for (LinkId c : b) {
    const auto it = std::lower_bound(symbols.begin(), symbols.end(), c);
    if (it == symbols.end() || *it != c) continue;  // no match leaves v unchanged
    const std::uint64_t* m = &masks[(it - symbols.begin()) * words];
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t u = v[w] & m[w];
      const std::uint64_t partial = v[w] + u;
      const std::uint64_t sum = partial + carry;
      carry = (partial < v[w] || sum < partial) ? 1 : 0;
      v[w] = sum | (v[w] & ~m[w]);
    }
  }

  std::size_t ones = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t word = v[w];
    const std::size_t bits = std::min<std::size_t>(64, a.size() - w * 64);
    if (bits < 64) word &= (std::uint64_t{1} << bits) - 1;
    ones += static_cast<std::size_t>(std::popcount(word));
  }
  return a.size() - ones;
}

}  // namespace

std::size_t lcs_distance(std::span<const LinkId> a, std::span<const LinkId> b) {
  return a.size() + b.size() - 2 * lcs_length(a, b);
}

}  // namespace genadapt
