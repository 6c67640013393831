#include "collabnet/binning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace collabnet {

std::vector<IntegerBin> geometric_bins(std::uint64_t max_value, const GeometricBinSpec& spec) {
  if (!(spec.ratio > 1.0)) throw std::invalid_argument("bin ratio must be > 1");
  if (spec.first < 1) throw std::invalid_argument("first bin must start at >= 1");
  std::vector<IntegerBin> bins;
  std::uint64_t previous_hi = spec.first - 1;
  double edge = static_cast<double>(spec.first);
  while (previous_hi < std::max<std::uint64_t>(max_value, spec.first)) {
    // The small slack absorbs rounding in repeated multiplication so that
    // exact powers such as 2^b land on their integer.
    const auto hi = static_cast<std::uint64_t>(std::floor(edge * (1.0 + 1e-12)));
    if (hi > previous_hi) {
      bins.push_back({previous_hi + 1, hi});
      previous_hi = hi;
    }
    edge *= spec.ratio;
  }
  return bins;
}

std::size_t find_bin(const std::vector<IntegerBin>& bins, std::uint64_t value) {
  auto it = std::lower_bound(bins.begin(), bins.end(), value,
                             [](const IntegerBin& b, std::uint64_t v) { return b.hi < v; });
  if (it == bins.end() || value < it->lo) return bins.size();
  return static_cast<std::size_t>(it - bins.begin());
}

}  // namespace collabnet
