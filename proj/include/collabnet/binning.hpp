#pragma once

#include <cstdint>
#include <vector>

namespace collabnet {

// Inclusive integer range [lo, hi].
struct IntegerBin {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  std::uint64_t width() const { return hi - lo + 1; }
};

struct GeometricBinSpec {
  double ratio = 2.0;        // must be > 1
  std::uint64_t first = 1;  // the first bin is {first}
};

// Integer bins whose upper edges are floor(first * ratio^b): with the
// defaults {1}, {2}, {3,4}, {5..8}, ... Bins that would contain no integer
// are dropped. Values below `first` belong to no bin. The last bin returned
// contains max_value.
std::vector<IntegerBin> geometric_bins(std::uint64_t max_value, const GeometricBinSpec& spec = {});

// Index of the bin containing value (value >= 1), or bins.size() if none.
std::size_t find_bin(const std::vector<IntegerBin>& bins, std::uint64_t value);

}  // namespace collabnet
