#pragma once

#include <cstdint>
#include <vector>

namespace hypercondense {

/// Largest-remainder apportionment of `total` seats proportionally to
/// `weights`, with every entry kept within [min_each, caps[i]] (no cap when
/// `caps` is empty). Remainders are compared in exact integer arithmetic;
/// ties go to the lower index when adding a seat and to the higher index when
/// removing one. Returns an empty vector when the bounds make `total`
/// unreachable.
std::vector<std::int64_t> apportion(std::int64_t total, const std::vector<std::int64_t>& weights,
                                    std::int64_t min_each = 0,
                                    const std::vector<std::int64_t>& caps = {});

}  // namespace hypercondense
