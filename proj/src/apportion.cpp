#include "hypercondense/apportion.hpp"

#include <algorithm>
#include <numeric>

namespace hypercondense {

std::vector<std::int64_t> apportion(std::int64_t total, const std::vector<std::int64_t>& weights,
                                    std::int64_t min_each, const std::vector<std::int64_t>& caps) {
  const std::size_t n = weights.size();
  const std::int64_t weight_sum = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
  if (n == 0 || weight_sum <= 0) return {};
  auto cap = [&](std::size_t i) { return caps.empty() ? total : caps[i]; };

  std::int64_t lo_sum = 0, hi_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cap(i) < min_each) return {};
    lo_sum += min_each;
    hi_sum += cap(i);
  }
  if (total < lo_sum || total > hi_sum) return {};

  // residual[i] = total * w_i - count_i * weight_sum, i.e. the exact quota
  // minus the allocation, scaled by weight_sum.
  std::vector<std::int64_t> count(n), residual(n);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t scaled = total * weights[i];
    count[i] = std::clamp(scaled / weight_sum, min_each, cap(i));
    residual[i] = scaled - count[i] * weight_sum;
    assigned += count[i];
  }
  while (assigned > total) {
    std::size_t pick = n;
    for (std::size_t i = n; i-- > 0;) {
      if (count[i] > min_each && (pick == n || residual[i] < residual[pick])) pick = i;
    }
    --count[pick];
    residual[pick] += weight_sum;
    --assigned;
  }
  while (assigned < total) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (count[i] < cap(i) && (pick == n || residual[i] > residual[pick])) pick = i;
    }
    ++count[pick];
    residual[pick] -= weight_sum;
    ++assigned;
  }
  return count;
}

}  // namespace hypercondense
