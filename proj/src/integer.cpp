#include "ensys/integer.hpp"

#include <algorithm>

namespace ensys {

std::optional<std::vector<Integer>> positive_divisors(const Integer& v, std::uint64_t trial_limit) {
  Integer m = abs_value(v);
  if (m == 0) return std::nullopt;
  Integer root = floor_sqrt(m);
  if (root > Integer(static_cast<unsigned long>(trial_limit))) return std::nullopt;
  std::vector<Integer> low;
  std::vector<Integer> high;
  for (Integer d = 1; d <= root; ++d) {
    if (mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t()) != 0) {
      low.push_back(d);
      Integer q = m / d;
      if (q != d) high.push_back(q);
    }
  }
  std::reverse(high.begin(), high.end());
  low.insert(low.end(), high.begin(), high.end());
  return low;
}

}  // namespace ensys
