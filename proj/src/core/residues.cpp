#include <bit>
#include <numeric>

#include "cubewaring/core.hpp"
#include "cubewaring/error.hpp"

namespace cubewaring::core {

ResidueSet::ResidueSet(u64 modulus) : modulus_(modulus), words_((modulus + 63) / 64, 0) {
  if (modulus == 0) throw ValidationError("ResidueSet: modulus must be >= 1");
}

u64 ResidueSet::size() const {
  u64 total = 0;
  for (u64 w : words_) total += static_cast<u64>(std::popcount(w));
  return total;
}

std::vector<u64> ResidueSet::members() const {
  std::vector<u64> out;
  for (u64 r = 0; r < modulus_; ++r) {
    if (contains(r)) out.push_back(r);
  }
  return out;
}

std::vector<u64> ResidueSet::complement() const {
  std::vector<u64> out;
  for (u64 r = 0; r < modulus_; ++r) {
    if (!contains(r)) out.push_back(r);
  }
  return out;
}

ResidueSet power_residues(unsigned k, u64 m, bool units_only) {
  if (m == 0 || k == 0) throw ValidationError("power_residues: need k >= 1 and m >= 1");
  ResidueSet set(m);
  for (u64 x = 1; x <= m; ++x) {
    if (units_only && std::gcd(x, m) != 1) continue;
    set.insert(powmod(x, k, m));
  }
  return set;
}

}  // namespace cubewaring::core
