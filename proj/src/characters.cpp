#include "resonance/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "resonance/error.hpp"
#include "resonance/numerics.hpp"

namespace resonance {

namespace {

std::vector<std::complex<double>> unit_roots(std::uint64_t n) {
  std::vector<std::complex<double>> roots(n);
  roots[0] = {1.0, 0.0};
  for (std::uint64_t k = 1; 2 * k <= n; ++k) {
    std::complex<double> z;
    if (4 * k == n) {
      z = {0.0, 1.0};
    } else if (2 * k == n) {
      z = {-1.0, 0.0};
    } else {
      const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
      z = {std::cos(theta), std::sin(theta)};
    }
    roots[k] = z;
    roots[n - k] = std::conj(z);
  }
  return roots;
}

}  // namespace

CharacterGroup::CharacterGroup(std::uint64_t q)
    : q_(q), dlog_(build_dlog(q)), roots_(unit_roots(q - 1)) {}

Character CharacterGroup::character(std::uint64_t index) const {
  if (index >= order()) {
    throw Error(ErrorKind::Domain, "character index " + std::to_string(index) +
                                       " out of range for modulus " + std::to_string(q_));
  }
  return Character(*this, index);
}

Character CharacterGroup::principal() const { return Character(*this, 0); }

Character::Character(const CharacterGroup& group, std::uint64_t index)
    : group_(&group), index_(index % group.order()) {}

std::uint64_t Character::phase(std::uint64_t n) const noexcept {
  const std::uint64_t m = group_->order();
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(index_) *
                                    group_->dlog()(n) % m);
}

std::complex<double> Character::operator()(std::uint64_t n) const noexcept {
  if (n % group_->modulus() == 0) return {0.0, 0.0};
  return group_->root(phase(n));
}

std::uint64_t Character::order() const noexcept {
  const std::uint64_t m = group_->order();
  return m / std::gcd(index_, m);
}

Character Character::power(std::uint64_t j) const {
  const std::uint64_t m = group_->order();
  const auto idx = static_cast<std::uint64_t>(static_cast<unsigned __int128>(index_) * j % m);
  return Character(*group_, idx);
}

Character Character::conjugate() const {
  const std::uint64_t m = group_->order();
  return Character(*group_, (m - index_) % m);
}

EligibleSet eligible(const CharacterGroup& group, long ell,
                     const std::vector<std::uint64_t>& excluded) {
  if (ell < 1) throw Error(ErrorKind::Domain, "eligible: ell must be at least 1");
  EligibleSet set;
  set.q = group.modulus();
  set.ell = ell;
  const std::uint64_t m = group.order();
  for (std::uint64_t a = 0; a < m; ++a) {
    if (m / std::gcd(a, m) <= static_cast<std::uint64_t>(ell)) continue;
    if (std::find(excluded.begin(), excluded.end(), a) != excluded.end()) continue;
    set.members.push_back(a);
  }
  return set;
}

std::complex<double> orthogonality_sum(const CharacterGroup& group, std::uint64_t m,
                                       std::uint64_t n) {
  ComplexCompensatedSum s;
  for (std::uint64_t a = 0; a < group.order(); ++a) {
    const Character chi(group, a);
    s.add(chi(m) * std::conj(chi(n)));
  }
  return s.value();
}

}  // namespace resonance
