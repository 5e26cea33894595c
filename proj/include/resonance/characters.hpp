#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "resonance/arithmetic.hpp"

namespace resonance {

class Character;

/// The dual group of Dirichlet characters modulo a prime q. Character a maps
/// g^k to e(a k / (q - 1)) for the smallest primitive root g.
class CharacterGroup {
 public:
  explicit CharacterGroup(std::uint64_t q);

  std::uint64_t modulus() const noexcept { return q_; }
  /// phi(q) = q - 1, also the number of characters.
  std::uint64_t order() const noexcept { return q_ - 1; }
  const DiscreteLogTable& dlog() const noexcept { return dlog_; }

  /// e^{2 pi i k / (q-1)}; conj-symmetric and exact at quarter turns.
  std::complex<double> root(std::uint64_t k) const noexcept { return roots_[k]; }

  Character character(std::uint64_t index) const;
  Character principal() const;

 private:
  std::uint64_t q_;
  DiscreteLogTable dlog_;
  std::vector<std::complex<double>> roots_;
};

class Character {
 public:
  Character(const CharacterGroup& group, std::uint64_t index);

  const CharacterGroup& group() const noexcept { return *group_; }
  std::uint64_t index() const noexcept { return index_; }
  bool is_principal() const noexcept { return index_ == 0; }

  /// Integer exponent k with chi(n) = e^{2 pi i k/(q-1)}; n must be coprime to q.
  std::uint64_t phase(std::uint64_t n) const noexcept;

  std::complex<double> operator()(std::uint64_t n) const noexcept;

  std::uint64_t order() const noexcept;
  Character power(std::uint64_t j) const;
  Character conjugate() const;

  friend bool operator==(const Character& a, const Character& b) noexcept {
    return a.group_ == b.group_ && a.index_ == b.index_;
  }

 private:
  const CharacterGroup* group_;
  std::uint64_t index_;
};

inline std::complex<double> eval(const Character& chi, std::uint64_t n) { return chi(n); }
inline std::uint64_t order(const Character& chi) { return chi.order(); }
inline Character power(const Character& chi, std::uint64_t j) { return chi.power(j); }

/// Characters of order > ell, i.e. chi^j non-principal for 1 <= j <= ell,
/// minus any user-designated excluded indices.
struct EligibleSet {
  std::uint64_t q = 0;
  long ell = 0;
  std::vector<std::uint64_t> members;
};

EligibleSet eligible(const CharacterGroup& group, long ell,
                     const std::vector<std::uint64_t>& excluded = {});

/// sum over all chi of chi(m) conj(chi(n)).
std::complex<double> orthogonality_sum(const CharacterGroup& group, std::uint64_t m,
                                       std::uint64_t n);

}  // namespace resonance
