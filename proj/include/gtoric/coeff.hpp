// Coefficient rings: Q, Z, and prime fields F_p. Scalars are stored as
// exact rationals and normalized per ring (F_p elements live in [0, p)).
//
// All three rings are principal ideal domains, so the extension
// conditions on the base ring hold for every one of them; the capability
// flags record this rather than recomputing it.

#ifndef GTORIC_COEFF_HPP
#define GTORIC_COEFF_HPP

#include <string>

#include "gtoric/ints.hpp"

namespace gtoric {

using Scalar = Rat;

enum class RingKind { rationals, integers, prime_field };

struct CoeffRing {
  RingKind kind = RingKind::rationals;
  Int p = 0;  // modulus for prime fields

  bool is_field = true;
  bool is_pid = true;
  bool is_domain = true;
  bool satisfies_dagger = true;
  bool satisfies_double_dagger = true;

  static CoeffRing rationals();
  static CoeffRing integers();
  static CoeffRing prime_field(const Int& p);

  bool operator==(const CoeffRing& o) const { return kind == o.kind && p == o.p; }

  std::string name() const;

  // Canonical representative of x in this ring; throws ValidationError if
  // x is not a ring element (non-integer over Z, non-unit denominator
  // over F_p).
  Scalar normalize(const Scalar& x) const;

  Scalar add(const Scalar& a, const Scalar& b) const { return normalize(a + b); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return normalize(a - b); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return normalize(a * b); }
  Scalar neg(const Scalar& a) const { return normalize(-a); }

  bool is_unit(const Scalar& a) const;
  Scalar inverse(const Scalar& a) const;  // throws if not a unit
};

std::string scalar_to_string(const Scalar& s);
Scalar scalar_from_string(const std::string& text);

}  // namespace gtoric

#endif
