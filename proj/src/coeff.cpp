#include "gtoric/coeff.hpp"

namespace gtoric {

CoeffRing CoeffRing::rationals() {
  CoeffRing r;
  r.kind = RingKind::rationals;
  r.is_field = true;
  return r;
}

CoeffRing CoeffRing::integers() {
  CoeffRing r;
  r.kind = RingKind::integers;
  r.is_field = false;
  return r;
}

CoeffRing CoeffRing::prime_field(const Int& p) {
  if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
    throw ValidationError("prime_field: modulus " + p.get_str() + " is not prime");
  CoeffRing r;
  r.kind = RingKind::prime_field;
  r.p = p;
  r.is_field = true;
  return r;
}

std::string CoeffRing::name() const {
  switch (kind) {
    case RingKind::rationals: return "Q";
    case RingKind::integers: return "Z";
    case RingKind::prime_field: return "F" + p.get_str();
  }
  return "?";
}

Scalar CoeffRing::normalize(const Scalar& x) const {
  switch (kind) {
    case RingKind::rationals: {
      Scalar y = x;
      y.canonicalize();
      return y;
    }
    case RingKind::integers: {
      Scalar y = x;
      y.canonicalize();
      if (y.get_den() != 1)
        throw ValidationError("coefficient " + y.get_str() + " is not an integer");
      return y;
    }
    case RingKind::prime_field: {
      Scalar y = x;
      y.canonicalize();
      Int den = y.get_den();
      Int num = fmod(y.get_num(), p);
      if (den != 1) {
        Int dinv;
        if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
          throw ValidationError("denominator not invertible mod " + p.get_str());
        num = fmod(num * dinv, p);
      }
      return Scalar(num);
    }
  }
  throw ValidationError("unknown ring kind");
}

bool CoeffRing::is_unit(const Scalar& a) const {
  Scalar x = normalize(a);
  if (x == 0) return false;
  if (kind == RingKind::integers) return x == 1 || x == -1;
  return true;
}

Scalar CoeffRing::inverse(const Scalar& a) const {
  if (!is_unit(a)) throw ValidationError("not a unit in " + name());
  Scalar x = normalize(a);
  return normalize(Scalar(1) / x);
}

std::string scalar_to_string(const Scalar& s) { return s.get_str(); }

Scalar scalar_from_string(const std::string& text) {
  Scalar s;
  if (s.set_str(text, 10) != 0)
    throw ValidationError("malformed coefficient literal: '" + text + "'");
  s.canonicalize();
  return s;
}

}  // namespace gtoric
