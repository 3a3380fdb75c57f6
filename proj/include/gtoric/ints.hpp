// Exact integer/rational scalars and small shared utilities.
//
// All lattice arithmetic in this library is arbitrary precision (GMP).
// Fixed-width integers never touch a lattice computation path.

#ifndef GTORIC_INTS_HPP
#define GTORIC_INTS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtoric {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;

// Thrown when a configured enumeration/search budget is exceeded.
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on malformed or inconsistent inputs.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Floor division (sign-safe), q = floor(a/b).
inline Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Ceiling division, q = ceil(a/b).
inline Int cdiv(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Non-negative remainder, r = a mod b with 0 <= r < |b|.
inline Int fmod(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline IntVec operator+(const IntVec& a, const IntVec& b) {
  IntVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

inline IntVec operator-(const IntVec& a, const IntVec& b) {
  IntVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

inline IntVec operator-(const IntVec& a) {
  IntVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = -a[i];
  return c;
}

inline IntVec operator*(const Int& s, const IntVec& a) {
  IntVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

inline Int dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool is_zero(const IntVec& a) {
  for (const Int& x : a)
    if (x != 0) return false;
  return true;
}

inline Int l1_norm(const IntVec& a) {
  Int s = 0;
  for (const Int& x : a) s += abs(x);
  return s;
}

// Divides by the gcd of the entries; the zero vector is left unchanged.
inline IntVec primitive(IntVec a) {
  Int g = 0;
  for (const Int& x : a) g = gcd(g, x);
  if (g > 1)
    for (Int& x : a) x /= g;
  return a;
}

// Lexicographic comparison, the canonical order on lattice points.
inline int lex_cmp(const IntVec& a, const IntVec& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

struct IntVecLess {
  bool operator()(const IntVec& a, const IntVec& b) const { return lex_cmp(a, b) < 0; }
};

inline std::string to_string(const IntVec& a) {
  std::string s = "[";
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += a[i].get_str();
  }
  return s + "]";
}

// FNV-1a over a byte string; used for stable problem hashes in certificates.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace gtoric

#endif
