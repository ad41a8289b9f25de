#pragma once

// Exact arithmetic in GF(p^k). Elements are canonical integers in [0, q):
// the little-endian base-p digits are the coefficients of the residue
// polynomial modulo the defining modulus.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flaghyp/error.hpp"

namespace flaghyp {

using Elem = std::uint32_t;

namespace detail {

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Polynomials over GF(p) as little-endian coefficient lists.
using PrimePoly = std::vector<std::uint32_t>;

inline void trim(PrimePoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // p prime, a != 0: a^(p-2)
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

// Remainder of a modulo b over GF(p); b nonzero.
inline PrimePoly poly_mod(PrimePoly a, PrimePoly b, std::uint32_t p) {
  trim(a);
  trim(b);
  const std::uint32_t lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t c = std::uint64_t(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * b[i]) % p);
    trim(a);
  }
  return a;
}

inline bool poly_has_root(const PrimePoly& f, std::uint32_t p) {
  for (std::uint32_t x = 0; x < p; ++x) {
    std::uint64_t v = 0;
    for (std::size_t i = f.size(); i-- > 0;) v = (v * x + f[i]) % p;
    if (v == 0) return true;
  }
  return false;
}

// Brute-force irreducibility: no monic divisor of degree 1..deg/2.
inline bool poly_irreducible(const PrimePoly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg <= 3) return !poly_has_root(f, p);
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    PrimePoly g(d + 1, 0);
    g[d] = 1;
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t t = c;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

struct FieldTables {
  std::vector<Elem> add, mul, neg, inv;
};

}  // namespace detail

/// Kind tag for the checked entry point `field_op`.
enum class FieldOp { Add, Mul, Neg, Inv };

class Field {
 public:
  /// Builds GF(p^k). For k >= 2 a missing modulus is replaced by the
  /// lexicographically least irreducible monic polynomial (coefficients
  /// compared from degree k-1 down to 0).
  static Field make(std::uint32_t p, std::uint32_t k = 1,
                    std::optional<std::vector<std::uint32_t>> modulus = std::nullopt) {
    if (k < 1) throw Error(Errc::UnsupportedDegree, "extension degree must be >= 1");
    if (!detail::is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      q *= p;
      if (q > (1u << 30)) throw Error(Errc::UnsupportedDegree, "field too large");
    }
    Field f;
    f.p_ = p;
    f.k_ = k;
    f.q_ = static_cast<std::uint32_t>(q);
    if (k >= 2) {
      if (modulus) {
        const auto& m = *modulus;
        if (m.size() != k + 1 || m.back() != 1)
          throw Error(Errc::Parse, "modulus must be monic of degree " + std::to_string(k));
        for (auto c : m)
          if (c >= p) throw Error(Errc::Parse, "modulus coefficient out of range");
        if (!detail::poly_irreducible(m, p)) throw Error(Errc::Reducible, "supplied modulus is reducible");
        f.modulus_ = m;
      } else {
        f.modulus_ = least_irreducible(p, k);
      }
    } else if (modulus && !modulus->empty()) {
      throw Error(Errc::Parse, "a prime field takes no modulus");
    }
    f.build_tables();
    return f;
  }

  /// GF(q) for a prime power q, with the default modulus.
  static Field from_order(std::uint32_t q) {
    if (q < 2) throw Error(Errc::NotPrime, "field order must be a prime power");
    std::uint32_t p = 2;
    while (q % p != 0) ++p;
    std::uint32_t k = 0, r = q;
    while (r % p == 0) r /= p, ++k;
    if (r != 1) throw Error(Errc::NotPrime, std::to_string(q) + " is not a prime power");
    return make(p, k);
  }

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t k() const noexcept { return k_; }
  std::uint32_t q() const noexcept { return q_; }
  std::uint32_t characteristic() const noexcept { return p_; }
  /// Monic defining polynomial (little-endian); empty for prime fields.
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }
  bool is_prime_field() const noexcept { return k_ == 1; }

  static constexpr Elem zero() noexcept { return 0; }
  static constexpr Elem one() noexcept { return 1; }

  /// The adjoined root t (only meaningful for k >= 2).
  Elem generator() const noexcept { return k_ >= 2 ? p_ : 0; }

  bool contains(Elem a) const noexcept { return a < q_; }
  bool in_prime_subfield(Elem a) const noexcept { return a < p_; }

  Elem from_int(long long v) const noexcept {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Elem>(r);
  }

  Elem add(Elem a, Elem b) const noexcept {
    if (tables_) return tables_->add[a * q_ + b];
    if (k_ == 1) return static_cast<Elem>((std::uint64_t(a) + b) % p_);
    Elem r = 0, pw = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      r += ((a % p_ + b % p_) % p_) * pw;
      a /= p_;
      b /= p_;
      pw *= p_;
    }
    return r;
  }

  Elem neg(Elem a) const noexcept {
    if (tables_) return tables_->neg[a];
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    Elem r = 0, pw = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      r += ((p_ - a % p_) % p_) * pw;
      a /= p_;
      pw *= p_;
    }
    return r;
  }

  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const noexcept {
    if (tables_) return tables_->mul[a * q_ + b];
    return mul_slow(a, b);
  }

  Elem inv(Elem a) const {
    if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
    if (tables_) return tables_->inv[a];
    return pow(a, q_ - 2);
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::uint64_t e) const noexcept {
    Elem r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  /// Checked arithmetic: rejects representatives that do not belong here.
  Elem field_op(FieldOp op, Elem a, Elem b = 0) const {
    if (!contains(a) || ((op == FieldOp::Add || op == FieldOp::Mul) && !contains(b)))
      throw Error(Errc::FieldMismatch, "element outside GF(" + std::to_string(q_) + ")");
    switch (op) {
      case FieldOp::Add: return add(a, b);
      case FieldOp::Mul: return mul(a, b);
      case FieldOp::Neg: return neg(a);
      case FieldOp::Inv: return inv(a);
    }
    return 0;
  }

  std::vector<std::uint32_t> digits(Elem a) const {
    std::vector<std::uint32_t> d(k_);
    for (auto& x : d) {
      x = a % p_;
      a /= p_;
    }
    return d;
  }

  Elem from_digits(const std::vector<std::uint32_t>& d) const {
    Elem r = 0;
    for (std::size_t i = d.size(); i-- > 0;) r = r * p_ + d[i] % p_;
    return r;
  }

  bool operator==(const Field& o) const noexcept {
    return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_;
  }

 private:
  Field() = default;

  static std::vector<std::uint32_t> least_irreducible(std::uint32_t p, std::uint32_t k) {
    // Iterate (c_{k-1}, ..., c_0) in lexicographic order.
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < k; ++i) count *= p;
    std::vector<std::uint32_t> f(k + 1, 0);
    f[k] = 1;
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t t = c;
      for (std::uint32_t i = 0; i < k; ++i) {
        f[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      if (detail::poly_irreducible(f, p)) return f;
    }
    throw Error(Errc::Reducible, "no irreducible polynomial found");
  }

  Elem mul_slow(Elem a, Elem b) const {
    if (k_ == 1) return static_cast<Elem>(std::uint64_t(a) * b % p_);
    auto da = digits(a), db = digits(b);
    detail::PrimePoly prod(2 * k_ - 1, 0);
    for (std::uint32_t i = 0; i < k_; ++i)
      for (std::uint32_t j = 0; j < k_; ++j)
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t(da[i]) * db[j]) % p_);
    auto r = detail::poly_mod(prod, modulus_, p_);
    r.resize(k_, 0);
    return from_digits(r);
  }

  void build_tables() {
    if (q_ > 256) return;
    auto t = std::make_shared<detail::FieldTables>();
    t->add.resize(std::size_t(q_) * q_);
    t->mul.resize(std::size_t(q_) * q_);
    t->neg.resize(q_);
    t->inv.assign(q_, 0);
    for (Elem a = 0; a < q_; ++a) {
      for (Elem b = 0; b < q_; ++b) {
        Elem s = 0, pw = 1, x = a, y = b;
        for (std::uint32_t i = 0; i < k_; ++i) {
          s += ((x % p_ + y % p_) % p_) * pw;
          x /= p_;
          y /= p_;
          pw *= p_;
        }
        t->add[a * q_ + b] = s;
        t->mul[a * q_ + b] = mul_slow(a, b);
      }
    }
    for (Elem a = 0; a < q_; ++a)
      for (Elem b = 0; b < q_; ++b)
        if (t->add[a * q_ + b] == 0) t->neg[a] = b;
    for (Elem a = 1; a < q_; ++a)
      for (Elem b = 1; b < q_; ++b)
        if (t->mul[a * q_ + b] == 1) t->inv[a] = b;
    tables_ = std::move(t);
  }

  std::uint32_t p_ = 2, k_ = 1, q_ = 2;
  std::vector<std::uint32_t> modulus_;
  std::shared_ptr<const detail::FieldTables> tables_;
};

/// Lexicographically least (a, b) such that t^2 + a t + b has no root in F.
inline std::pair<Elem, Elem> find_irreducible_quadratic(const Field& F) {
  for (Elem a = 0; a < F.q(); ++a)
    for (Elem b = 0; b < F.q(); ++b) {
      bool rootless = true;
      for (Elem x = 0; x < F.q() && rootless; ++x)
        if (F.add(F.add(F.mul(x, x), F.mul(a, x)), b) == 0) rootless = false;
      if (rootless) return {a, b};
    }
  throw Error(Errc::Reducible, "field is quadratically closed");  // unreachable for finite fields
}

/// Monic t^2 + a t + b with P(omega) = 0, a, b in the prime subfield.
/// Requires k == 2 and omega outside the prime subfield.
inline std::pair<Elem, Elem> characteristic_quadratic(const Field& Fbar, Elem omega) {
  if (Fbar.k() != 2) throw Error(Errc::UnsupportedDegree, "quadratic extension required");
  if (!Fbar.contains(omega)) throw Error(Errc::FieldMismatch, "omega outside the extension");
  if (Fbar.in_prime_subfield(omega)) throw Error(Errc::NotAGenerator, "omega lies in the base field");
  const Elem sq = Fbar.mul(omega, omega);
  for (Elem a = 0; a < Fbar.p(); ++a)
    for (Elem b = 0; b < Fbar.p(); ++b)
      if (Fbar.add(Fbar.add(sq, Fbar.mul(a, omega)), b) == 0) return {a, b};
  throw Error(Errc::NotAGenerator, "omega has no quadratic relation");
}

}  // namespace flaghyp
