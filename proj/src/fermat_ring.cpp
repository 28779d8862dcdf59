#include "ftc/fermat_ring.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace ftc {

struct RingContext::Impl {
  std::uint32_t d;
  PrimeModulus p;
  mutable std::mutex lock;
  mutable std::unordered_map<std::uint64_t, std::vector<NormalMonomial>> basis_cache;

  Impl(std::uint32_t d_, std::uint64_t p_) : d(d_), p(p_) {}
};

RingContext::RingContext(std::uint32_t d, std::uint64_t p) {
  if (d < 3) throw ConfigInvalid("Fermat degree d must be >= 3, got " + std::to_string(d));
  PrimeModulus pm(p);  // throws NotPrime
  // p | d makes x^d + y^d - z^d a p-th power and the quotient not a domain.
  if (d % p == 0)
    throw ConfigInvalid("p = " + std::to_string(p) + " divides d = " + std::to_string(d));
  if (p >= (1ull << 31))
    throw ConfigInvalid("p = " + std::to_string(p) + " exceeds the ring computation range");
  impl_ = std::make_shared<const Impl>(d, p);
}

std::uint32_t RingContext::d() const { return impl_->d; }
std::uint64_t RingContext::p() const { return impl_->p.value(); }
PrimeModulus RingContext::modulus() const { return impl_->p; }

std::uint64_t RingContext::dim_graded_piece(std::uint64_t n) const {
  const std::uint64_t d = impl_->d;
  std::uint64_t cmax = std::min<std::uint64_t>(d - 1, n);
  // sum_{c=0}^{cmax} (n - c + 1)
  return (cmax + 1) * (n + 1) - cmax * (cmax + 1) / 2;
}

const std::vector<NormalMonomial>& RingContext::graded_basis(std::uint64_t n) const {
  std::lock_guard<std::mutex> g(impl_->lock);
  auto it = impl_->basis_cache.find(n);
  if (it != impl_->basis_cache.end()) return it->second;
  std::vector<NormalMonomial> basis;
  basis.reserve(dim_graded_piece(n));
  for (std::uint64_t c = 0; c <= std::min<std::uint64_t>(impl_->d - 1, n); ++c)
    for (std::uint64_t b = 0; b + c <= n; ++b)
      basis.push_back(NormalMonomial{n - c - b, b, c});
  return impl_->basis_cache.emplace(n, std::move(basis)).first->second;
}

std::uint64_t RingContext::basis_index(const NormalMonomial& m) const {
  const std::uint64_t n = m.degree();
  // strata c' < c contribute n - c' + 1 monomials each
  return m.c * (n + 1) - m.c * (m.c - 1) / 2 + m.b;
}

Poly Poly::zero(const RingContext& ring, std::uint64_t degree) { return Poly(ring, degree); }

Poly Poly::monomial(const RingContext& ring, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                    std::uint64_t coeff) {
  Poly f(ring, checked_add(checked_add(a, b), c));
  f.add_raw(a, b, c, coeff);
  return f;
}

std::uint64_t Poly::coeff(const NormalMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

void Poly::add_raw(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t coeff) {
  const std::uint64_t p = ring_.p();
  const std::uint32_t d = ring_.d();
  coeff %= p;
  if (coeff == 0) return;
  const std::uint64_t q = c / d, r = c % d;
  for (std::uint64_t j = 0; j <= q; ++j) {
    std::uint64_t cf = mul_mod(coeff, binom_mod(q, j, p), p);
    if (cf == 0) continue;
    NormalMonomial m{checked_add(a, checked_mul(d, j)), checked_add(b, checked_mul(d, q - j)), r};
    auto [it, fresh] = terms_.emplace(m, cf);
    if (!fresh) {
      it->second = add_mod(it->second, cf, p);
      if (it->second == 0) terms_.erase(it);
    }
  }
}

void Poly::check_same_ring(const Poly& o) const {
  if (!(ring_ == o.ring_)) throw DegreeMismatch("polynomials from different ring contexts");
}

Poly Poly::operator+(const Poly& o) const {
  check_same_ring(o);
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (degree_ != o.degree_) throw NotHomogeneous("sum of different degrees");
  Poly r = *this;
  const std::uint64_t p = ring_.p();
  for (const auto& [m, v] : o.terms_) {
    auto [it, fresh] = r.terms_.emplace(m, v);
    if (!fresh) {
      it->second = add_mod(it->second, v, p);
      if (it->second == 0) r.terms_.erase(it);
    }
  }
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  const std::uint64_t p = ring_.p();
  return *this + o.scaled(p - 1);
}

Poly Poly::scaled(std::uint64_t s) const {
  const std::uint64_t p = ring_.p();
  s %= p;
  Poly r(ring_, degree_);
  if (s == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace(m, mul_mod(v, s, p));
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  check_same_ring(o);
  Poly r(ring_, checked_add(degree_, o.degree_));
  for (const auto& [m1, v1] : terms_)
    for (const auto& [m2, v2] : o.terms_)
      r.add_raw(checked_add(m1.a, m2.a), checked_add(m1.b, m2.b), checked_add(m1.c, m2.c),
                mul_mod(v1, v2, ring_.p()));
  return r;
}

Poly Poly::pow(std::uint64_t e) const {
  Poly acc = Poly::monomial(ring_, 0, 0, 0, 1);
  if (e == 0) return acc;
  Poly base = *this;
  while (true) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e == 0) break;
    base = base * base;
  }
  return acc;
}

bool operator==(const Poly& f, const Poly& g) {
  if (!(f.ring_ == g.ring_)) return false;
  if (f.is_zero() && g.is_zero()) return true;
  return f.degree_ == g.degree_ && f.terms_ == g.terms_;
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, v] : terms_) {
    if (!first) os << " + ";
    first = false;
    bool bare = (m.a == 0 && m.b == 0 && m.c == 0);
    if (v != 1 || bare) os << v;
    bool sep = (v != 1);
    auto var = [&](const char* name, std::uint64_t e) {
      if (e == 0) return;
      if (sep) os << "*";
      os << name;
      if (e > 1) os << "^" << e;
      sep = true;
    };
    var("x", m.a);
    var("y", m.b);
    var("z", m.c);
  }
  return os.str();
}

Poly normal_form(std::span<const RawTerm> raw, const RingContext& ring) {
  std::uint64_t degree = 0;
  bool seen = false;
  for (const RawTerm& t : raw) {
    if (t.coeff % static_cast<std::int64_t>(ring.p()) == 0) continue;
    std::uint64_t deg = checked_add(checked_add(t.a, t.b), t.c);
    if (!seen) { degree = deg; seen = true; }
    else if (deg != degree) throw NotHomogeneous("raw polynomial mixes degrees");
  }
  Poly f = Poly::zero(ring, degree);
  for (const RawTerm& t : raw) {
    std::int64_t c = t.coeff % static_cast<std::int64_t>(ring.p());
    if (c < 0) c += static_cast<std::int64_t>(ring.p());
    f.add_raw(t.a, t.b, t.c, static_cast<std::uint64_t>(c));
  }
  return f;
}

Poly fermat_power_sum(const RingContext& ring, std::uint64_t k) {
  const std::uint32_t d = ring.d();
  Poly f = Poly::zero(ring, checked_mul(d, k));
  for (std::uint64_t j = 0; j <= k; ++j)
    f.add_raw(checked_mul(d, j), checked_mul(d, k - j), 0, binom_mod(k, j, ring.p()));
  return f;
}

std::optional<Strand> strand_of(const Poly& f) {
  const std::uint32_t d = f.ring().d();
  std::optional<Strand> s;
  for (const auto& [m, v] : f.terms()) {
    Strand t{static_cast<std::uint32_t>(m.a % d), static_cast<std::uint32_t>(m.b % d)};
    if (!s) s = t;
    else if (!(*s == t)) return std::nullopt;
  }
  return s;
}

Poly frobenius_raise(const Poly& f, std::uint64_t q) {
  if (q == 1) return f;
  if (f.is_monomial()) {
    const auto& [m, v] = *f.terms().begin();
    return Poly::monomial(f.ring(), checked_mul(m.a, q), checked_mul(m.b, q),
                          checked_mul(m.c, q), pow_mod(v, q, f.ring().p()));
  }
  return f.pow(q);
}

RawTerm parse_monomial(const std::string& text) {
  RawTerm t;
  t.coeff = 1;
  std::size_t i = 0;
  auto read_uint = [&](std::uint64_t& out) {
    std::uint64_t v = 0;
    bool any = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = checked_add(checked_mul(v, 10), static_cast<std::uint64_t>(text[i] - '0'));
      ++i;
      any = true;
    }
    if (any) out = v;
    return any;
  };
  std::uint64_t lead = 0;
  if (read_uint(lead)) t.coeff = static_cast<std::int64_t>(lead);
  bool any_var = false;
  while (i < text.size()) {
    char v = text[i];
    if (v == '*' || v == ' ') { ++i; continue; }
    if (v != 'x' && v != 'y' && v != 'z')
      throw ConfigInvalid("cannot parse monomial '" + text + "'");
    ++i;
    if (i < text.size() && text[i] == '^') ++i;
    std::uint64_t e = 1;
    read_uint(e);
    std::uint64_t* slot = v == 'x' ? &t.a : v == 'y' ? &t.b : &t.c;
    *slot = checked_add(*slot, e);
    any_var = true;
  }
  if (!any_var && t.coeff == 1 && text.empty())
    throw ConfigInvalid("empty monomial");
  return t;
}

}  // namespace ftc
