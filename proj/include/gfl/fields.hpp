#pragma once
// Arithmetic in GF(p^m) on packed element values, plus the mod-p binomial
// and q-power bracket helpers used by every module downstream.

#include <cstdint>
#include <string>
#include <vector>

namespace gfl {

/// Runtime description of a finite field GF(q), q = p^m, modulo a caller
/// supplied monic irreducible polynomial over GF(p) (coefficients low to
/// high, length m+1). Elements travel as packed uint16_t values: the base-p
/// digit encoding of the reduced coefficient sequence, digit i = coefficient
/// of t^i. For q <= kTableLimit the constructor builds full multiplication /
/// addition tables so packed arithmetic is two array lookups.
class FieldSpec {
public:
    static constexpr unsigned kTableLimit = 256;

    FieldSpec(unsigned p, unsigned m, std::vector<unsigned> poly);

    unsigned p() const { return p_; }
    unsigned m() const { return m_; }
    unsigned q() const { return q_; }
    const std::vector<unsigned>& modulus() const { return poly_; }

    uint16_t add(uint16_t a, uint16_t b) const;
    uint16_t sub(uint16_t a, uint16_t b) const;
    uint16_t neg(uint16_t a) const;
    uint16_t mul(uint16_t a, uint16_t b) const;
    uint16_t inv(uint16_t a) const;  // throws std::domain_error at 0
    uint16_t pow(uint16_t a, uint64_t e) const;
    uint16_t frobenius(uint16_t a, unsigned k = 1) const;  // a^(p^k)

    /// Integer scalar embedded through the prime subfield.
    uint16_t from_int(uint64_t c) const { return static_cast<uint16_t>(c % p_); }

    std::vector<unsigned> coeffs_of(uint16_t v) const;
    uint16_t from_coeffs(const std::vector<unsigned>& coeffs) const;

    /// Same field presentation: equal (p, m, modulus).
    bool same(const FieldSpec& other) const;

    bool has_tables() const { return tables_; }
    // Raw table rows for hot elimination loops; valid only when has_tables().
    const uint16_t* mul_row(uint16_t a) const { return &mul_table_[size_t(a) * q_]; }
    const uint16_t* sub_table() const { return sub_table_.data(); }
    const uint16_t* add_table() const { return add_table_.data(); }

    std::string to_string() const;

private:
    unsigned p_ = 0, m_ = 0, q_ = 0;
    std::vector<unsigned> poly_;
    bool tables_ = false;
    std::vector<uint16_t> add_table_, sub_table_, mul_table_;
    std::vector<uint16_t> neg_table_, inv_table_, frob_table_;

    uint16_t add_slow(uint16_t a, uint16_t b) const;
    uint16_t neg_slow(uint16_t a) const;
    uint16_t mul_slow(uint16_t a, uint16_t b) const;
};

/// Value-semantics wrapper for readable field expressions in client code and
/// tests. The matrix engine works on packed values directly.
class FieldElement {
public:
    FieldElement(const FieldSpec& f, uint16_t packed) : f_(&f), v_(packed) {}

    uint16_t value() const { return v_; }
    const FieldSpec& field() const { return *f_; }
    std::vector<unsigned> coeffs() const { return f_->coeffs_of(v_); }

    FieldElement inverse() const { return {*f_, f_->inv(v_)}; }
    FieldElement frobenius(unsigned k = 1) const { return {*f_, f_->frobenius(v_, k)}; }
    FieldElement pow(uint64_t e) const { return {*f_, f_->pow(v_, e)}; }

    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator/=(const FieldElement& o);

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
    friend FieldElement operator-(const FieldElement& a) { return {*a.f_, a.f_->neg(a.v_)}; }
    friend bool operator==(const FieldElement& a, const FieldElement& b);
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

private:
    const FieldSpec* f_;
    uint16_t v_;
};

/// Binomial coefficient C(n, k) mod p by Lucas' digit product; 0 when k > n.
unsigned binom_mod_p(uint64_t n, uint64_t k, unsigned p);

/// C(a+b, a) mod p without forming a+b first: zero iff adding a and b in
/// base p carries (Kummer), otherwise the digitwise product.
unsigned binom_sum_mod_p(uint64_t a, uint64_t b, unsigned p);

/// q-power bracket q^s - 1 (so 0 at s = 0); throws std::overflow_error when
/// q^s leaves the uint64 range.
uint64_t bracket(unsigned s, unsigned q);
uint64_t bracket_seq(const std::vector<unsigned>& s, unsigned q);

/// Shipped presentations (Conway-style moduli) for q in {2,3,4,5,7,8,9}.
FieldSpec default_field_spec(unsigned q);

/// Accepts "q" (shipped presentation) or "p,m,c0,c1,...,cm" low-to-high.
FieldSpec parse_field_spec(const std::string& text);

}  // namespace gfl
