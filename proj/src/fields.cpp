#include "gfl/fields.hpp"

#include <sstream>
#include <stdexcept>

namespace gfl {
namespace {

bool is_prime(unsigned p) {
    if (p < 2) return false;
    for (unsigned i = 2; i * i <= p; ++i)
        if (p % i == 0) return false;
    return true;
}

// Polynomial remainder over GF(p), coefficients low-to-high, divisor monic.
std::vector<unsigned> poly_rem(std::vector<unsigned> a, const std::vector<unsigned>& b, unsigned p) {
    const size_t db = b.size() - 1;
    while (a.size() > db) {
        unsigned lead = a.back();
        size_t shift = a.size() - 1 - db;
        if (lead != 0) {
            for (size_t i = 0; i <= db; ++i) {
                unsigned& c = a[shift + i];
                c = (c + p * lead - lead * b[i] % p) % p;
            }
        }
        a.pop_back();
    }
    return a;
}

bool is_zero_poly(const std::vector<unsigned>& a) {
    for (unsigned c : a)
        if (c) return false;
    return true;
}

// Exhaustive low-degree factor search; enough for m <= 4 where a reducible
// polynomial must have a factor of degree <= m/2 <= 2.
void check_irreducible(const std::vector<unsigned>& poly, unsigned p, unsigned m) {
    for (unsigned deg = 1; deg <= m / 2; ++deg) {
        std::vector<unsigned> div(deg + 1, 0);
        div[deg] = 1;
        uint64_t count = 1;
        for (unsigned i = 0; i < deg; ++i) count *= p;
        for (uint64_t code = 0; code < count; ++code) {
            uint64_t c = code;
            for (unsigned i = 0; i < deg; ++i) {
                div[i] = static_cast<unsigned>(c % p);
                c /= p;
            }
            if (is_zero_poly(poly_rem(poly, div, p)))
                throw std::invalid_argument("field modulus is reducible");
        }
    }
}

}  // namespace

FieldSpec::FieldSpec(unsigned p, unsigned m, std::vector<unsigned> poly)
    : p_(p), m_(m), poly_(std::move(poly)) {
    if (!is_prime(p_)) throw std::invalid_argument("field characteristic must be prime");
    if (m_ < 1 || m_ > 4) throw std::invalid_argument("extension degree must be in [1, 4]");
    uint64_t q = 1;
    for (unsigned i = 0; i < m_; ++i) q *= p_;
    if (q > 65536) throw std::invalid_argument("field size exceeds 2^16");
    q_ = static_cast<unsigned>(q);
    if (poly_.size() != m_ + 1) throw std::invalid_argument("modulus must have degree m");
    for (unsigned c : poly_)
        if (c >= p_) throw std::invalid_argument("modulus coefficients must be reduced mod p");
    if (poly_[m_] != 1) throw std::invalid_argument("modulus must be monic");
    if (m_ >= 2) check_irreducible(poly_, p_, m_);

    if (q_ <= kTableLimit) {
        add_table_.resize(size_t(q_) * q_);
        sub_table_.resize(size_t(q_) * q_);
        mul_table_.resize(size_t(q_) * q_);
        neg_table_.resize(q_);
        for (unsigned a = 0; a < q_; ++a) {
            neg_table_[a] = neg_slow(static_cast<uint16_t>(a));
            for (unsigned b = 0; b < q_; ++b) {
                add_table_[size_t(a) * q_ + b] = add_slow(a, b);
                mul_table_[size_t(a) * q_ + b] = mul_slow(a, b);
            }
        }
        for (unsigned a = 0; a < q_; ++a)
            for (unsigned b = 0; b < q_; ++b)
                sub_table_[size_t(a) * q_ + b] = add_table_[size_t(a) * q_ + neg_table_[b]];
        tables_ = true;
        inv_table_.assign(q_, 0);
        frob_table_.assign(q_, 0);
        for (unsigned a = 0; a < q_; ++a) {
            frob_table_[a] = pow(static_cast<uint16_t>(a), p_);
            if (a) inv_table_[a] = pow(static_cast<uint16_t>(a), q_ - 2);
        }
    }
}

uint16_t FieldSpec::add_slow(uint16_t a, uint16_t b) const {
    if (p_ == 2) return a ^ b;
    uint16_t r = 0;
    unsigned scale = 1;
    for (unsigned i = 0; i < m_; ++i) {
        r = static_cast<uint16_t>(r + scale * ((a % p_ + b % p_) % p_));
        a = static_cast<uint16_t>(a / p_);
        b = static_cast<uint16_t>(b / p_);
        scale *= p_;
    }
    return r;
}

uint16_t FieldSpec::neg_slow(uint16_t a) const {
    if (p_ == 2) return a;
    uint16_t r = 0;
    unsigned scale = 1;
    for (unsigned i = 0; i < m_; ++i) {
        r = static_cast<uint16_t>(r + scale * ((p_ - a % p_) % p_));
        a = static_cast<uint16_t>(a / p_);
        scale *= p_;
    }
    return r;
}

uint16_t FieldSpec::mul_slow(uint16_t a, uint16_t b) const {
    unsigned da[8] = {0}, db[8] = {0}, prod[16] = {0};
    for (unsigned i = 0; i < m_; ++i) {
        da[i] = a % p_;
        a = static_cast<uint16_t>(a / p_);
        db[i] = b % p_;
        b = static_cast<uint16_t>(b / p_);
    }
    for (unsigned i = 0; i < m_; ++i)
        for (unsigned j = 0; j < m_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    // reduce by the monic modulus from the top degree down
    for (int k = 2 * int(m_) - 2; k >= int(m_); --k) {
        unsigned c = prod[k];
        if (!c) continue;
        prod[k] = 0;
        for (unsigned i = 0; i < m_; ++i) {
            unsigned idx = k - m_ + i;
            prod[idx] = (prod[idx] + p_ * c - c * poly_[i] % p_) % p_;
        }
    }
    uint16_t r = 0;
    unsigned scale = 1;
    for (unsigned i = 0; i < m_; ++i) {
        r = static_cast<uint16_t>(r + scale * prod[i]);
        scale *= p_;
    }
    return r;
}

uint16_t FieldSpec::add(uint16_t a, uint16_t b) const {
    if (p_ == 2) return a ^ b;
    if (tables_) return add_table_[size_t(a) * q_ + b];
    return add_slow(a, b);
}

uint16_t FieldSpec::sub(uint16_t a, uint16_t b) const {
    if (p_ == 2) return a ^ b;
    if (tables_) return sub_table_[size_t(a) * q_ + b];
    return add_slow(a, neg_slow(b));
}

uint16_t FieldSpec::neg(uint16_t a) const {
    if (p_ == 2) return a;
    if (tables_) return neg_table_[a];
    return neg_slow(a);
}

uint16_t FieldSpec::mul(uint16_t a, uint16_t b) const {
    if (tables_) return mul_table_[size_t(a) * q_ + b];
    return mul_slow(a, b);
}

uint16_t FieldSpec::inv(uint16_t a) const {
    if (a == 0) throw std::domain_error("division by zero field element");
    if (tables_) return inv_table_[a];
    return pow(a, q_ - 2);
}

uint16_t FieldSpec::pow(uint16_t a, uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (a == 1) return 1;
    e %= (q_ - 1);  // multiplicative group order
    if (e == 0) return 1;
    uint16_t base = a, r = 1;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

uint16_t FieldSpec::frobenius(uint16_t a, unsigned k) const {
    k %= m_;
    uint16_t r = a;
    for (unsigned i = 0; i < k; ++i) r = tables_ ? frob_table_[r] : pow(r, p_);
    return r;
}

std::vector<unsigned> FieldSpec::coeffs_of(uint16_t v) const {
    std::vector<unsigned> c(m_);
    for (unsigned i = 0; i < m_; ++i) {
        c[i] = v % p_;
        v = static_cast<uint16_t>(v / p_);
    }
    return c;
}

uint16_t FieldSpec::from_coeffs(const std::vector<unsigned>& coeffs) const {
    if (coeffs.size() != m_) throw std::invalid_argument("coefficient sequence must have length m");
    uint16_t v = 0;
    unsigned scale = 1;
    for (unsigned i = 0; i < m_; ++i) {
        if (coeffs[i] >= p_) throw std::invalid_argument("coefficients must be reduced mod p");
        v = static_cast<uint16_t>(v + scale * coeffs[i]);
        scale *= p_;
    }
    return v;
}

bool FieldSpec::same(const FieldSpec& other) const {
    return p_ == other.p_ && m_ == other.m_ && poly_ == other.poly_;
}

std::string FieldSpec::to_string() const {
    std::ostringstream os;
    os << "GF(" << q_ << ")";
    if (m_ > 1) {
        os << " = GF(" << p_ << "^" << m_ << "), modulus";
        for (unsigned i = 0; i <= m_; ++i) {
            if (i) os << " +";
            os << " " << poly_[i];
            if (i == 1) os << "t";
            if (i > 1) os << "t^" << i;
        }
    }
    return os.str();
}

namespace {
void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (!a.field().same(b.field()))
        throw std::invalid_argument("field elements belong to different field presentations");
}
}  // namespace

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    require_same_field(*this, o);
    v_ = f_->add(v_, o.v_);
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    require_same_field(*this, o);
    v_ = f_->sub(v_, o.v_);
    return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    require_same_field(*this, o);
    v_ = f_->mul(v_, o.v_);
    return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
    require_same_field(*this, o);
    v_ = f_->mul(v_, f_->inv(o.v_));
    return *this;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.f_->same(*b.f_) && a.v_ == b.v_;
}

unsigned binom_mod_p(uint64_t n, uint64_t k, unsigned p) {
    if (k > n) return 0;
    // small Pascal rows are enough for one digit pair
    unsigned acc = 1;
    while (n | k) {
        uint64_t dn = n % p, dk = k % p;
        if (dk > dn) return 0;
        // C(dn, dk) with dn < p <= 251 fits easily
        uint64_t c = 1;
        for (uint64_t i = 0; i < dk; ++i) c = c * (dn - i) / (i + 1);
        acc = static_cast<unsigned>(acc * (c % p) % p);
        n /= p;
        k /= p;
    }
    return acc;
}

unsigned binom_sum_mod_p(uint64_t a, uint64_t b, unsigned p) {
    if (p == 2) return (a & b) ? 0u : 1u;  // carry-free addition test
    unsigned acc = 1;
    while (a | b) {
        uint64_t da = a % p, db = b % p;
        if (da + db >= p) return 0;  // base-p carry kills the binomial
        uint64_t c = 1;
        for (uint64_t i = 0; i < db; ++i) c = c * (da + db - i) / (i + 1);
        acc = static_cast<unsigned>(acc * (c % p) % p);
        a /= p;
        b /= p;
    }
    return acc;
}

uint64_t bracket(unsigned s, unsigned q) {
    if (q < 2) throw std::invalid_argument("bracket needs q >= 2");
    uint64_t r = 1;
    for (unsigned i = 0; i < s; ++i) {
        if (r > (UINT64_MAX - 1) / q) throw std::overflow_error("q^s exceeds 64-bit range");
        r *= q;
    }
    return r - 1;
}

uint64_t bracket_seq(const std::vector<unsigned>& s, unsigned q) {
    uint64_t total = 0;
    for (unsigned si : s) {
        uint64_t b = bracket(si, q);
        if (total > UINT64_MAX - b) throw std::overflow_error("bracket sum exceeds 64-bit range");
        total += b;
    }
    return total;
}

FieldSpec default_field_spec(unsigned q) {
    switch (q) {
        case 2: return FieldSpec(2, 1, {1, 1});
        case 3: return FieldSpec(3, 1, {1, 1});
        case 4: return FieldSpec(2, 2, {1, 1, 1});
        case 5: return FieldSpec(5, 1, {3, 1});
        case 7: return FieldSpec(7, 1, {4, 1});
        case 8: return FieldSpec(2, 3, {1, 1, 0, 1});
        case 9: return FieldSpec(3, 2, {2, 2, 1});
        default: throw std::invalid_argument("no shipped presentation for this q");
    }
}

FieldSpec parse_field_spec(const std::string& text) {
    std::vector<unsigned> nums;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw std::invalid_argument("empty entry in field description");
        size_t pos = 0;
        unsigned long v = std::stoul(tok, &pos);
        if (pos != tok.size() || v > 65536) throw std::invalid_argument("bad field description entry");
        nums.push_back(static_cast<unsigned>(v));
    }
    if (nums.empty()) throw std::invalid_argument("empty field description");
    if (nums.size() == 1) return default_field_spec(nums[0]);
    if (nums.size() < 3) throw std::invalid_argument("field description needs p,m,c0,...,cm");
    unsigned p = nums[0], m = nums[1];
    std::vector<unsigned> poly(nums.begin() + 2, nums.end());
    if (poly.size() != size_t(m) + 1)
        throw std::invalid_argument("field description: modulus needs m+1 coefficients");
    return FieldSpec(p, m, poly);
}

}  // namespace gfl
