#pragma once
// The divided power functors Gamma^n on finite free modules over GF(q),
// materialized on the exponent-vector basis, together with their product,
// coproduct, Verschiebung operators and the kernel functors cut out by them.
//
// Basis convention used everywhere: Gamma^n(F^d) has one basis element
// e^(a) per exponent vector a of length d with |a| = n, enumerated in
// descending lexicographic order, so (n,0,...,0) is index 0 and
// (0,...,0,n) is the last index. Tensor bases pair ranks with the first
// factor as the major index, matching linalg's Kronecker convention.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "gfl/fields.hpp"
#include "gfl/linalg.hpp"

namespace gfl {

using Exps = std::vector<uint32_t>;

/// Number of exponent vectors: C(n + d - 1, d - 1); 0 for n < 0.
uint64_t gamma_dim(int64_t n, unsigned d);            // throws std::overflow_error
uint64_t gamma_dim_saturating(int64_t n, unsigned d); // UINT64_MAX on overflow

/// Materialized basis (shared, memoized, safe for concurrent readers).
class GammaBasis {
public:
    static std::shared_ptr<const GammaBasis> get(uint64_t degree, unsigned dim);
    static void clear_memo();

    uint64_t degree() const { return n_; }
    unsigned coords() const { return d_; }
    uint64_t dim() const { return count_; }
    const uint32_t* exps(uint64_t i) const { return &flat_[i * d_]; }
    Exps exps_vec(uint64_t i) const { return Exps(exps(i), exps(i) + d_); }
    uint64_t rank_of(const uint32_t* e) const;
    uint64_t rank_of(const Exps& e) const { return rank_of(e.data()); }

private:
    GammaBasis(uint64_t n, unsigned d);
    uint64_t n_;
    unsigned d_;
    uint64_t count_;
    size_t stride_;
    std::vector<uint64_t> choose_;  // choose_[k * stride_ + x] = C(x, k)
    std::vector<uint32_t> flat_;
};

/// Sparse element of Gamma^degree(F^dim); keys are exponent vectors.
class GammaElement {
public:
    GammaElement(const FieldSpec& f, uint64_t degree, unsigned dim)
        : field_(&f), degree_(degree), dim_(dim) {}

    static GammaElement one(const FieldSpec& f, unsigned dim);  // unit of Gamma^0
    static GammaElement basis_element(const FieldSpec& f, Exps e, uint16_t coeff = 1);

    const FieldSpec& field() const { return *field_; }
    uint64_t degree() const { return degree_; }
    unsigned coords() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exps, uint16_t>& terms() const { return terms_; }

    void add_term(const Exps& e, uint16_t val);
    GammaElement scaled(uint16_t c) const;

    std::vector<uint16_t> to_column(const GammaBasis& basis) const;

    friend bool operator==(const GammaElement& a, const GammaElement& b);
    friend bool operator!=(const GammaElement& a, const GammaElement& b) { return !(a == b); }
    friend GammaElement divided_power_of_vector(const FieldSpec& f,
                                                const std::vector<uint16_t>& v, uint64_t k);

private:
    const FieldSpec* field_;
    uint64_t degree_;
    unsigned dim_;
    std::map<Exps, uint16_t> terms_;
};

/// Sparse element of Gamma^deg1 (x) Gamma^deg2 over the same coordinates.
/// Degrees may be negative, in which case the module is zero.
class TensorElement {
public:
    TensorElement(const FieldSpec& f, int64_t deg1, int64_t deg2, unsigned dim)
        : field_(&f), deg1_(deg1), deg2_(deg2), dim_(dim) {}

    const FieldSpec& field() const { return *field_; }
    int64_t deg1() const { return deg1_; }
    int64_t deg2() const { return deg2_; }
    unsigned coords() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<std::pair<Exps, Exps>, uint16_t>& terms() const { return terms_; }

    void add_term(const Exps& u, const Exps& v, uint16_t val);

    /// Coordinates w.r.t. rank(u) * basis2.dim() + rank(v).
    std::vector<uint16_t> to_column(const GammaBasis& basis1, const GammaBasis& basis2) const;

    friend bool operator==(const TensorElement& a, const TensorElement& b);
    friend bool operator!=(const TensorElement& a, const TensorElement& b) { return !(a == b); }

private:
    const FieldSpec* field_;
    int64_t deg1_, deg2_;
    unsigned dim_;
    std::map<std::pair<Exps, Exps>, uint16_t> terms_;
};

/// Divided power product: e^(a) e^(b) = prod_j C(a_j + b_j, a_j) e^(a+b),
/// extended bilinearly. Binomials are taken mod p via carry inspection.
GammaElement product(const GammaElement& x, const GammaElement& y);

/// Coproduct component Delta_{a,b}: all componentwise splits, coefficient 1.
TensorElement coproduct(const GammaElement& z, int64_t a, int64_t b);

/// x^(k) for x = sum v_j e_j: sum over |a| = k of prod v_j^{a_j} e^(a).
GammaElement divided_power_of_vector(const FieldSpec& f, const std::vector<uint16_t>& v,
                                     uint64_t k);

/// Plain tensor x (x) y (no binomial coefficients).
TensorElement tensor_of(const GammaElement& x, const GammaElement& y);

/// Inverse of GammaElement::to_column for the same basis.
GammaElement from_column(const FieldSpec& f, const GammaBasis& basis,
                         const std::vector<uint16_t>& col);

/// Calls fn for every length-|caps| vector with the given coordinate caps and
/// coordinate sum; the pointer stays owned by the enumerator.
void for_each_bounded(uint64_t sum, const std::vector<uint32_t>& caps,
                      const std::function<void(const uint32_t*)>& fn);

/// Matrix of Gamma^n(f) for a linear map f: F^d -> F^{d'} (f is d' x d).
MatrixFq gamma_map(const MatrixFq& f, uint64_t n);

/// Matrix of Delta_{a,b}: Gamma^{a+b} -> Gamma^a (x) Gamma^b.
MatrixFq coproduct_matrix(const FieldSpec& f, unsigned d, uint64_t a, uint64_t b);

/// Matrix of the product Gamma^a (x) Gamma^b -> Gamma^{a+b}.
MatrixFq product_matrix(const FieldSpec& f, unsigned d, uint64_t a, uint64_t b);

/// Verschiebung against the p-th power: Gamma^{pn} -> Gamma^n sends e^(a) to
/// e^(a/p) when p divides a componentwise and to 0 otherwise.
MatrixFq verschiebung_p(const FieldSpec& f, uint64_t n, unsigned d);

/// Full Verschiebung for q = p^m: Gamma^{qn} -> Gamma^n, the m-fold iterate.
MatrixFq verschiebung_q(const FieldSpec& f, uint64_t n, unsigned d);

/// Kernel of Gamma^n -> Gamma^{n-q} (x) Gamma^1, the (1 (x) V) o Delta
/// composite; the whole of Gamma^n when n < q.
std::vector<GammaElement> tilde_gamma_kernel(const FieldSpec& f, uint64_t n, unsigned d);

/// Same with p in place of q (coincides with the above when m = 1).
std::vector<GammaElement> bar_gamma_kernel(const FieldSpec& f, uint64_t n, unsigned d);

/// The matrix whose kernel tilde_gamma_kernel computes; exposed for tests.
MatrixFq tilde_gamma_matrix(const FieldSpec& f, uint64_t n, unsigned d);
MatrixFq bar_gamma_matrix(const FieldSpec& f, uint64_t n, unsigned d);

/// #{a in [0, bound]^d : |a| = n}; the expected kernel dimensions.
uint64_t bounded_count(int64_t n, unsigned d, uint64_t bound);

/// Entrywise a -> a^(p^k); the coefficient twist appearing in naturality
/// statements for verschiebung_p over non-prime fields.
MatrixFq frobenius_entrywise(const MatrixFq& m, unsigned k = 1);

}  // namespace gfl
