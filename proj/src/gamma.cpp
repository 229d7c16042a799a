#include "gfl/gamma.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace gfl {

namespace {
constexpr unsigned kMaxCoords = 16;
constexpr uint64_t kMaxBasisSize = uint64_t(1) << 31;

void check_coords(unsigned d) {
    if (d > kMaxCoords) throw std::invalid_argument("gamma: too many coordinates");
}
}  // namespace

uint64_t gamma_dim(int64_t n, unsigned d) {
    if (n < 0) return 0;
    if (d == 0) return n == 0 ? 1 : 0;
    // C(n + d - 1, d - 1), multiplicatively; each partial product is exact.
    uint64_t r = 1;
    for (unsigned i = 1; i < d; ++i) {
        uint64_t factor = uint64_t(n) + i;
        if (r > UINT64_MAX / factor) throw std::overflow_error("gamma_dim overflow");
        r = r * factor / i;
    }
    return r;
}

uint64_t gamma_dim_saturating(int64_t n, unsigned d) {
    try {
        return gamma_dim(n, d);
    } catch (const std::overflow_error&) {
        return UINT64_MAX;
    }
}

// ---------------------------------------------------------------------------
// GammaBasis

GammaBasis::GammaBasis(uint64_t n, unsigned d) : n_(n), d_(d) {
    check_coords(d);
    count_ = gamma_dim(int64_t(n), d);
    if (count_ > kMaxBasisSize) throw std::length_error("gamma basis too large to materialize");
    if (d == 0) return;

    // Pascal table C(x, k) for k < d, x < n + d; every entry that rank_of
    // reads is at most C(n + d - 2, d - 1) and fits comfortably in 64 bits
    // whenever count_ does.
    stride_ = size_t(n) + d;
    choose_.assign(size_t(d) * stride_, 0);
    for (size_t x = 0; x < stride_; ++x) choose_[x] = 1;
    for (unsigned k = 1; k < d; ++k)
        for (size_t x = k; x < stride_; ++x)
            choose_[k * stride_ + x] =
                choose_[(k - 1) * stride_ + (x - 1)] + choose_[k * stride_ + (x - 1)];

    flat_.reserve(size_t(count_) * d);
    std::vector<uint32_t> buf(d);
    // Descending lexicographic enumeration.
    std::function<void(unsigned, uint64_t)> gen = [&](unsigned pos, uint64_t rem) {
        if (pos + 1 == d_) {
            buf[pos] = uint32_t(rem);
            flat_.insert(flat_.end(), buf.begin(), buf.end());
            return;
        }
        for (int64_t c = int64_t(rem); c >= 0; --c) {
            buf[pos] = uint32_t(c);
            gen(pos + 1, rem - uint64_t(c));
        }
    };
    gen(0, n);
}

uint64_t GammaBasis::rank_of(const uint32_t* e) const {
    uint64_t r = 0;
    uint64_t rem = n_;
    for (unsigned j = 0; j + 1 < d_; ++j) {
        uint64_t a = e[j];
        if (a < rem) {
            // basis vectors with a larger j-th exponent and the same prefix
            unsigned k = d_ - 1 - j;
            r += choose_[size_t(k) * stride_ + size_t(rem - a - 1 + k)];
        }
        rem -= a;
    }
    return r;
}

namespace {
std::map<std::pair<uint64_t, unsigned>, std::shared_ptr<const GammaBasis>>& basis_memo() {
    static std::map<std::pair<uint64_t, unsigned>, std::shared_ptr<const GammaBasis>> memo;
    return memo;
}
std::shared_mutex& basis_mutex() {
    static std::shared_mutex mx;
    return mx;
}
}  // namespace

std::shared_ptr<const GammaBasis> GammaBasis::get(uint64_t degree, unsigned dim) {
    auto key = std::make_pair(degree, dim);
    {
        std::shared_lock lk(basis_mutex());
        auto it = basis_memo().find(key);
        if (it != basis_memo().end()) return it->second;
    }
    std::unique_lock lk(basis_mutex());
    auto& slot = basis_memo()[key];
    if (!slot) slot.reset(new GammaBasis(degree, dim));
    return slot;
}

void GammaBasis::clear_memo() {
    std::unique_lock lk(basis_mutex());
    basis_memo().clear();
}

// ---------------------------------------------------------------------------
// GammaElement

GammaElement GammaElement::one(const FieldSpec& f, unsigned dim) {
    GammaElement e(f, 0, dim);
    e.terms_.emplace(Exps(dim, 0), uint16_t(1));
    return e;
}

GammaElement GammaElement::basis_element(const FieldSpec& f, Exps e, uint16_t coeff) {
    uint64_t deg = 0;
    for (uint32_t x : e) deg += x;
    GammaElement g(f, deg, unsigned(e.size()));
    if (coeff != 0) g.terms_.emplace(std::move(e), coeff);
    return g;
}

void GammaElement::add_term(const Exps& e, uint16_t val) {
    if (val == 0) return;
    if (e.size() != dim_) throw std::invalid_argument("GammaElement: wrong arity");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, val);
    } else {
        uint16_t s = field_->add(it->second, val);
        if (s == 0)
            terms_.erase(it);
        else
            it->second = s;
    }
}

GammaElement GammaElement::scaled(uint16_t c) const {
    GammaElement out(*field_, degree_, dim_);
    if (c == 0) return out;
    for (const auto& [e, v] : terms_) out.terms_.emplace(e, field_->mul(v, c));
    return out;
}

std::vector<uint16_t> GammaElement::to_column(const GammaBasis& basis) const {
    if (basis.degree() != degree_ || basis.coords() != dim_)
        throw std::invalid_argument("GammaElement: basis mismatch");
    std::vector<uint16_t> col(basis.dim(), 0);
    for (const auto& [e, v] : terms_) col[basis.rank_of(e)] = v;
    return col;
}

GammaElement from_column(const FieldSpec& f, const GammaBasis& basis,
                         const std::vector<uint16_t>& col) {
    if (col.size() != basis.dim()) throw std::invalid_argument("from_column: size mismatch");
    GammaElement out(f, basis.degree(), basis.coords());
    for (uint64_t i = basis.dim(); i-- > 0;)
        if (col[size_t(i)] != 0) out.add_term(basis.exps_vec(i), col[size_t(i)]);
    return out;
}

bool operator==(const GammaElement& a, const GammaElement& b) {
    return a.field_->same(*b.field_) && a.degree_ == b.degree_ && a.dim_ == b.dim_ &&
           a.terms_ == b.terms_;
}

// ---------------------------------------------------------------------------
// TensorElement

void TensorElement::add_term(const Exps& u, const Exps& v, uint16_t val) {
    if (val == 0) return;
    if (u.size() != dim_ || v.size() != dim_)
        throw std::invalid_argument("TensorElement: wrong arity");
    auto key = std::make_pair(u, v);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), val);
    } else {
        uint16_t s = field_->add(it->second, val);
        if (s == 0)
            terms_.erase(it);
        else
            it->second = s;
    }
}

std::vector<uint16_t> TensorElement::to_column(const GammaBasis& basis1,
                                               const GammaBasis& basis2) const {
    if (deg1_ < 0 || deg2_ < 0) return {};
    if (basis1.degree() != uint64_t(deg1_) || basis2.degree() != uint64_t(deg2_) ||
        basis1.coords() != dim_ || basis2.coords() != dim_)
        throw std::invalid_argument("TensorElement: basis mismatch");
    std::vector<uint16_t> col(size_t(basis1.dim() * basis2.dim()), 0);
    for (const auto& [key, v] : terms_)
        col[size_t(basis1.rank_of(key.first) * basis2.dim() + basis2.rank_of(key.second))] = v;
    return col;
}

bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.field_->same(*b.field_) && a.deg1_ == b.deg1_ && a.deg2_ == b.deg2_ &&
           a.dim_ == b.dim_ && a.terms_ == b.terms_;
}

// ---------------------------------------------------------------------------
// Structure maps

GammaElement product(const GammaElement& x, const GammaElement& y) {
    if (!x.field().same(y.field()) || x.coords() != y.coords())
        throw std::invalid_argument("product: mismatched elements");
    const FieldSpec& f = x.field();
    unsigned d = x.coords();
    check_coords(d);
    uint64_t deg = x.degree() + y.degree();
    GammaElement out(f, deg, d);
    if (x.is_zero() || y.is_zero()) return out;

    auto basis = GammaBasis::get(deg, d);
    std::vector<uint16_t> acc(size_t(basis->dim()), 0);

    // Snapshot the sparse terms for a tight pair loop.
    std::vector<std::pair<const uint32_t*, uint16_t>> xs, ys;
    xs.reserve(x.terms().size());
    ys.reserve(y.terms().size());
    for (const auto& [e, v] : x.terms()) xs.emplace_back(e.data(), v);
    for (const auto& [e, v] : y.terms()) ys.emplace_back(e.data(), v);

    unsigned p = f.p();
    uint32_t sum[kMaxCoords];
    for (const auto& [ea, ca] : xs) {
        for (const auto& [eb, cb] : ys) {
            unsigned co = 1;
            for (unsigned j = 0; j < d; ++j) {
                co = (co * binom_sum_mod_p(ea[j], eb[j], p)) % p;
                if (co == 0) break;
                sum[j] = ea[j] + eb[j];
            }
            if (co == 0) continue;
            uint16_t val = f.mul(ca, cb);
            if (co != 1) val = f.mul(val, f.from_int(co));
            size_t idx = size_t(basis->rank_of(sum));
            acc[idx] = f.add(acc[idx], val);
        }
    }
    return from_column(f, *basis, acc);
}

void for_each_bounded(uint64_t sum, const std::vector<uint32_t>& caps,
                      const std::function<void(const uint32_t*)>& fn) {
    unsigned d = unsigned(caps.size());
    if (d == 0) {
        if (sum == 0) fn(nullptr);
        return;
    }
    std::vector<uint64_t> sufcap(d + 1, 0);
    for (unsigned j = d; j-- > 0;) sufcap[j] = sufcap[j + 1] + caps[j];
    if (sum > sufcap[0]) return;
    std::vector<uint32_t> buf(d, 0);
    std::function<void(unsigned, uint64_t)> rec = [&](unsigned pos, uint64_t rem) {
        if (pos + 1 == d) {
            buf[pos] = uint32_t(rem);  // rem <= caps[pos] by the bounds below
            fn(buf.data());
            return;
        }
        uint64_t lo = rem > sufcap[pos + 1] ? rem - sufcap[pos + 1] : 0;
        uint64_t hi = std::min<uint64_t>(rem, caps[pos]);
        for (uint64_t c = lo; c <= hi; ++c) {
            buf[pos] = uint32_t(c);
            rec(pos + 1, rem - c);
        }
    };
    rec(0, sum);
}

TensorElement coproduct(const GammaElement& z, int64_t a, int64_t b) {
    if (a + b != int64_t(z.degree())) throw std::invalid_argument("coproduct: degrees must sum");
    unsigned d = z.coords();
    TensorElement out(z.field(), a, b, d);
    if (a < 0 || b < 0) return out;
    for (const auto& [c, val] : z.terms()) {
        for_each_bounded(uint64_t(a), c, [&](const uint32_t* u) {
            Exps eu(u, u + d), ev(d);
            for (unsigned j = 0; j < d; ++j) ev[j] = c[j] - u[j];
            out.add_term(eu, ev, val);
        });
    }
    return out;
}

GammaElement divided_power_of_vector(const FieldSpec& f, const std::vector<uint16_t>& v,
                                     uint64_t k) {
    unsigned d = unsigned(v.size());
    check_coords(d);
    GammaElement out(f, k, d);
    if (k == 0) return GammaElement::one(f, d);

    std::vector<unsigned> sup;
    for (unsigned j = 0; j < d; ++j)
        if (v[j] != 0) sup.push_back(j);
    if (sup.empty()) return out;  // zero vector, positive degree

    Exps e(d, 0);
    unsigned ns = unsigned(sup.size());
    // Ascending enumeration over the support keeps map inserts at the end.
    std::function<void(unsigned, uint64_t, uint16_t)> rec = [&](unsigned pos, uint64_t rem,
                                                                uint16_t coeff) {
        unsigned j = sup[pos];
        if (pos + 1 == ns) {
            e[j] = uint32_t(rem);
            out.terms_.emplace_hint(out.terms_.end(), e, f.mul(coeff, f.pow(v[j], rem)));
            e[j] = 0;
            return;
        }
        uint16_t pw = 1;
        for (uint64_t a = 0; a <= rem; ++a) {
            e[j] = uint32_t(a);
            rec(pos + 1, rem - a, f.mul(coeff, pw));
            pw = f.mul(pw, v[j]);
        }
        e[j] = 0;
    };
    rec(0, k, 1);
    return out;
}

TensorElement tensor_of(const GammaElement& x, const GammaElement& y) {
    if (!x.field().same(y.field()) || x.coords() != y.coords())
        throw std::invalid_argument("tensor_of: mismatched elements");
    TensorElement out(x.field(), int64_t(x.degree()), int64_t(y.degree()), x.coords());
    for (const auto& [ea, ca] : x.terms())
        for (const auto& [eb, cb] : y.terms()) out.add_term(ea, eb, x.field().mul(ca, cb));
    return out;
}

MatrixFq gamma_map(const MatrixFq& f, uint64_t n) {
    const FieldSpec& F = f.field();
    unsigned d = unsigned(f.cols()), dp = unsigned(f.rows());
    check_coords(d);
    check_coords(dp);
    auto src = GammaBasis::get(n, d);
    auto dst = GammaBasis::get(n, dp);
    MatrixFq out(F, size_t(dst->dim()), size_t(src->dim()));

    std::vector<std::vector<uint16_t>> fcol(d, std::vector<uint16_t>(dp));
    for (unsigned j = 0; j < d; ++j)
        for (unsigned i = 0; i < dp; ++i) fcol[j][i] = f(i, j);

    // dp_of_vector(f e_j, k) recurs across basis columns; cache per (j, k).
    std::vector<std::map<uint32_t, GammaElement>> cache(d);
    auto dp_cached = [&](unsigned j, uint32_t k) -> const GammaElement& {
        auto it = cache[j].find(k);
        if (it == cache[j].end())
            it = cache[j].emplace(k, divided_power_of_vector(F, fcol[j], k)).first;
        return it->second;
    };

    for (uint64_t col = 0; col < src->dim(); ++col) {
        const uint32_t* a = src->exps(col);
        GammaElement img = GammaElement::one(F, dp);
        for (unsigned j = 0; j < d && !img.is_zero(); ++j)
            if (a[j] != 0) img = product(img, dp_cached(j, a[j]));
        for (const auto& [e, v] : img.terms()) out(size_t(dst->rank_of(e)), size_t(col)) = v;
    }
    return out;
}

MatrixFq coproduct_matrix(const FieldSpec& f, unsigned d, uint64_t a, uint64_t b) {
    auto src = GammaBasis::get(a + b, d);
    auto b1 = GammaBasis::get(a, d);
    auto b2 = GammaBasis::get(b, d);
    MatrixFq out(f, size_t(b1->dim() * b2->dim()), size_t(src->dim()));
    std::vector<uint32_t> caps(d), v(d);
    for (uint64_t col = 0; col < src->dim(); ++col) {
        const uint32_t* c = src->exps(col);
        caps.assign(c, c + d);
        for_each_bounded(a, caps, [&](const uint32_t* u) {
            for (unsigned j = 0; j < d; ++j) v[j] = c[j] - u[j];
            out(size_t(b1->rank_of(u) * b2->dim() + b2->rank_of(v.data())), size_t(col)) = 1;
        });
    }
    return out;
}

MatrixFq product_matrix(const FieldSpec& f, unsigned d, uint64_t a, uint64_t b) {
    check_coords(d);
    auto b1 = GammaBasis::get(a, d);
    auto b2 = GammaBasis::get(b, d);
    auto dst = GammaBasis::get(a + b, d);
    MatrixFq out(f, size_t(dst->dim()), size_t(b1->dim() * b2->dim()));
    unsigned p = f.p();
    uint32_t sum[kMaxCoords];
    for (uint64_t ia = 0; ia < b1->dim(); ++ia) {
        const uint32_t* ea = b1->exps(ia);
        for (uint64_t ib = 0; ib < b2->dim(); ++ib) {
            const uint32_t* eb = b2->exps(ib);
            unsigned co = 1;
            for (unsigned j = 0; j < d; ++j) {
                co = (co * binom_sum_mod_p(ea[j], eb[j], p)) % p;
                if (co == 0) break;
                sum[j] = ea[j] + eb[j];
            }
            if (co == 0) continue;
            out(size_t(dst->rank_of(sum)), size_t(ia * b2->dim() + ib)) = f.from_int(co);
        }
    }
    return out;
}

namespace {
MatrixFq verschiebung_impl(const FieldSpec& f, uint64_t n, unsigned d, uint64_t step) {
    auto src = GammaBasis::get(n * step, d);
    auto dst = GammaBasis::get(n, d);
    MatrixFq out(f, size_t(dst->dim()), size_t(src->dim()));
    std::vector<uint32_t> e(d);
    for (uint64_t col = 0; col < src->dim(); ++col) {
        const uint32_t* c = src->exps(col);
        bool ok = true;
        for (unsigned j = 0; j < d; ++j) {
            if (c[j] % step != 0) {
                ok = false;
                break;
            }
            e[j] = uint32_t(c[j] / step);
        }
        if (ok) out(size_t(dst->rank_of(e.data())), size_t(col)) = 1;
    }
    return out;
}

MatrixFq halving_matrix(const FieldSpec& f, uint64_t n, unsigned d, uint64_t k) {
    // (1 (x) V) o Delta_{n-k, k} : Gamma^n -> Gamma^{n-k} (x) Gamma^1; the only
    // split surviving V is w = k e_j, so the matrix is a 0/1 incidence matrix.
    auto src = GammaBasis::get(n, d);
    uint64_t rows = 0;
    std::shared_ptr<const GammaBasis> dst;
    if (n >= k) {
        dst = GammaBasis::get(n - k, d);
        rows = dst->dim() * d;
    }
    MatrixFq out(f, size_t(rows), size_t(src->dim()));
    if (n < k) return out;
    std::vector<uint32_t> u(d);
    for (uint64_t col = 0; col < src->dim(); ++col) {
        const uint32_t* c = src->exps(col);
        for (unsigned j = 0; j < d; ++j) {
            if (c[j] < k) continue;
            std::copy(c, c + d, u.begin());
            u[j] -= uint32_t(k);
            out(size_t(dst->rank_of(u.data()) * d + j), size_t(col)) = 1;
        }
    }
    return out;
}

std::vector<GammaElement> kernel_elements(const FieldSpec& f, uint64_t n, unsigned d,
                                          const MatrixFq& m) {
    auto basis = GammaBasis::get(n, d);
    MatrixFq k = m.kernel_basis();
    std::vector<GammaElement> out;
    std::vector<uint16_t> col(k.rows());
    for (size_t j = 0; j < k.cols(); ++j) {
        for (size_t i = 0; i < k.rows(); ++i) col[i] = k(i, j);
        out.push_back(from_column(f, *basis, col));
    }
    return out;
}
}  // namespace

MatrixFq verschiebung_p(const FieldSpec& f, uint64_t n, unsigned d) {
    return verschiebung_impl(f, n, d, f.p());
}

MatrixFq verschiebung_q(const FieldSpec& f, uint64_t n, unsigned d) {
    return verschiebung_impl(f, n, d, f.q());
}

MatrixFq tilde_gamma_matrix(const FieldSpec& f, uint64_t n, unsigned d) {
    return halving_matrix(f, n, d, f.q());
}

MatrixFq bar_gamma_matrix(const FieldSpec& f, uint64_t n, unsigned d) {
    return halving_matrix(f, n, d, f.p());
}

std::vector<GammaElement> tilde_gamma_kernel(const FieldSpec& f, uint64_t n, unsigned d) {
    return kernel_elements(f, n, d, tilde_gamma_matrix(f, n, d));
}

std::vector<GammaElement> bar_gamma_kernel(const FieldSpec& f, uint64_t n, unsigned d) {
    return kernel_elements(f, n, d, bar_gamma_matrix(f, n, d));
}

uint64_t bounded_count(int64_t n, unsigned d, uint64_t bound) {
    if (n < 0) return 0;
    uint64_t nn = uint64_t(n);
    std::vector<uint64_t> cur(size_t(nn) + 1, 0);
    cur[0] = 1;
    for (unsigned j = 0; j < d; ++j) {
        std::vector<uint64_t> nxt(size_t(nn) + 1, 0);
        for (size_t s = 0; s <= size_t(nn); ++s) {
            if (cur[s] == 0) continue;
            uint64_t top = std::min<uint64_t>(bound, nn - s);
            for (uint64_t a = 0; a <= top; ++a) nxt[s + size_t(a)] += cur[s];
        }
        cur.swap(nxt);
    }
    return cur[size_t(nn)];
}

MatrixFq frobenius_entrywise(const MatrixFq& m, unsigned k) {
    MatrixFq out(m.field(), m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) out(i, j) = m.field().frobenius(m(i, j), k);
    return out;
}

}  // namespace gfl
