#include "gfl/morphisms.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace gfl {

namespace {

uint64_t pow_u64(uint64_t b, uint64_t e) {
    uint64_t r = 1;
    for (uint64_t i = 0; i < e; ++i) {
        if (b != 0 && r > UINT64_MAX / b) throw std::overflow_error("power overflow");
        r *= b;
    }
    return r;
}

uint64_t sat_mul(uint64_t a, uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
}

using DpCache = std::map<std::pair<std::vector<uint16_t>, uint64_t>, GammaElement>;

const GammaElement& dp_cached(const FieldSpec& f, DpCache& cache, const std::vector<uint16_t>& v,
                              uint64_t k) {
    auto key = std::make_pair(v, k);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(std::move(key), divided_power_of_vector(f, v, k)).first;
    return it->second;
}

/// prod_i v_i^([s_i]_q) for the canonical rows (v_i) of a flag.
GammaElement phi_column(const FieldSpec& f, const SeqS& s, const FlagCanonical& fl,
                        DpCache& cache) {
    unsigned d = fl.d;
    if (s.r() == 0) return GammaElement::one(f, d);
    GammaElement img = dp_cached(f, cache, fl.rows[0], bracket(s[0], f.q()));
    for (unsigned i = 1; i < s.r(); ++i)
        img = product(img, dp_cached(f, cache, fl.rows[i], bracket(s[i], f.q())));
    return img;
}

}  // namespace

// ---------------------------------------------------------------------------
// SeqS

SeqS::SeqS(std::vector<uint32_t> entries) : s_(std::move(entries)) {
    for (size_t i = 0; i < s_.size(); ++i) {
        if (s_[i] == 0) throw std::invalid_argument("SeqS: entries must be positive");
        if (i > 0 && s_[i] > s_[i - 1])
            throw std::invalid_argument("SeqS: entries must be weakly decreasing");
    }
}

bool SeqS::strict() const {
    for (size_t i = 1; i < s_.size(); ++i)
        if (s_[i] >= s_[i - 1]) return false;
    return true;
}

uint64_t SeqS::degree(const FieldSpec& f) const {
    return bracket_seq(s_, f.q());
}

SeqS SeqS::shifted() const {
    std::vector<uint32_t> t(s_);
    for (auto& x : t) ++x;
    return SeqS(std::move(t));
}

std::string SeqS::to_string() const {
    std::string out = "(";
    for (size_t i = 0; i < s_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s_[i]);
    }
    out += ")";
    return out;
}

// ---------------------------------------------------------------------------
// phi

MatrixFq phi_line(const FieldSpec& f, uint64_t n, unsigned d) {
    if (n % (f.q() - 1) != 0)
        throw std::invalid_argument("phi_line: degree must be divisible by q - 1");
    auto lines = enumerate_flags(f, d, 1);
    auto basis = GammaBasis::get(n, d);
    MatrixFq out(f, size_t(basis->dim()), lines.size());
    for (size_t c = 0; c < lines.size(); ++c) {
        GammaElement img = divided_power_of_vector(f, lines[c].rows[0], n);
        for (const auto& [e, v] : img.terms()) out(size_t(basis->rank_of(e)), c) = v;
    }
    return out;
}

MatrixFq phi_seq(const FieldSpec& f, const SeqS& s, unsigned d) {
    auto flags = enumerate_flags(f, d, s.r());
    auto basis = GammaBasis::get(s.degree(f), d);
    MatrixFq out(f, size_t(basis->dim()), flags.size());
    DpCache cache;
    for (size_t c = 0; c < flags.size(); ++c) {
        GammaElement img = phi_column(f, s, flags[c], cache);
        for (const auto& [e, v] : img.terms()) out(size_t(basis->rank_of(e)), c) = v;
    }
    return out;
}

MatrixFq phi_constant(const FieldSpec& f, unsigned r, uint32_t t, unsigned d) {
    return phi_seq(f, SeqS(std::vector<uint32_t>(r, t)), d);
}

// ---------------------------------------------------------------------------
// delta, psi

uint64_t delta_second_degree(const FieldSpec& f, const SeqS& s) {
    uint64_t t = 0;
    unsigned r = s.r();
    for (unsigned i = 0; i + 1 < r; ++i) t += bracket(s[i] - s[r - 1], f.q());
    return t;
}

TensorElement delta_apply(const FieldSpec& f, const SeqS& s, const GammaElement& x) {
    unsigned r = s.r();
    if (r == 0) throw std::invalid_argument("delta_apply: empty sequence");
    if (x.degree() != s.degree(f)) throw std::invalid_argument("delta_apply: wrong degree");
    unsigned d = x.coords();
    uint64_t bigq = pow_u64(f.q(), s[r - 1]);
    uint64_t adeg = uint64_t(r) * bracket(s[r - 1], f.q());
    uint64_t tdeg = delta_second_degree(f, s);
    TensorElement out(f, int64_t(adeg), int64_t(tdeg), d);
    std::vector<uint32_t> caps(d);
    Exps u(d), w(d);
    for (const auto& [c, val] : x.terms()) {
        for (unsigned j = 0; j < d; ++j) caps[j] = uint32_t(c[j] / bigq);
        for_each_bounded(tdeg, caps, [&](const uint32_t* t) {
            for (unsigned j = 0; j < d; ++j) {
                w[j] = t[j];
                u[j] = c[j] - uint32_t(bigq * t[j]);
            }
            out.add_term(u, w, val);
        });
    }
    return out;
}

MatrixFq delta_matrix(const FieldSpec& f, const SeqS& s, unsigned d) {
    unsigned r = s.r();
    if (r == 0) throw std::invalid_argument("delta_matrix: empty sequence");
    uint64_t adeg = uint64_t(r) * bracket(s[r - 1], f.q());
    uint64_t tdeg = delta_second_degree(f, s);
    auto src = GammaBasis::get(s.degree(f), d);
    auto b1 = GammaBasis::get(adeg, d);
    auto b2 = GammaBasis::get(tdeg, d);
    MatrixFq out(f, size_t(b1->dim() * b2->dim()), size_t(src->dim()));
    for (uint64_t col = 0; col < src->dim(); ++col) {
        GammaElement e = GammaElement::basis_element(f, src->exps_vec(col));
        TensorElement t = delta_apply(f, s, e);
        for (const auto& [key, v] : t.terms())
            out(size_t(b1->rank_of(key.first) * b2->dim() + b2->rank_of(key.second)),
                size_t(col)) = v;
    }
    return out;
}

MatrixFq psi_matrix(const FieldSpec& f, const SeqS& s, unsigned d) {
    unsigned r = s.r();
    if (r == 0) throw std::invalid_argument("psi_matrix: empty sequence");
    auto flags = enumerate_flags(f, d, r);
    uint64_t adeg = uint64_t(r) * bracket(s[r - 1], f.q());
    uint64_t tdeg = delta_second_degree(f, s);
    auto b1 = GammaBasis::get(adeg, d);
    auto b2 = GammaBasis::get(tdeg, d);
    MatrixFq out(f, size_t(b1->dim() * b2->dim()), flags.size());
    DpCache cache;
    for (size_t c = 0; c < flags.size(); ++c) {
        TensorElement t = delta_apply(f, s, phi_column(f, s, flags[c], cache));
        for (const auto& [key, v] : t.terms())
            out(size_t(b1->rank_of(key.first) * b2->dim() + b2->rank_of(key.second)), c) = v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// eta

TensorElement eta_apply(const FieldSpec& f, const SeqS& s, const GammaElement& x) {
    unsigned q = f.q(), r = s.r(), d = x.coords();
    uint64_t sdeg = s.degree(f);
    uint64_t vdeg = uint64_t(q - 1) * r;
    if (x.degree() != q * sdeg + vdeg) throw std::invalid_argument("eta_apply: wrong degree");
    TensorElement out(f, int64_t(sdeg), int64_t(vdeg), d);
    std::vector<uint32_t> caps(d);
    Exps u(d), v(d);
    for (const auto& [c, val] : x.terms()) {
        uint64_t basesum = 0;
        for (unsigned j = 0; j < d; ++j) {
            caps[j] = c[j] / q;
            basesum += c[j] % q;
        }
        if (basesum > vdeg || (vdeg - basesum) % q != 0) continue;
        for_each_bounded((vdeg - basesum) / q, caps, [&](const uint32_t* t) {
            for (unsigned j = 0; j < d; ++j) {
                v[j] = c[j] % q + q * t[j];
                u[j] = c[j] / q - t[j];
            }
            out.add_term(u, v, val);
        });
    }
    return out;
}

MatrixFq eta_matrix(const FieldSpec& f, const SeqS& s, unsigned d) {
    uint64_t sdeg = s.degree(f);
    uint64_t vdeg = uint64_t(f.q() - 1) * s.r();
    auto src = GammaBasis::get(s.shifted().degree(f), d);
    auto b1 = GammaBasis::get(sdeg, d);
    auto b2 = GammaBasis::get(vdeg, d);
    MatrixFq out(f, size_t(b1->dim() * b2->dim()), size_t(src->dim()));
    for (uint64_t col = 0; col < src->dim(); ++col) {
        GammaElement e = GammaElement::basis_element(f, src->exps_vec(col));
        TensorElement t = eta_apply(f, s, e);
        for (const auto& [key, v] : t.terms())
            out(size_t(b1->rank_of(key.first) * b2->dim() + b2->rank_of(key.second)),
                size_t(col)) = v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// diagram checks

bool key_step_identity_holds(const FieldSpec& f, const SeqS& s, unsigned d) {
    unsigned r = s.r();
    if (r < 2) throw std::invalid_argument("key_step: needs r >= 2");
    if (s[r - 2] <= s[r - 1])
        throw std::invalid_argument("key_step: needs s_{r-1} > s_r");
    std::vector<uint32_t> tail(r - 1);
    for (unsigned i = 0; i + 1 < r; ++i) tail[i] = s[i] - s[r - 1];
    SeqS sprime(std::move(tail));
    SeqS sconst(std::vector<uint32_t>(r, s[r - 1]));

    auto flags = enumerate_flags(f, d, r);
    DpCache cache;
    for (const auto& fl : flags) {
        TensorElement lhs = delta_apply(f, s, phi_column(f, s, fl, cache));
        TensorElement rhs = tensor_of(phi_column(f, sconst, fl, cache),
                                      phi_column(f, sprime, truncate(fl, r - 1), cache));
        if (lhs != rhs) return false;
    }
    return true;
}

bool eta_diagram_commutes(const FieldSpec& f, const SeqS& s, unsigned d) {
    unsigned r = s.r();
    SeqS splus = s.shifted();
    SeqS ones(std::vector<uint32_t>(r, 1));
    auto flags = enumerate_flags(f, d, r);
    DpCache cache;
    for (const auto& fl : flags) {
        TensorElement lhs = eta_apply(f, s, phi_column(f, splus, fl, cache));
        TensorElement rhs = tensor_of(phi_column(f, s, fl, cache), phi_column(f, ones, fl, cache));
        if (lhs != rhs) return false;
    }
    return true;
}

RestrictionRoutes restriction_routes(const FieldSpec& f, const FlagCanonical& base, uint32_t t) {
    unsigned d = base.d;
    unsigned r = base.length() + 1;
    if (r > d) throw std::invalid_argument("restriction_routes: flag already complete");

    // Direct route: columns of phi_constant(r, t) over the flags extending base.
    SeqS sconst(std::vector<uint32_t>(r, t));
    auto basis = GammaBasis::get(sconst.degree(f), d);
    RankAccumulator acc(f, size_t(basis->dim()));
    uint64_t extensions = 0, rank = 0;
    DpCache cache;
    for (const auto& fl : enumerate_flags(f, d, r)) {
        if (truncate(fl, r - 1) != base) continue;
        ++extensions;
        if (acc.insert(phi_column(f, sconst, fl, cache).to_column(*basis))) ++rank;
    }
    bool direct = rank == extensions;

    // Quotient route: the line map in degree [t]_q on F^d / <base>.
    unsigned dq = d - (r - 1);
    uint64_t qrank = phi_line(f, bracket(t, f.q()), dq).rank();
    bool quotient = qrank == flag_count(f, dq, 1);
    return {direct, quotient};
}

bool restriction_test(const FieldSpec& f, const FlagCanonical& base, uint32_t t) {
    RestrictionRoutes rr = restriction_routes(f, base, t);
    if (rr.direct != rr.quotient)
        throw std::logic_error("restriction_test: direct and quotient routes disagree");
    return rr.direct;
}

// ---------------------------------------------------------------------------
// dimensions

uint64_t qk_dim(const FieldSpec& f, unsigned k, unsigned d) {
    if (k == 0) throw std::invalid_argument("qk_dim: k must be positive");
    return phi_line(f, uint64_t(k) * (f.q() - 1), d).rank();
}

std::vector<SeqS> sequences_of_degree(const FieldSpec& f, uint64_t n, unsigned rmax) {
    std::vector<SeqS> out;
    std::vector<uint32_t> cur;
    uint64_t q = f.q();
    std::function<void(uint64_t, uint32_t)> rec = [&](uint64_t rem, uint32_t smax) {
        if (rem == 0) {
            out.push_back(SeqS(cur));
            return;
        }
        if (cur.size() == rmax) return;
        // largest admissible entry: q^s - 1 <= rem, s <= smax
        uint32_t top = 0;
        uint64_t pw = 1;
        while (top < smax && pw <= (rem + 1) / q) {
            pw *= q;
            ++top;
        }
        for (uint32_t s = top; s >= 1; --s) {
            cur.push_back(s);
            rec(rem - bracket(s, unsigned(q)), s);
            cur.pop_back();
        }
    };
    rec(n, UINT32_MAX);
    return out;
}

uint64_t ring_of_lines_dim(const FieldSpec& f, uint64_t n, unsigned d) {
    auto basis = GammaBasis::get(n, d);
    RankAccumulator acc(f, size_t(basis->dim()));
    uint64_t rank = 0;
    for (const auto& s : sequences_of_degree(f, n, d)) {
        if (s.r() == 0) continue;  // n = 0 yields the empty sequence
        DpCache cache;
        for (const auto& fl : enumerate_flags(f, d, s.r()))
            if (acc.insert(phi_column(f, s, fl, cache).to_column(*basis))) ++rank;
    }
    return rank;
}

// ---------------------------------------------------------------------------
// criterion

std::vector<StepCheck> criterion_steps(const FieldSpec& f, unsigned d, const SeqS& s) {
    std::vector<StepCheck> out;
    unsigned r = s.r();
    for (unsigned i = 1; i <= r; ++i) {
        uint64_t next = i < r ? s[i] : 0;
        uint64_t lhs = bracket(unsigned(s[i - 1] - next), f.q());
        int64_t rhs = int64_t(f.q() - 1) * (int64_t(d) - int64_t(i) + 1);
        out.push_back({i, lhs, rhs});
    }
    return out;
}

CriterionReport evaluate_cell(const FieldSpec& f, unsigned d, const SeqS& s, uint64_t dim_cap,
                              uint64_t work_cap) {
    CriterionReport rep;
    rep.q = f.q();
    rep.d = d;
    rep.s = s;
    rep.degree = s.degree(f);
    rep.steps = criterion_steps(f, d, s);
    rep.holds = true;
    for (const auto& st : rep.steps)
        if (st.rhs > 0 && st.lhs < uint64_t(st.rhs)) rep.holds = false;
    rep.flag_dim = flag_count(f, d, s.r());
    rep.gamma_dim = gamma_dim_saturating(int64_t(rep.degree), d);

    if (rep.flag_dim == 0) {  // zero domain: vacuously injective
        rep.status = "ok";
        rep.rank = 0;
        rep.injective = true;
        return rep;
    }
    if (rep.gamma_dim > dim_cap) {
        rep.status = "skipped-dim";
        return rep;
    }
    uint64_t small = std::min(rep.flag_dim, rep.gamma_dim);
    uint64_t large = std::max(rep.flag_dim, rep.gamma_dim);
    uint64_t work = sat_mul(sat_mul(small, small), large);
    if (f.q() == 2) work /= 64;
    if (work <= work_cap) {
        rep.status = "ok";
        rep.rank = phi_seq(f, s, d).rank();
        rep.injective = rep.rank == rep.flag_dim;
        return rep;
    }
    // Full elimination is over budget, but rank insertion stops as soon as
    // the smaller dimension is reached, so matrices of full rank can still
    // finish cheaply. Abort honestly when the budget runs out instead.
    uint64_t per_vector = sat_mul(small, small);
    uint64_t budget = per_vector ? work_cap / per_vector : 0;
    if (budget >= 2 * small) {
        if (auto r = bounded_rank(phi_seq(f, s, d), budget)) {
            rep.status = "ok";
            rep.rank = *r;
            rep.injective = rep.rank == rep.flag_dim;
            return rep;
        }
    }
    rep.status = "skipped-work";
    return rep;
}

}  // namespace gfl
