#include "gfl/linalg.hpp"

#include <bit>
#include <ostream>
#include <stdexcept>

namespace gfl {
namespace {

void require_same_field(const MatrixFq& a, const MatrixFq& b) {
    if (!a.field().same(b.field()))
        throw std::invalid_argument("matrices live over different field presentations");
}

}  // namespace

MatrixFq::MatrixFq(const FieldSpec& f, size_t rows, size_t cols)
    : f_(&f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

MatrixFq MatrixFq::identity(const FieldSpec& f, size_t n) {
    MatrixFq m(f, n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

bool MatrixFq::is_zero() const {
    for (uint16_t v : a_)
        if (v) return false;
    return true;
}

MatrixFq MatrixFq::transposed() const {
    MatrixFq t(*f_, cols_, rows_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

MatrixFq MatrixFq::select_columns(const std::vector<size_t>& idx) const {
    MatrixFq s(*f_, rows_, idx.size());
    for (size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] >= cols_) throw std::invalid_argument("column index out of range");
        for (size_t r = 0; r < rows_; ++r) s(r, j) = (*this)(r, idx[j]);
    }
    return s;
}

bool operator==(const MatrixFq& a, const MatrixFq& b) {
    return a.f_->same(*b.f_) && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

RankAccumulator::RankAccumulator(const FieldSpec& f, size_t dim)
    : f_(&f), dim_(dim), lead_of_(dim, -1) {}

bool RankAccumulator::insert(std::vector<uint16_t> v) {
    if (v.size() != dim_) throw std::invalid_argument("vector length mismatch");
    const FieldSpec& F = *f_;
    const bool fast = F.has_tables();
    const uint16_t* subt = fast ? F.sub_table() : nullptr;
    const unsigned q = F.q();
    size_t pos = 0;
    while (pos < dim_ && v[pos] == 0) ++pos;
    while (pos < dim_) {
        int64_t pi = lead_of_[pos];
        if (pi < 0) break;
        const std::vector<uint16_t>& prow = pivots_[pi].second;
        uint16_t fco = v[pos];
        if (fast) {
            const uint16_t* mrow = F.mul_row(fco);
            for (size_t j = pos; j < dim_; ++j)
                if (prow[j]) v[j] = subt[size_t(v[j]) * q + mrow[prow[j]]];
        } else {
            for (size_t j = pos; j < dim_; ++j)
                if (prow[j]) v[j] = F.sub(v[j], F.mul(fco, prow[j]));
        }
        while (pos < dim_ && v[pos] == 0) ++pos;
    }
    if (pos == dim_) return false;
    uint16_t piv = v[pos];
    if (piv != 1) {
        uint16_t ivrt = F.inv(piv);
        if (fast) {
            const uint16_t* mrow = F.mul_row(ivrt);
            for (size_t j = pos; j < dim_; ++j) v[j] = mrow[v[j]];
        } else {
            for (size_t j = pos; j < dim_; ++j) v[j] = F.mul(ivrt, v[j]);
        }
    }
    lead_of_[pos] = static_cast<int64_t>(pivots_.size());
    pivots_.emplace_back(pos, std::move(v));
    return true;
}

size_t MatrixFq::rank_generic() const {
    // insert the short vectors along the larger side: the rank tops out at
    // the smaller dimension and full-rank matrices finish early
    if (cols_ > rows_) return transposed().rank_generic();
    RankAccumulator acc(*f_, cols_);
    std::vector<uint16_t> row(cols_);
    for (size_t r = 0; r < rows_ && acc.rank() < cols_; ++r) {
        std::copy(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_, row.begin());
        acc.insert(row);
    }
    return acc.rank();
}

std::optional<uint64_t> bounded_rank(const MatrixFq& m, uint64_t vector_budget) {
    if (m.cols() > m.rows()) return bounded_rank(m.transposed(), vector_budget);
    RankAccumulator acc(m.field(), m.cols());
    std::vector<uint16_t> row(m.cols());
    for (size_t r = 0; r < m.rows(); ++r) {
        if (acc.rank() == m.cols()) return acc.rank();
        if (r >= vector_budget) return std::nullopt;
        for (size_t j = 0; j < m.cols(); ++j) row[j] = m(r, j);
        acc.insert(row);
    }
    return acc.rank();
}

size_t MatrixFq::rank_packed() const {
    if (f_->q() != 2) throw std::invalid_argument("packed elimination path requires GF(2)");
    if (rows_ > cols_) return transposed().rank_packed();
    return PackedGf2Matrix::from(*this).rank();
}

size_t MatrixFq::rank() const { return f_->q() == 2 ? rank_packed() : rank_generic(); }

MatrixFq MatrixFq::rref() const {
    MatrixFq m(*this);
    const FieldSpec& F = *f_;
    size_t lead = 0;
    for (size_t c = 0; c < cols_ && lead < rows_; ++c) {
        size_t piv = lead;
        while (piv < rows_ && m(piv, c) == 0) ++piv;
        if (piv == rows_) continue;
        for (size_t j = 0; j < cols_; ++j) std::swap(m(lead, j), m(piv, j));
        uint16_t ivrt = F.inv(m(lead, c));
        for (size_t j = c; j < cols_; ++j) m(lead, j) = F.mul(ivrt, m(lead, j));
        for (size_t r = 0; r < rows_; ++r) {
            if (r == lead) continue;
            uint16_t fco = m(r, c);
            if (!fco) continue;
            for (size_t j = c; j < cols_; ++j) m(r, j) = F.sub(m(r, j), F.mul(fco, m(lead, j)));
        }
        ++lead;
    }
    return m;
}

MatrixFq MatrixFq::kernel_basis() const {
    MatrixFq r = rref();
    std::vector<int64_t> pivot_in_col(cols_, -1);
    size_t npiv = 0;
    for (size_t row = 0; row < rows_; ++row) {
        size_t c = 0;
        while (c < cols_ && r(row, c) == 0) ++c;
        if (c == cols_) break;
        pivot_in_col[c] = static_cast<int64_t>(row);
        ++npiv;
    }
    MatrixFq k(*f_, cols_, cols_ - npiv);
    size_t out = 0;
    for (size_t free = 0; free < cols_; ++free) {
        if (pivot_in_col[free] >= 0) continue;
        k(free, out) = 1;
        for (size_t c = 0; c < cols_; ++c) {
            if (pivot_in_col[c] < 0) continue;
            k(c, out) = f_->neg(r(size_t(pivot_in_col[c]), free));
        }
        ++out;
    }
    return k;
}

MatrixFq compose(const MatrixFq& a, const MatrixFq& b) {
    require_same_field(a, b);
    if (a.cols() != b.rows()) throw std::invalid_argument("composition dimension mismatch");
    const FieldSpec& F = a.field();
    MatrixFq c(F, a.rows(), b.cols());
    const bool fast = F.has_tables();
    const uint16_t* addt = fast ? F.add_table() : nullptr;
    const unsigned q = F.q();
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t k = 0; k < a.cols(); ++k) {
            uint16_t av = a(i, k);
            if (!av) continue;
            if (fast) {
                const uint16_t* mrow = F.mul_row(av);
                for (size_t j = 0; j < b.cols(); ++j) {
                    uint16_t bv = b(k, j);
                    if (bv) c(i, j) = addt[size_t(c(i, j)) * q + mrow[bv]];
                }
            } else {
                for (size_t j = 0; j < b.cols(); ++j) {
                    uint16_t bv = b(k, j);
                    if (bv) c(i, j) = F.add(c(i, j), F.mul(av, bv));
                }
            }
        }
    }
    return c;
}

MatrixFq tensor(const MatrixFq& a, const MatrixFq& b) {
    require_same_field(a, b);
    const FieldSpec& F = a.field();
    MatrixFq t(F, a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i1 = 0; i1 < a.rows(); ++i1)
        for (size_t j1 = 0; j1 < a.cols(); ++j1) {
            uint16_t av = a(i1, j1);
            if (!av) continue;
            for (size_t i2 = 0; i2 < b.rows(); ++i2)
                for (size_t j2 = 0; j2 < b.cols(); ++j2) {
                    uint16_t bv = b(i2, j2);
                    if (bv) t(i1 * b.rows() + i2, j1 * b.cols() + j2) = F.mul(av, bv);
                }
        }
    return t;
}

MatrixFq hstack(const MatrixFq& a, const MatrixFq& b) {
    require_same_field(a, b);
    if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
    MatrixFq h(a.field(), a.rows(), a.cols() + b.cols());
    for (size_t r = 0; r < a.rows(); ++r) {
        for (size_t c = 0; c < a.cols(); ++c) h(r, c) = a(r, c);
        for (size_t c = 0; c < b.cols(); ++c) h(r, a.cols() + c) = b(r, c);
    }
    return h;
}

PackedGf2Matrix PackedGf2Matrix::from(const MatrixFq& m) {
    if (m.field().q() != 2) throw std::invalid_argument("packed representation requires GF(2)");
    PackedGf2Matrix p;
    p.rows = m.rows();
    p.cols = m.cols();
    p.words = (m.cols() + 63) / 64;
    p.bits.assign(p.rows * p.words, 0);
    for (size_t r = 0; r < p.rows; ++r)
        for (size_t c = 0; c < p.cols; ++c)
            if (m(r, c)) p.set(r, c);
    return p;
}

size_t PackedGf2Matrix::rank() const {
    // same incremental scheme as the generic path, on 64-column words
    std::vector<std::vector<uint64_t>> pivots;
    std::vector<int64_t> lead_of(cols, -1);
    std::vector<uint64_t> w(words);
    size_t rk = 0;
    for (size_t r = 0; r < rows; ++r) {
        std::copy(bits.begin() + r * words, bits.begin() + (r + 1) * words, w.begin());
        size_t pos = cols;
        for (size_t i = 0; i < words; ++i)
            if (w[i]) {
                pos = i * 64 + std::countr_zero(w[i]);
                break;
            }
        while (pos < cols) {
            int64_t pi = lead_of[pos];
            if (pi < 0) break;
            const std::vector<uint64_t>& prow = pivots[pi];
            size_t w0 = pos / 64;
            for (size_t i = w0; i < words; ++i) w[i] ^= prow[i];
            pos = cols;
            for (size_t i = w0; i < words; ++i)
                if (w[i]) {
                    pos = i * 64 + std::countr_zero(w[i]);
                    break;
                }
        }
        if (pos < cols) {
            lead_of[pos] = static_cast<int64_t>(pivots.size());
            pivots.push_back(w);
            ++rk;
        }
    }
    return rk;
}

std::vector<std::string> PackedGf2Matrix::hex_rows() const {
    static const char* digits = "0123456789abcdef";
    std::vector<std::string> out(rows);
    size_t nbytes = (cols + 7) / 8;
    for (size_t r = 0; r < rows; ++r) {
        std::string s;
        s.reserve(nbytes * 2);
        for (size_t b = 0; b < nbytes; ++b) {
            uint8_t byte = static_cast<uint8_t>(bits[r * words + b / 8] >> (8 * (b % 8)));
            s.push_back(digits[byte >> 4]);
            s.push_back(digits[byte & 0xf]);
        }
        out[r] = std::move(s);
    }
    return out;
}

void PackedGf2Matrix::write_binary(std::ostream& os) const {
    for (size_t i = 0; i < bits.size(); ++i) {
        uint64_t w = bits[i];
        char buf[8];
        for (int b = 0; b < 8; ++b) buf[b] = static_cast<char>((w >> (8 * b)) & 0xff);
        os.write(buf, 8);
    }
}

}  // namespace gfl
