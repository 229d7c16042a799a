#pragma once
// Dense exact linear algebra over GF(q): rank, reduced echelon form, kernel
// bases, composition, Kronecker products. GF(2) additionally gets a 64-bit
// word-packed elimination path; both paths must agree and tests enforce it.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gfl/fields.hpp"

namespace gfl {

class MatrixFq {
public:
    MatrixFq(const FieldSpec& f, size_t rows, size_t cols);  // zero filled

    static MatrixFq identity(const FieldSpec& f, size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const FieldSpec& field() const { return *f_; }

    uint16_t operator()(size_t r, size_t c) const { return a_[r * cols_ + c]; }
    uint16_t& operator()(size_t r, size_t c) { return a_[r * cols_ + c]; }
    const std::vector<uint16_t>& data() const { return a_; }

    bool is_zero() const;
    MatrixFq transposed() const;
    MatrixFq select_columns(const std::vector<size_t>& idx) const;

    /// Rank by Gaussian elimination; routes GF(2) through the packed path.
    size_t rank() const;
    size_t rank_generic() const;
    size_t rank_packed() const;  // requires q == 2

    /// Deterministic reduced row echelon form (leftmost pivots, scan order).
    MatrixFq rref() const;

    /// Columns span the right kernel: A * K = 0, K has full column rank.
    MatrixFq kernel_basis() const;

    friend bool operator==(const MatrixFq& a, const MatrixFq& b);
    friend bool operator!=(const MatrixFq& a, const MatrixFq& b) { return !(a == b); }

private:
    const FieldSpec* f_;
    size_t rows_, cols_;
    std::vector<uint16_t> a_;
};

/// Matrix product a*b (composition of linear maps, a after b).
MatrixFq compose(const MatrixFq& a, const MatrixFq& b);

/// Kronecker product; row (i1, i2) of the result is i1 * b.rows() + i2 and
/// likewise for columns, so the first factor is the major index. Every
/// tensor-indexed basis in this library uses the same convention.
MatrixFq tensor(const MatrixFq& a, const MatrixFq& b);

/// Columns of a followed by columns of b.
MatrixFq hstack(const MatrixFq& a, const MatrixFq& b);

/// Exact rank with an abort threshold: vectors along the larger side are
/// inserted one by one, stopping early once the rank tops out at the smaller
/// dimension. Returns nullopt when vector_budget vectors were processed
/// without finishing (no partial answers).
std::optional<uint64_t> bounded_rank(const MatrixFq& m, uint64_t vector_budget);

/// Incremental column-space rank: feed vectors, pivots accumulate. Used to
/// rank joint spans without materializing one wide matrix.
class RankAccumulator {
public:
    RankAccumulator(const FieldSpec& f, size_t dim);

    /// Returns true when the vector enlarged the span.
    bool insert(std::vector<uint16_t> v);
    size_t rank() const { return pivots_.size(); }

private:
    const FieldSpec* f_;
    size_t dim_;
    std::vector<std::pair<size_t, std::vector<uint16_t>>> pivots_;  // (lead, row)
    std::vector<int64_t> lead_of_;                                  // column -> pivot idx
};

/// GF(2) matrix with 64 columns per word, row major.
struct PackedGf2Matrix {
    size_t rows = 0, cols = 0, words = 0;
    std::vector<uint64_t> bits;

    static PackedGf2Matrix from(const MatrixFq& m);  // requires q == 2
    bool get(size_t r, size_t c) const { return (bits[r * words + c / 64] >> (c % 64)) & 1u; }
    void set(size_t r, size_t c) { bits[r * words + c / 64] |= uint64_t(1) << (c % 64); }
    size_t rank() const;

    /// One lowercase hex string per row, little-endian bytes: byte k holds
    /// columns 8k..8k+7 with column 8k in the least significant bit.
    std::vector<std::string> hex_rows() const;
    void write_binary(std::ostream& os) const;  // rows of little-endian words
};

}  // namespace gfl
