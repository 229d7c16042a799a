#include "gfl/flags.hpp"

#include <functional>
#include <stdexcept>

namespace gfl {

FlagOrZero canonicalize(const FieldSpec& f, const std::vector<std::vector<uint16_t>>& vs) {
    if (vs.empty()) return FlagCanonical{};
    unsigned d = unsigned(vs[0].size());
    FlagCanonical out;
    out.d = d;
    std::vector<unsigned> pivots;
    for (const auto& v : vs) {
        if (v.size() != d) throw std::invalid_argument("canonicalize: ragged input");
        std::vector<uint16_t> w = v;
        // One pass in insertion order suffices: row k is already zero in the
        // pivot columns of rows before it, so cleared columns stay cleared.
        for (size_t k = 0; k < pivots.size(); ++k) {
            uint16_t c = w[pivots[k]];
            if (c == 0) continue;
            const auto& row = out.rows[k];
            for (unsigned j = 0; j < d; ++j) w[j] = f.sub(w[j], f.mul(c, row[j]));
        }
        unsigned lead = d;
        for (unsigned j = 0; j < d; ++j)
            if (w[j] != 0) {
                lead = j;
                break;
            }
        if (lead == d) return std::nullopt;  // dependent
        uint16_t inv = f.inv(w[lead]);
        for (unsigned j = lead; j < d; ++j) w[j] = f.mul(w[j], inv);
        pivots.push_back(lead);
        out.rows.push_back(std::move(w));
    }
    return out;
}

std::vector<FlagCanonical> enumerate_flags(const FieldSpec& f, unsigned d, unsigned r) {
    std::vector<FlagCanonical> out;
    if (r > d) return out;
    if (r == 0) {
        out.push_back(FlagCanonical{d, {}});
        return out;
    }
    uint64_t total = flag_count(f, d, r);
    out.reserve(size_t(total));

    FlagCanonical cur;
    cur.d = d;
    std::vector<bool> pivot_col(d, false);
    unsigned q = f.q();

    // A canonical row has zeros at earlier pivot columns, 1 at its own lead,
    // and free values only right of the lead in non-pivot columns. Leads run
    // from the rightmost column down and free positions count up, so rows
    // (and therefore flags) come out in ascending lexicographic order.
    std::function<void()> next_row = [&]() {
        if (cur.rows.size() == r) {
            out.push_back(cur);
            return;
        }
        for (unsigned back = 0; back < d; ++back) {
            unsigned lead = d - 1 - back;
            if (pivot_col[lead]) continue;
            std::vector<unsigned> free_pos;
            for (unsigned j = lead + 1; j < d; ++j)
                if (!pivot_col[j]) free_pos.push_back(j);
            std::vector<uint16_t> row(d, 0);
            row[lead] = 1;
            std::function<void(size_t)> assign = [&](size_t k) {
                if (k == free_pos.size()) {
                    cur.rows.push_back(row);
                    pivot_col[lead] = true;
                    next_row();
                    pivot_col[lead] = false;
                    cur.rows.pop_back();
                    return;
                }
                for (unsigned v = 0; v < q; ++v) {
                    row[free_pos[k]] = uint16_t(v);
                    assign(k + 1);
                }
                row[free_pos[k]] = 0;
            };
            assign(0);
        }
    };
    next_row();
    return out;
}

uint64_t flag_count(const FieldSpec& f, unsigned d, unsigned r) {
    if (r > d) return 0;
    uint64_t q = f.q();
    uint64_t total = 1;
    for (unsigned i = 0; i < r; ++i) {
        uint64_t pw = 1;
        for (unsigned j = 0; j < d - i; ++j) {
            if (pw > UINT64_MAX / q) throw std::overflow_error("flag_count overflow");
            pw *= q;
        }
        uint64_t lines = (pw - 1) / (q - 1);
        if (lines != 0 && total > UINT64_MAX / lines)
            throw std::overflow_error("flag_count overflow");
        total *= lines;
    }
    return total;
}

FlagOrZero flag_map(const MatrixFq& m, const FlagCanonical& fl) {
    if (m.cols() != fl.d) throw std::invalid_argument("flag_map: dimension mismatch");
    const FieldSpec& f = m.field();
    std::vector<std::vector<uint16_t>> images;
    images.reserve(fl.rows.size());
    for (const auto& v : fl.rows) {
        std::vector<uint16_t> w(m.rows(), 0);
        for (size_t i = 0; i < m.rows(); ++i) {
            uint16_t s = 0;
            for (size_t j = 0; j < m.cols(); ++j) s = f.add(s, f.mul(m(i, j), v[j]));
            w[i] = s;
        }
        images.push_back(std::move(w));
    }
    if (images.empty()) return FlagCanonical{unsigned(m.rows()), {}};
    return canonicalize(f, images);
}

MatrixFq flag_module_matrix(const MatrixFq& m, unsigned r) {
    const FieldSpec& f = m.field();
    auto src = enumerate_flags(f, unsigned(m.cols()), r);
    auto dst = enumerate_flags(f, unsigned(m.rows()), r);
    auto idx = flag_index(dst);
    MatrixFq out(f, dst.size(), src.size());
    for (size_t c = 0; c < src.size(); ++c) {
        FlagOrZero img = flag_map(m, src[c]);
        if (img) out(size_t(idx.at(*img)), c) = 1;
    }
    return out;
}

FlagCanonical truncate(const FlagCanonical& fl, unsigned s) {
    if (s > fl.length()) throw std::invalid_argument("truncate: length out of range");
    FlagCanonical out;
    out.d = fl.d;
    out.rows.assign(fl.rows.begin(), fl.rows.begin() + s);
    return out;
}

MatrixFq truncation_matrix(const FieldSpec& f, unsigned d, unsigned r, unsigned s) {
    if (s > r) throw std::invalid_argument("truncation_matrix: s > r");
    auto src = enumerate_flags(f, d, r);
    auto dst = enumerate_flags(f, d, s);
    auto idx = flag_index(dst);
    MatrixFq out(f, dst.size(), src.size());
    for (size_t c = 0; c < src.size(); ++c) out(size_t(idx.at(truncate(src[c], s))), c) = 1;
    return out;
}

MatrixFq flag_diag_matrix(const FieldSpec& f, unsigned d, unsigned r) {
    uint64_t n = flag_count(f, d, r);
    MatrixFq out(f, size_t(n * n), size_t(n));
    for (uint64_t i = 0; i < n; ++i) out(size_t(i * n + i), size_t(i)) = 1;
    return out;
}

std::map<FlagCanonical, uint64_t> flag_index(const std::vector<FlagCanonical>& flags) {
    std::map<FlagCanonical, uint64_t> idx;
    for (size_t i = 0; i < flags.size(); ++i) idx.emplace(flags[i], uint64_t(i));
    return idx;
}

}  // namespace gfl
