#pragma once
// Complete flags of length r in F^d. Each flag is stored as its unique
// canonical generator matrix, so flag equality is plain rowwise comparison
// and the flag set doubles as the basis of the flag module F[Flag_r].

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gfl/fields.hpp"
#include "gfl/linalg.hpp"

namespace gfl {

/// Canonical form: row i is reduced modulo rows 0..i-1 (zeros in their pivot
/// columns) and scaled so its leftmost nonzero entry is 1.
struct FlagCanonical {
    unsigned d = 0;
    std::vector<std::vector<uint16_t>> rows;

    unsigned length() const { return unsigned(rows.size()); }

    friend bool operator==(const FlagCanonical& a, const FlagCanonical& b) {
        return a.d == b.d && a.rows == b.rows;
    }
    friend bool operator!=(const FlagCanonical& a, const FlagCanonical& b) { return !(a == b); }
    friend bool operator<(const FlagCanonical& a, const FlagCanonical& b) {
        if (a.d != b.d) return a.d < b.d;
        return a.rows < b.rows;
    }
};

/// The zero-marker is the empty optional: linearly dependent generators and
/// collapsing images land there.
using FlagOrZero = std::optional<FlagCanonical>;

/// Canonical form of <v1> < <v1,v2> < ... ; nullopt when the vectors are
/// linearly dependent.
FlagOrZero canonicalize(const FieldSpec& f, const std::vector<std::vector<uint16_t>>& vs);

/// All complete flags of length r in F^d, ascending lexicographic order on
/// the canonical row matrices (entries compared by packed value, leftmost
/// column most significant). Empty when r > d.
std::vector<FlagCanonical> enumerate_flags(const FieldSpec& f, unsigned d, unsigned r);

/// prod_{i=0}^{r-1} (q^{d-i} - 1) / (q - 1); 0 when r > d.
uint64_t flag_count(const FieldSpec& f, unsigned d, unsigned r);

/// Image flag under a linear map m : F^d -> F^{d'} (m is d' x d); nullopt
/// when some step of the image chain collapses.
FlagOrZero flag_map(const MatrixFq& m, const FlagCanonical& fl);

/// Matrix of F[Flag_r](m) in the enumeration bases on both sides.
MatrixFq flag_module_matrix(const MatrixFq& m, unsigned r);

/// First s steps of the chain (0 < s <= length).
FlagCanonical truncate(const FlagCanonical& fl, unsigned s);

/// Matrix of the truncation pi_{r,s} : F[Flag_r] -> F[Flag_s] over F^d.
MatrixFq truncation_matrix(const FieldSpec& f, unsigned d, unsigned r, unsigned s);

/// Matrix of the diagonal [Phi] -> [Phi] (x) [Phi] on F[Flag_r] over F^d,
/// rows indexed first-factor-major like linalg's tensor.
MatrixFq flag_diag_matrix(const FieldSpec& f, unsigned d, unsigned r);

/// Index of each flag in its enumeration order, for column lookups.
std::map<FlagCanonical, uint64_t> flag_index(const std::vector<FlagCanonical>& flags);

}  // namespace gfl
