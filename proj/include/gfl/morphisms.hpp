#pragma once
// The morphisms between flag modules and divided powers: the line map, the
// flag map phi for a weakly decreasing sequence s, the contraction delta,
// psi = delta o phi, the stabilization map eta, and the derived dimension
// functions (q_k filtration, ring of lines). Everything is an explicit
// MatrixFq in the enumeration bases of flags.hpp and gamma.hpp.
//
// Degrees follow the bracket notation of fields.hpp: a sequence
// s = (s_1 >= ... >= s_r > 0) lands in Gamma^{[s]_q} with
// [s]_q = sum_i (q^{s_i} - 1).

#include <cstdint>
#include <string>
#include <vector>

#include "gfl/fields.hpp"
#include "gfl/flags.hpp"
#include "gfl/gamma.hpp"
#include "gfl/linalg.hpp"

namespace gfl {

/// Weakly decreasing sequence of positive integers.
class SeqS {
public:
    SeqS() = default;
    explicit SeqS(std::vector<uint32_t> entries);

    unsigned r() const { return unsigned(s_.size()); }
    uint32_t operator[](unsigned i) const { return s_[i]; }  // 0-based
    const std::vector<uint32_t>& entries() const { return s_; }
    bool strict() const;
    uint64_t degree(const FieldSpec& f) const;  // [s]_q
    SeqS shifted() const;                       // every entry + 1
    std::string to_string() const;              // "(6,3)"

    friend bool operator==(const SeqS& a, const SeqS& b) { return a.s_ == b.s_; }
    friend bool operator<(const SeqS& a, const SeqS& b) { return a.s_ < b.s_; }

private:
    std::vector<uint32_t> s_;
};

/// F[Flag_1](F^d) -> Gamma^n(F^d): line <v> goes to v^(n). Requires
/// (q - 1) | n so the column is generator independent.
MatrixFq phi_line(const FieldSpec& f, uint64_t n, unsigned d);

/// F[Flag_r](F^d) -> Gamma^{[s]_q}(F^d): flag with canonical rows (v_i) goes
/// to prod_i v_i^([s_i]_q). Zero-module domain when r > d.
MatrixFq phi_seq(const FieldSpec& f, const SeqS& s, unsigned d);

/// phi_seq for the constant sequence (t, ..., t) of length r.
MatrixFq phi_constant(const FieldSpec& f, unsigned r, uint32_t t, unsigned d);

/// Second tensor degree of delta's target: sum_i [s_i - s_r]_q.
uint64_t delta_second_degree(const FieldSpec& f, const SeqS& s);

/// delta: Gamma^{[s]_q} -> Gamma^{r[s_r]_q} (x) Gamma^{sum [s_i - s_r]_q},
/// the coproduct followed by the s_r-fold Verschiebung on the second factor.
/// For r = 1 this is the isomorphism onto Gamma^{[s_1]} (x) Gamma^0.
TensorElement delta_apply(const FieldSpec& f, const SeqS& s, const GammaElement& x);
MatrixFq delta_matrix(const FieldSpec& f, const SeqS& s, unsigned d);

/// psi = delta o phi, assembled column by column.
MatrixFq psi_matrix(const FieldSpec& f, const SeqS& s, unsigned d);

/// eta: Gamma^{[s+]_q} -> Gamma^{[s]_q} (x) Gamma^{(q-1)r}, the coproduct at
/// bidegree (q[s]_q, (q-1)r) followed by Verschiebung on the first factor.
TensorElement eta_apply(const FieldSpec& f, const SeqS& s, const GammaElement& x);
MatrixFq eta_matrix(const FieldSpec& f, const SeqS& s, unsigned d);

/// Exact matrix identity psi_s = (phi_(s_r..s_r) (x) phi_{s'}) o (1 (x) pi) o diag,
/// with s' = (s_i - s_r)_{i<r}, checked column by column; requires r >= 2 and
/// strictly decreasing s.
bool key_step_identity_holds(const FieldSpec& f, const SeqS& s, unsigned d);

/// Exact matrix identity eta o phi_{s+} = (phi_s (x) phi_(1..1)) o diag.
bool eta_diagram_commutes(const FieldSpec& f, const SeqS& s, unsigned d);

/// Injectivity of phi_constant(r, t) restricted to the flags extending a
/// fixed length r-1 flag, answered two ways that must agree.
struct RestrictionRoutes {
    bool direct;    // rank of the column block over extensions of the flag
    bool quotient;  // line map on the quotient space F^d / <flag>
};
RestrictionRoutes restriction_routes(const FieldSpec& f, const FlagCanonical& base, uint32_t t);

/// The agreed answer; throws std::logic_error if the two routes disagree.
bool restriction_test(const FieldSpec& f, const FlagCanonical& base, uint32_t t);

/// rank of phi_line(k(q-1)): the k-th filtration dimension.
uint64_t qk_dim(const FieldSpec& f, unsigned k, unsigned d);

/// All weakly decreasing positive sequences with [s]_q = n and length <= rmax.
std::vector<SeqS> sequences_of_degree(const FieldSpec& f, uint64_t n, unsigned rmax);

/// Dimension of the span of all phi_seq images inside Gamma^n(F^d).
uint64_t ring_of_lines_dim(const FieldSpec& f, uint64_t n, unsigned d);

/// Per-step inequality [s_i - s_{i+1}]_q >= (q-1)(d - i + 1), 1-based i,
/// with s_{r+1} = 0; rhs can be nonpositive for r near d.
struct StepCheck {
    unsigned i;
    uint64_t lhs;
    int64_t rhs;
};

struct CriterionReport {
    unsigned q = 0;
    unsigned d = 0;
    SeqS s;
    uint64_t degree = 0;     // [s]_q
    std::vector<StepCheck> steps;
    bool holds = false;      // all steps satisfied
    std::string status;      // "ok", "skipped-dim", "skipped-work"
    uint64_t flag_dim = 0;   // flag count = domain dimension
    uint64_t gamma_dim = 0;  // UINT64_MAX when it overflows
    uint64_t rank = 0;       // meaningful only when status == "ok"
    bool injective = false;  // rank == flag_dim, only when status == "ok"
};

std::vector<StepCheck> criterion_steps(const FieldSpec& f, unsigned d, const SeqS& s);

/// Full per-cell evaluation with resource guards: cells whose codomain basis
/// exceeds dim_cap are "skipped-dim"; cells whose estimated elimination work
/// min(flag_dim, gamma_dim)^2 * max(flag_dim, gamma_dim), scaled down 64x
/// when q = 2, exceeds work_cap get one budgeted early-stop rank attempt and
/// are "skipped-work" if that aborts. Zero-domain cells are always computed.
CriterionReport evaluate_cell(const FieldSpec& f, unsigned d, const SeqS& s, uint64_t dim_cap,
                              uint64_t work_cap);

}  // namespace gfl
