#pragma once
// JSON / CSV / table emitters. ordered_json keeps key insertion order, so a
// fixed construction order makes every report byte-deterministic.

#include <string>
#include <vector>

#include <json.hpp>

#include "gfl/fields.hpp"
#include "gfl/flags.hpp"
#include "gfl/gamma.hpp"
#include "gfl/linalg.hpp"
#include "gfl/morphisms.hpp"

namespace gfl {

using json = nlohmann::ordered_json;

/// {p, m, poly}
json field_to_json(const FieldSpec& f);

/// Field element as its coefficient array [c0, ..., c_{m-1}].
json element_coeffs(const FieldSpec& f, uint16_t v);

/// {degree, dim, terms: [{exps, coeff}]} with terms in key order.
json gamma_element_to_json(const GammaElement& x);

/// {field, rows, cols, entries} with entries as coefficient arrays; GF(2)
/// matrices additionally carry packed little-endian hex bit-rows.
json matrix_to_json(const MatrixFq& m, bool include_packed_hex = true);

/// {r, d, rows}; the zero-marker serializes as null.
json flag_to_json(const FlagCanonical& fl);
json flag_or_zero_to_json(const FlagOrZero& fl);

json seq_to_json(const SeqS& s);

/// {q, d, seq, degree, flag_dim, gamma_dim, rank, injective, criterion_holds,
///  status, per_step}; rank/injective are null for skipped cells and
/// gamma_dim is null when it does not fit in 64 bits.
json criterion_report_to_json(const CriterionReport& rep);

std::string criterion_csv_header();
std::string criterion_csv_row(const CriterionReport& rep);

/// Header plus one row per report, each line newline-terminated.
std::string criterion_csv(const std::vector<CriterionReport>& reps);

std::string criterion_table(const std::vector<CriterionReport>& reps);

}  // namespace gfl
