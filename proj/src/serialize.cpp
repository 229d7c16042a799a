#include "gfl/serialize.hpp"

#include <sstream>

namespace gfl {

json field_to_json(const FieldSpec& f) {
    json j;
    j["p"] = f.p();
    j["m"] = f.m();
    j["poly"] = f.modulus();
    return j;
}

json element_coeffs(const FieldSpec& f, uint16_t v) {
    return json(f.coeffs_of(v));
}

json gamma_element_to_json(const GammaElement& x) {
    json j;
    j["degree"] = x.degree();
    j["dim"] = x.coords();
    json terms = json::array();
    for (const auto& [e, v] : x.terms()) {
        json t;
        t["exps"] = e;
        t["coeff"] = element_coeffs(x.field(), v);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

json matrix_to_json(const MatrixFq& m, bool include_packed_hex) {
    json j;
    j["field"] = field_to_json(m.field());
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json entries = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(element_coeffs(m.field(), m(i, c)));
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    if (include_packed_hex && m.field().q() == 2)
        j["packed_hex"] = PackedGf2Matrix::from(m).hex_rows();
    return j;
}

json flag_to_json(const FlagCanonical& fl) {
    json j;
    j["r"] = fl.length();
    j["d"] = fl.d;
    j["rows"] = fl.rows;
    return j;
}

json flag_or_zero_to_json(const FlagOrZero& fl) {
    if (!fl) return json(nullptr);
    return flag_to_json(*fl);
}

json seq_to_json(const SeqS& s) {
    return json(s.entries());
}

json criterion_report_to_json(const CriterionReport& rep) {
    json j;
    j["q"] = rep.q;
    j["d"] = rep.d;
    j["seq"] = seq_to_json(rep.s);
    j["degree"] = rep.degree;
    j["flag_dim"] = rep.flag_dim;
    if (rep.gamma_dim == UINT64_MAX)
        j["gamma_dim"] = nullptr;
    else
        j["gamma_dim"] = rep.gamma_dim;
    if (rep.status == "ok") {
        j["rank"] = rep.rank;
        j["injective"] = rep.injective;
    } else {
        j["rank"] = nullptr;
        j["injective"] = nullptr;
    }
    j["criterion_holds"] = rep.holds;
    j["status"] = rep.status;
    json steps = json::array();
    for (const auto& st : rep.steps) {
        json s;
        s["i"] = st.i;
        s["lhs"] = st.lhs;
        s["rhs"] = st.rhs;
        steps.push_back(std::move(s));
    }
    j["per_step"] = std::move(steps);
    return j;
}

std::string criterion_csv_header() {
    return "q,d,seq,degree,flag_dim,gamma_dim,rank,injective,criterion_holds,status";
}

std::string criterion_csv_row(const CriterionReport& rep) {
    std::ostringstream os;
    os << rep.q << ',' << rep.d << ",\"" << rep.s.to_string() << "\"," << rep.degree << ','
       << rep.flag_dim << ',';
    if (rep.gamma_dim == UINT64_MAX)
        os << "";
    else
        os << rep.gamma_dim;
    os << ',';
    if (rep.status == "ok")
        os << rep.rank << ',' << (rep.injective ? "true" : "false");
    else
        os << ",";
    os << ',' << (rep.holds ? "true" : "false") << ',' << rep.status;
    return os.str();
}

std::string criterion_csv(const std::vector<CriterionReport>& reps) {
    std::string text = criterion_csv_header() + "\n";
    for (const auto& r : reps) text += criterion_csv_row(r) + "\n";
    return text;
}

std::string criterion_table(const std::vector<CriterionReport>& reps) {
    std::ostringstream os;
    os << "  q  d  seq          degree  flag_dim  gamma_dim   rank     criterion  status\n";
    for (const auto& r : reps) {
        char buf[160];
        std::string rank = r.status == "ok" ? std::to_string(r.rank) : "-";
        std::string inj = r.status == "ok" ? (r.injective ? " inj" : " NOT") : "";
        std::string gd = r.gamma_dim == UINT64_MAX ? ">u64" : std::to_string(r.gamma_dim);
        snprintf(buf, sizeof(buf), "  %-2u %-2u %-12s %-7llu %-9llu %-11s %-8s %-9s %s%s\n", r.q,
                 r.d, r.s.to_string().c_str(), (unsigned long long)r.degree,
                 (unsigned long long)r.flag_dim, gd.c_str(), rank.c_str(),
                 r.holds ? "holds" : "fails", r.status.c_str(), inj.c_str());
        os << buf;
    }
    return os.str();
}

}  // namespace gfl
