#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gfl/serialize.hpp"

#include <sstream>

using namespace gfl;

TEST_CASE("field and element encodings") {
    FieldSpec f4 = default_field_spec(4);
    json j = field_to_json(f4);
    CHECK(j["p"] == 2);
    CHECK(j["m"] == 2);
    CHECK(j["poly"].size() == 3);
    CHECK(element_coeffs(f4, 3) == json::array({1, 1}));
    FieldSpec f5 = default_field_spec(5);
    CHECK(element_coeffs(f5, 3) == json::array({3}));
}

TEST_CASE("gamma elements list terms in basis key order") {
    FieldSpec f = default_field_spec(3);
    GammaElement x(f, 3, 2);
    x.add_term({1, 2}, 2);
    x.add_term({3, 0}, 1);
    json j = gamma_element_to_json(x);
    CHECK(j["degree"] == 3);
    CHECK(j["dim"] == 2);
    REQUIRE(j["terms"].size() == 2);
    CHECK(j["terms"][0]["exps"] == json::array({1, 2}));
    CHECK(j["terms"][0]["coeff"] == json::array({2}));  // coefficient array
    CHECK(j["terms"][1]["exps"] == json::array({3, 0}));
}

TEST_CASE("matrices serialize entries and GF(2) packs bit rows") {
    FieldSpec f2 = default_field_spec(2);
    MatrixFq m(f2, 2, 3);
    m(0, 0) = m(0, 2) = m(1, 1) = 1;
    json j = matrix_to_json(m);
    CHECK(j["rows"] == 2);
    CHECK(j["cols"] == 3);
    // every entry is a coefficient array, even over the prime field
    CHECK(j["entries"][0] == json::parse("[[1],[0],[1]]"));
    REQUIRE(j.contains("packed_hex"));
    CHECK(j["packed_hex"][0] == "05");
    CHECK_FALSE(matrix_to_json(m, false).contains("packed_hex"));
    // non-binary fields never pack
    FieldSpec f9 = default_field_spec(9);
    MatrixFq n(f9, 1, 1);
    n(0, 0) = 5;
    json k = matrix_to_json(n);
    CHECK_FALSE(k.contains("packed_hex"));
    CHECK(k["entries"][0][0] == element_coeffs(f9, 5));
}

TEST_CASE("flags serialize rows; the zero marker becomes null") {
    FieldSpec f = default_field_spec(2);
    auto fl = canonicalize(f, {{1, 0, 1}, {0, 1, 0}});
    REQUIRE(fl);
    json j = flag_to_json(*fl);
    CHECK(j["r"] == 2);
    CHECK(j["d"] == 3);
    CHECK(j["rows"][0] == json::array({1, 0, 1}));
    CHECK(flag_or_zero_to_json(std::nullopt).is_null());
    CHECK(flag_or_zero_to_json(fl) == j);
}

TEST_CASE("criterion rows round through json, csv and table") {
    FieldSpec f = default_field_spec(2);
    CriterionReport rep = evaluate_cell(f, 3, SeqS({4, 2}), 100000, 2000000000ULL);
    json j = criterion_report_to_json(rep);
    CHECK(j["q"] == 2);
    CHECK(j["d"] == 3);
    CHECK(j["seq"] == json::array({4, 2}));
    CHECK(j["degree"] == 18);
    CHECK(j["flag_dim"] == 21);
    CHECK(j["gamma_dim"] == 190);
    CHECK(j["rank"] == 21);
    CHECK(j["injective"] == true);
    CHECK(j["criterion_holds"] == true);
    CHECK(j["status"] == "ok");
    CHECK(j["per_step"].size() == 2);

    CriterionReport skip = evaluate_cell(f, 3, SeqS({4, 2}), 10, 1);
    json js = criterion_report_to_json(skip);
    CHECK(js["rank"].is_null());
    CHECK(js["injective"].is_null());

    std::string header = criterion_csv_header();
    std::string row = criterion_csv_row(rep);
    CHECK(header.find("q,") == 0);
    // rectangular modulo the quoted sequence, whose own commas don't count
    auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    CHECK(commas(header) + 1 == commas(row));  // one comma inside "(4,2)"
    CHECK(row.find("\"(4,2)\"") != std::string::npos);
    std::string single = criterion_csv_row(evaluate_cell(f, 2, SeqS({2}), 100, 100000));
    CHECK(commas(header) == commas(single));

    std::string doc = criterion_csv({rep, skip});
    CHECK(std::count(doc.begin(), doc.end(), '\n') == 3);  // header + 2 rows
    CHECK(doc.find(header + "\n") == 0);
    CHECK(doc.back() == '\n');

    std::string table = criterion_table({rep, skip});
    CHECK(table.find("(4,2)") != std::string::npos);
    CHECK(table.find("skipped-dim") != std::string::npos);
}
