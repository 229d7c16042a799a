#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gfl/harness.hpp"

#include <atomic>
#include <numeric>

using namespace gfl;

TEST_CASE("sequence box enumeration") {
    auto strict = strict_sequences(3, 3);
    std::vector<SeqS> want{SeqS({1}), SeqS({2}),    SeqS({3}),   SeqS({2, 1}),
                           SeqS({3, 1}), SeqS({3, 2}), SeqS({3, 2, 1})};
    REQUIRE(strict.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) CHECK(strict[i] == want[i]);
    CHECK(strict_sequences(6, 1).size() == 6);
    CHECK(strict_sequences(2, 5).size() == 3);  // (1),(2),(2,1)

    auto tied = tied_sequences(2, 3);
    // r = 1 can't tie; r=2: (1,1),(2,2); r=3: everything weakly decreasing
    // with a repeat: (1,1,1),(2,1,1),(2,2,1),(2,2,2)
    CHECK(tied.size() == 6);
    for (auto& s : tied) {
        CHECK_FALSE(s.strict());
        CHECK(s.r() >= 2);
    }
}

TEST_CASE("parallel_for covers every index once and propagates throws") {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), 4, [&](size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    parallel_for(0, 3, [&](size_t) { FAIL("no indices to visit"); });
    CHECK_THROWS_AS(parallel_for(10, 2,
                                 [](size_t i) {
                                     if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("thread selection") {
    SweepConfig cfg{default_field_spec(2)};
    cfg.threads = 5;
    CHECK(effective_threads(cfg) == 5);
    cfg.threads = 0;
    CHECK(effective_threads(cfg) >= 1);
    CHECK(effective_threads(cfg) <= 64);
}

TEST_CASE("theorem sweep on a small box is deterministic and honest") {
    SweepConfig cfg{default_field_spec(2)};
    cfg.dmax = 3;
    cfg.rmax = 2;
    cfg.smax = 4;
    auto cells = run_theorem_sweep(cfg);
    // one cell per (d, sequence) pair
    CHECK(cells.size() == 3 * strict_sequences(4, 2).size());
    CHECK_FALSE(sweep_has_falsification(cells));
    for (auto& c : cells) {
        CHECK(c.q == 2);
        if (c.status == "ok" && c.injective) CHECK(c.rank == c.flag_dim);
        if (c.flag_dim == 0) {
            CHECK(c.status == "ok");
            CHECK(c.injective);
        }
    }
    // spot values pinned from the library's own small-space examples
    auto find = [&](unsigned d, const SeqS& s) -> const CriterionReport& {
        for (auto& c : cells)
            if (c.d == d && c.s == s) return c;
        FAIL("cell not found");
        return cells[0];
    };
    CHECK(find(2, SeqS({2})).rank == 3);
    CHECK(find(2, SeqS({2})).injective);
    CHECK(find(2, SeqS({1})).rank == 2);
    CHECK_FALSE(find(2, SeqS({1})).injective);
    CHECK(find(3, SeqS({4, 2})).rank == 21);
    CHECK(find(3, SeqS({4, 2})).holds);

    // byte-identical reports across thread counts
    SweepConfig two = cfg;
    two.threads = 2;
    SweepConfig seven = cfg;
    seven.threads = 7;
    CHECK(theorem_report_json(two, run_theorem_sweep(two)).dump() ==
          theorem_report_json(seven, run_theorem_sweep(seven)).dump());
}

TEST_CASE("falsification detector trips only on computed holding cells") {
    CriterionReport fake;
    fake.holds = true;
    fake.status = "ok";
    fake.injective = false;
    CHECK(sweep_has_falsification({fake}));
    fake.status = "skipped-dim";
    CHECK_FALSE(sweep_has_falsification({fake}));
    fake.status = "ok";
    fake.holds = false;
    CHECK_FALSE(sweep_has_falsification({fake}));
    fake.holds = true;
    fake.injective = true;
    CHECK_FALSE(sweep_has_falsification({fake}));
}

TEST_CASE("report json carries config and summary") {
    SweepConfig cfg{default_field_spec(3)};
    cfg.dmax = 2;
    cfg.rmax = 2;
    cfg.smax = 2;
    auto cells = run_theorem_sweep(cfg);
    json rep = theorem_report_json(cfg, cells);
    CHECK(rep["mode"] == "verify-theorem");
    CHECK(rep["field"]["p"] == 3);
    CHECK(rep["config"]["dmax"] == 2);
    CHECK(rep["cells"].size() == cells.size());
    auto& sum = rep["summary"];
    CHECK(sum["total"] == cells.size());
    CHECK(sum["falsifications"] == 0);
    size_t computed = 0;
    for (auto& c : cells) computed += c.status == "ok";
    CHECK(sum["computed"] == computed);
}

TEST_CASE("lemma battery passes on a reduced box") {
    for (unsigned q : {2u, 3u}) {
        SweepConfig cfg{default_field_spec(q)};
        cfg.dmax = 2;
        cfg.smax = 2;
        auto items = run_lemma_battery(cfg);
        CHECK(items.size() >= 20);
        for (auto& it : items) {
            INFO(it.name, ": ", it.detail);
            CHECK(it.pass);
        }
        json rep = battery_report_json(cfg, items);
        CHECK(rep["summary"]["failed"] == 0);
    }
}

TEST_CASE("stabilization holds on the small box") {
    SweepConfig cfg{default_field_spec(2)};
    cfg.dmax = 2;
    cfg.rmax = 2;
    cfg.smax = 3;
    auto rep = run_stabilization(cfg);
    CHECK_FALSE(stabilization_has_falsification(rep));
    CHECK(rep.cells.size() > 0);
    for (auto& c : rep.cells) {
        CHECK(c.base.injective);
        CHECK(c.ok);
        // the shift bumps every entry, so degrees move q [s] + r (q-1)
        CHECK(c.shifted.s == c.base.s.shifted());
    }
    REQUIRE(rep.eta.size() == 4);
    for (auto& e : rep.eta)
        if (e.computed) CHECK(e.commutes);
    json j = stabilization_report_json(cfg, rep);
    CHECK(j["mode"] == "stabilize");
    CHECK(j["summary"]["falsifications"] == 0);
}

TEST_CASE("tightness records the q = 2 sharpness frontier") {
    SweepConfig cfg{default_field_spec(2)};
    cfg.dmax = 3;
    cfg.rmax = 2;
    cfg.smax = 3;
    cfg.nmax = 5;
    auto rep = run_tightness(cfg);
    CHECK_FALSE(tightness_has_falsification(rep));
    REQUIRE(rep.sharpness.size() == 3 * 5);
    for (auto& c : rep.sharpness) {
        CHECK(c.expected == (c.n >= c.d));
        CHECK(c.match);
        CHECK(c.lines == flag_count(cfg.field, c.d, 1));
    }
    CHECK(rep.tied_cells.size() > 0);
    json j = tightness_report_json(cfg, rep);
    CHECK(j["mode"] == "tightness");
}

TEST_CASE("ring of lines table matches direct evaluation") {
    SweepConfig cfg{default_field_spec(2)};
    cfg.dmax = 3;
    cfg.nmax = 8;
    auto cells = run_ring_of_lines(cfg);
    REQUIRE(cells.size() == 3 * 9);  // degrees 0 through nmax inclusive
    for (auto& c : cells) {
        if (!c.computed) continue;
        CHECK(c.dim == ring_of_lines_dim(cfg.field, c.n, c.d));
    }
    auto at = [&](uint64_t n, unsigned d) -> const RingOfLinesCell& {
        for (auto& c : cells)
            if (c.n == n && c.d == d) return c;
        FAIL("missing cell");
        return cells[0];
    };
    CHECK(at(3, 3).dim == 7);
    CHECK(at(7, 3).dim == 10);  // (3) alone spans 7; (2,2,1) adds three more
    CHECK(at(4, 2).dim == 2);   // only (2,1) reaches degree 4 in the plane
    json j = ring_report_json(cfg, cells);
    CHECK(j["mode"] == "ring-of-lines");
}
