#pragma once
// Sweep orchestration: theorem verification over a (d, r, s) box, the lemma
// battery, stabilization and tightness reports, and the ring-of-lines table.
// Cells are independent; workers pick them round-robin and write into
// index-addressed slots, so reports are deterministic regardless of thread
// count (bounded by GFL_THREADS).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gfl/fields.hpp"
#include "gfl/morphisms.hpp"
#include "gfl/serialize.hpp"

namespace gfl {

struct SweepConfig {
    FieldSpec field;
    unsigned dmax = 3;
    unsigned rmax = 3;
    unsigned smax = 4;
    uint64_t dim_cap = 100000;           // codomain basis size guard
    uint64_t work_cap = 2000000000ULL;   // elimination work guard
    unsigned nmax = 0;                   // degree bound where a mode needs one
    unsigned threads = 0;                // 0: GFL_THREADS or hardware
};

unsigned effective_threads(const SweepConfig& cfg);

/// Round-robin parallel map: worker t handles indices t, t + T, ...
void parallel_for(size_t count, unsigned threads, const std::function<void(size_t)>& fn);

/// All strictly decreasing sequences with entries in [1, smax], length in
/// [1, rmax], ordered by (length, entries) ascending.
std::vector<SeqS> strict_sequences(unsigned smax, unsigned rmax);

/// Same but weakly decreasing and not strict (at least one tie).
std::vector<SeqS> tied_sequences(unsigned smax, unsigned rmax);

// --- theorem mode ---

std::vector<CriterionReport> run_theorem_sweep(const SweepConfig& cfg);

/// True when some computed cell satisfies the criterion yet fails injectivity.
bool sweep_has_falsification(const std::vector<CriterionReport>& cells);

json theorem_report_json(const SweepConfig& cfg, const std::vector<CriterionReport>& cells);

// --- lemma battery ---

struct LemmaResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<LemmaResult> run_lemma_battery(const SweepConfig& cfg);
json battery_report_json(const SweepConfig& cfg, const std::vector<LemmaResult>& items);

// --- stabilization ---

struct StabilizationCell {
    CriterionReport base;     // an injective cell of the theorem sweep
    CriterionReport shifted;  // the same cell with every entry bumped by one
    bool ok = false;          // shifted injective, or shifted skipped by a guard
};

struct EtaCell {
    SeqS s;
    unsigned d = 0;
    bool computed = false;  // false when a guard skipped it
    bool commutes = false;
};

struct StabilizationReport {
    std::vector<StabilizationCell> cells;
    std::vector<EtaCell> eta;
};

/// Shift check over every injective sweep cell plus the eta diagram on the
/// fixed small cells (2), (2,1) in dimensions 2 and 3.
StabilizationReport run_stabilization(const SweepConfig& cfg);
bool stabilization_has_falsification(const StabilizationReport& rep);
json stabilization_report_json(const SweepConfig& cfg, const StabilizationReport& rep);

// --- tightness ---

struct LineSharpnessCell {
    unsigned d = 0;
    uint64_t n = 0;
    uint64_t rank = 0;
    uint64_t lines = 0;
    bool injective = false;
    bool expected = false;  // n >= d, the q = 2 prediction
    bool match = false;
};

struct TightnessReport {
    std::vector<LineSharpnessCell> sharpness;  // only populated at q = 2
    std::vector<CriterionReport> tied_cells;   // weakly decreasing, not strict
};

/// q = 2: the per-line injectivity threshold n >= d is exact and is asserted.
/// All q: cells with tied sequences are recorded as observations only.
TightnessReport run_tightness(const SweepConfig& cfg);
bool tightness_has_falsification(const TightnessReport& rep);
json tightness_report_json(const SweepConfig& cfg, const TightnessReport& rep);

// --- ring of lines ---

struct RingOfLinesCell {
    uint64_t n = 0;
    unsigned d = 0;
    bool computed = false;
    uint64_t dim = 0;
};

std::vector<RingOfLinesCell> run_ring_of_lines(const SweepConfig& cfg);
json ring_report_json(const SweepConfig& cfg, const std::vector<RingOfLinesCell>& cells);

}  // namespace gfl
