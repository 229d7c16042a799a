// gfl: materialize flag modules, divided-power functors, and the morphisms
// between them as matrices over GF(q), then report exact ranks.
//
// Exit codes: 0 all asserted properties held, 1 a falsification was found,
// 2 usage or configuration error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gfl/harness.hpp"

namespace {

using namespace gfl;

struct CommonOpts {
    std::string field = "2";
    unsigned dmax = 3;
    unsigned rmax = 3;
    unsigned smax = 4;
    uint64_t cap = 100000;
    uint64_t work_cap = 2000000000ULL;
    unsigned nmax = 0;
    unsigned threads = 0;
    std::string format = "json";
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_csv) {
    cmd->add_option("--field", o.field,
                    "GF(q) as \"q\" (shipped modulus) or \"p,m,c0,...,cm\"");
    cmd->add_option("--dmax", o.dmax, "largest ambient dimension d");
    cmd->add_option("--rmax", o.rmax, "largest flag length r");
    cmd->add_option("--smax", o.smax, "largest sequence entry");
    cmd->add_option("--cap", o.cap, "skip cells whose codomain basis exceeds this");
    cmd->add_option("--work-cap", o.work_cap, "skip cells whose elimination work exceeds this");
    cmd->add_option("--nmax", o.nmax, "degree bound for modes that take one");
    cmd->add_option("--threads", o.threads, "worker threads (default: GFL_THREADS or hardware)");
    std::vector<std::string> formats = {"json", "table"};
    if (with_csv) formats.insert(formats.begin() + 1, "csv");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember(formats));
    cmd->add_option("--out", o.out, "write the report here instead of stdout");
}

SweepConfig make_config(const CommonOpts& o) {
    SweepConfig cfg{parse_field_spec(o.field)};
    cfg.dmax = o.dmax;
    cfg.rmax = o.rmax;
    cfg.smax = o.smax;
    cfg.dim_cap = o.cap;
    cfg.work_cap = o.work_cap;
    cfg.nmax = o.nmax;
    cfg.threads = o.threads;
    return cfg;
}

void write_output(const CommonOpts& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + o.out);
    f << text;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

std::vector<uint32_t> parse_seq(const std::string& text) {
    std::string t;
    for (char c : text)
        if (c != '(' && c != ')' && c != ' ') t.push_back(c);
    std::vector<uint32_t> entries;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
            throw std::runtime_error("bad sequence \"" + text + "\", want digits and commas");
        entries.push_back(uint32_t(std::stoul(item)));
    }
    if (entries.empty()) throw std::runtime_error("empty sequence");
    return entries;
}

int cmd_verify_theorem(const CommonOpts& o) {
    SweepConfig cfg = make_config(o);
    auto cells = run_theorem_sweep(cfg);
    if (o.format == "json") {
        write_output(o, json_text(theorem_report_json(cfg, cells)));
    } else if (o.format == "csv") {
        write_output(o, criterion_csv(cells));
    } else {
        write_output(o, criterion_table(cells));
    }
    return sweep_has_falsification(cells) ? 1 : 0;
}

int cmd_lemmas(const CommonOpts& o) {
    SweepConfig cfg = make_config(o);
    auto items = run_lemma_battery(cfg);
    bool failed = false;
    for (const auto& it : items)
        if (!it.pass) failed = true;
    if (o.format == "json") {
        write_output(o, json_text(battery_report_json(cfg, items)));
    } else {
        std::string text;
        for (const auto& it : items) {
            text += it.pass ? "pass  " : "FAIL  ";
            text += it.name + ": " + it.detail + "\n";
        }
        write_output(o, text);
    }
    return failed ? 1 : 0;
}

int cmd_stabilize(const CommonOpts& o) {
    SweepConfig cfg = make_config(o);
    auto rep = run_stabilization(cfg);
    if (o.format == "json") {
        write_output(o, json_text(stabilization_report_json(cfg, rep)));
    } else {
        std::string text;
        for (const auto& c : rep.cells) {
            text += c.base.s.to_string() + " d=" + std::to_string(c.base.d) + " -> " +
                    c.shifted.s.to_string() + " [" + c.shifted.status + "]" +
                    (c.ok ? " ok" : " FALSIFIED") + "\n";
        }
        for (const auto& e : rep.eta) {
            text += "eta " + e.s.to_string() + " d=" + std::to_string(e.d) + " " +
                    (!e.computed ? "skipped" : e.commutes ? "commutes" : "FAILS") + "\n";
        }
        write_output(o, text);
    }
    return stabilization_has_falsification(rep) ? 1 : 0;
}

int cmd_tightness(const CommonOpts& o) {
    SweepConfig cfg = make_config(o);
    auto rep = run_tightness(cfg);
    if (o.format == "json") {
        write_output(o, json_text(tightness_report_json(cfg, rep)));
    } else {
        std::string text;
        for (const auto& c : rep.sharpness) {
            text += "n=" + std::to_string(c.n) + " d=" + std::to_string(c.d) + " rank " +
                    std::to_string(c.rank) + "/" + std::to_string(c.lines) +
                    (c.match ? " as predicted" : " MISMATCH") + "\n";
        }
        text += criterion_table(rep.tied_cells);
        write_output(o, text);
    }
    return tightness_has_falsification(rep) ? 1 : 0;
}

int cmd_ring_of_lines(const CommonOpts& o) {
    SweepConfig cfg = make_config(o);
    auto cells = run_ring_of_lines(cfg);
    if (o.format == "json") {
        write_output(o, json_text(ring_report_json(cfg, cells)));
    } else {
        std::string text = "   n   d        dim\n";
        char buf[64];
        for (const auto& c : cells) {
            if (c.computed)
                std::snprintf(buf, sizeof buf, "%4llu %3u %10llu\n",
                              (unsigned long long)c.n, c.d, (unsigned long long)c.dim);
            else
                std::snprintf(buf, sizeof buf, "%4llu %3u    skipped\n",
                              (unsigned long long)c.n, c.d);
            text += buf;
        }
        write_output(o, text);
    }
    return 0;
}

int cmd_phi(const CommonOpts& o, const std::string& seq_text, unsigned d, bool emit_matrix,
            const std::string& binary_path) {
    FieldSpec F = parse_field_spec(o.field);
    SeqS s(parse_seq(seq_text));
    MatrixFq phi = phi_seq(F, s, d);
    if (!binary_path.empty()) {
        if (F.q() != 2)
            throw std::runtime_error("--binary packs bit rows and needs GF(2)");
        PackedGf2Matrix packed = PackedGf2Matrix::from(phi);
        std::ofstream f(binary_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + binary_path);
        packed.write_binary(f);
    }
    json j;
    j["field"] = field_to_json(F);
    j["seq"] = seq_to_json(s);
    j["d"] = d;
    j["degree"] = s.degree(F);
    j["flag_dim"] = phi.cols();
    j["gamma_dim"] = phi.rows();
    size_t rank = phi.rank();
    j["rank"] = rank;
    j["injective"] = rank == phi.cols();
    if (emit_matrix) j["matrix"] = matrix_to_json(phi);
    write_output(o, json_text(j));
    return 0;
}

int cmd_flags(const CommonOpts& o, unsigned d, unsigned r, bool list) {
    FieldSpec F = parse_field_spec(o.field);
    auto flags = enumerate_flags(F, d, r);
    json j;
    j["field"] = field_to_json(F);
    j["d"] = d;
    j["r"] = r;
    j["count"] = flags.size();
    if (list) {
        json arr = json::array();
        for (const auto& fl : flags) arr.push_back(flag_to_json(fl));
        j["flags"] = std::move(arr);
    }
    write_output(o, json_text(j));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flag modules, divided powers, and rank certificates over GF(q)"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* vt = app.add_subcommand("verify-theorem",
                                  "sweep (d, s) cells and rank-check every morphism");
    add_common(vt, o, true);

    auto* lm = app.add_subcommand("lemmas", "run the structural identity battery");
    add_common(lm, o, false);

    auto* st = app.add_subcommand("stabilize",
                                  "re-check injective cells after shifting the sequence");
    add_common(st, o, false);

    auto* ti = app.add_subcommand("tightness",
                                  "sharpness of the line bound and tied-sequence data");
    add_common(ti, o, false);

    auto* ro = app.add_subcommand("ring-of-lines", "dimension table of the span of all images");
    add_common(ro, o, false);

    std::string seq_text = "1";
    unsigned phi_d = 2;
    bool emit_matrix = false;
    std::string binary_path;
    auto* ph = app.add_subcommand("phi", "materialize one morphism matrix");
    add_common(ph, o, false);
    ph->add_option("--seq", seq_text, "sequence, e.g. \"3,1\"")->required();
    ph->add_option("--d", phi_d, "ambient dimension")->required();
    ph->add_flag("--emit-matrix", emit_matrix, "include the full matrix in the report");
    ph->add_option("--binary", binary_path, "also write packed GF(2) bit rows here");

    unsigned flags_d = 2, flags_r = 1;
    bool flags_list = false;
    auto* fl = app.add_subcommand("flags", "enumerate canonical flags");
    add_common(fl, o, false);
    fl->add_option("--d", flags_d, "ambient dimension")->required();
    fl->add_option("--r", flags_r, "flag length")->required();
    fl->add_flag("--list", flags_list, "list every canonical form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (vt->parsed()) return cmd_verify_theorem(o);
        if (lm->parsed()) return cmd_lemmas(o);
        if (st->parsed()) return cmd_stabilize(o);
        if (ti->parsed()) return cmd_tightness(o);
        if (ro->parsed()) return cmd_ring_of_lines(o);
        if (ph->parsed()) return cmd_phi(o, seq_text, phi_d, emit_matrix, binary_path);
        if (fl->parsed()) return cmd_flags(o, flags_d, flags_r, flags_list);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
