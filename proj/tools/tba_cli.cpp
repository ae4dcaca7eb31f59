// ============================================================================
// tba_cli — model generation, Büchi emptiness checking, ω-iterability queries
// and benchmark reproduction for timed Büchi automata
// ============================================================================

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tba/generators.hpp"
#include "tba/model.hpp"
#include "tba/omega_iter.hpp"
#include "tba/parser.hpp"
#include "tba/product.hpp"
#include "tba/search.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

void print_aggregate(const std::vector<tba::BenchRow>& rows, const std::string& model, int n) {
    const tba::Aggregate d = tba::aggregate(rows, tba::SearchMode::Dfss);
    const tba::Aggregate i = tba::aggregate(rows, tba::SearchMode::Idfss);
    std::printf("%-14s |        DFSS visited        |       iDFSS visited        |     iterability checks\n",
                "");
    std::printf("%-14s | %8s %8s %8s | %8s %8s %8s | %8s %8s %8s\n", "model", "mean", "min", "max",
                "mean", "min", "max", "mean", "min", "max");
    std::printf("%-10s %-3d | %8.0f %8llu %8llu | %8.0f %8llu %8llu | %8.1f %8llu %8llu\n",
                model.c_str(), n, d.mean_visited,
                static_cast<unsigned long long>(d.min_visited),
                static_cast<unsigned long long>(d.max_visited), i.mean_visited,
                static_cast<unsigned long long>(i.min_visited),
                static_cast<unsigned long long>(i.max_visited), i.mean_checks,
                static_cast<unsigned long long>(i.min_checks),
                static_cast<unsigned long long>(i.max_checks));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"timed Büchi emptiness toolkit"};
    app.require_subcommand(1);

    // gen-model
    auto* gen = app.add_subcommand("gen-model", "generate a benchmark model file");
    std::string g_family, g_out;
    int g_n = 1, g_scale = 1;
    bool g_fixed = false, g_nonzeno = false;
    gen->add_option("--family", g_family, "csma | fischer | fddi | traingate")->required();
    gen->add_option("--n", g_n, "number of components")->required();
    gen->add_flag("--fixed", g_fixed, "csma: include the busy loop on RETRY");
    gen->add_flag("--nonzeno", g_nonzeno, "csma: enforce y >= 1 on transitions out of BUSY");
    gen->add_option("--scale", g_scale, "divide all model constants by this factor");
    gen->add_option("-o,--out", g_out, "output file")->required();

    // check
    auto* chk = app.add_subcommand("check", "Büchi emptiness of a model (times a property)");
    std::string c_file, c_property, c_builtin, c_mode = "dfss";
    std::uint64_t c_seed = 0;
    bool c_csv = false;
    int c_scale = 1, c_n = 0;
    chk->add_option("file", c_file, "model file")->required();
    chk->add_option("--property", c_property, "property automaton file");
    chk->add_option("--builtin", c_builtin, "builtin property family (csma, csma_defect, fischer, traingate, fddi)");
    chk->add_option("--mode", c_mode, "dfss | idfss");
    chk->add_option("--seed", c_seed, "exploration-order seed");
    chk->add_option("--scale", c_scale, "scale for builtin property constants");
    chk->add_option("--n", c_n, "N for builtin property constants (default: component count)");
    chk->add_flag("--csv", c_csv, "emit one CSV row instead of text");

    // iterability
    auto* iter = app.add_subcommand("iterability", "ω-iterability of a transition sequence");
    std::string i_file, i_path;
    iter->add_option("file", i_file, "model file with a single automaton")->required();
    iter->add_option("--path", i_path, "comma-separated 0-based transition indices")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "run both search modes over many seeds");
    std::string b_family, b_out;
    int b_n = 1, b_seeds = 20, b_scale = 1;
    unsigned b_threads = 0;
    bench->add_option("--family", b_family, "csma | fischer | fddi | traingate")->required();
    bench->add_option("--n", b_n, "number of components")->required();
    bench->add_option("--seeds", b_seeds, "number of seeds (0..K-1)");
    bench->add_option("--scale", b_scale, "divide all constants by this factor");
    bench->add_option("--threads", b_threads, "worker threads (0 = hardware)");
    bench->add_option("--out", b_out, "CSV output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            tba::Network net = tba::gen_model(g_family, g_n, g_fixed, g_nonzeno, g_scale);
            write_file(g_out, tba::print_model(net));
            return 0;
        }

        if (*chk) {
            tba::Network net = tba::parse_model(read_file(c_file));
            tba::TBA prop;
            if (!c_property.empty()) {
                tba::Network pn = tba::parse_model(read_file(c_property));
                if (pn.components.size() != 1)
                    throw std::runtime_error("property file must contain a single automaton");
                prop = pn.components[0];
            } else if (!c_builtin.empty()) {
                prop = tba::gen_property(c_builtin, c_n > 0 ? c_n : static_cast<int>(net.components.size()) - 1,
                                         c_scale);
            } else {
                prop = tba::trivial_property();
            }
            tba::TBA prod = tba::product(net, prop);

            tba::SearchConfig cfg;
            cfg.seed = c_seed;
            if (c_mode == "dfss") cfg.mode = tba::SearchMode::Dfss;
            else if (c_mode == "idfss") cfg.mode = tba::SearchMode::Idfss;
            else throw std::runtime_error("unknown mode '" + c_mode + "'");

            const tba::SearchStats st = tba::check(prod, cfg);
            if (c_csv) {
                std::cout << tba::csv_header()
                          << tba::csv_row({c_file, static_cast<int>(net.components.size()), cfg.mode,
                                           c_seed, st});
            } else {
                std::cout << tba::outcome_str(st.result) << "\n"
                          << "visited nodes:      " << st.visited << "\n"
                          << "subsumption skips:  " << st.subsumption_skips << "\n"
                          << "iterability checks: " << st.iterability_checks << "\n";
            }
            return st.result == tba::SearchOutcome::CycleFound ? 1 : 0;
        }

        if (*iter) {
            tba::Network net = tba::parse_model(read_file(i_file));
            if (net.components.size() != 1)
                throw std::runtime_error("iterability expects a single-automaton file");
            const tba::TBA& a = net.components[0];

            std::vector<tba::PathStep> steps;
            std::stringstream ss(i_path);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                const std::size_t idx = std::stoul(tok);
                if (idx >= a.transitions.size())
                    throw std::runtime_error("transition index " + tok + " out of range");
                steps.push_back(tba::path_step_of(a, a.transitions[idx]));
            }
            if (steps.empty()) throw std::runtime_error("empty --path");

            const int n = static_cast<int>(a.clocks.size());
            const tba::PreVerdict pre = tba::preprocess(steps, n);
            if (pre.kind == tba::PreKind::NotIterable) {
                std::cout << "NotIterable (" << tba::pre_reason_str(pre.reason) << ")\n";
                return 0;
            }
            std::cout << (pre.kind == tba::PreKind::Iterable
                              ? "preprocessing: iterable without forced elapse\n"
                              : "preprocessing: reduced to guards on reset clocks\n");
            const tba::IterResult res = tba::omega_iterable(steps, n);
            if (!res.iterable) {
                std::cout << "NotIterable (no stable composition)\n";
            } else {
                std::cout << "Iterable from: " << tba::to_string(res.witness, a.clocks) << "\n";
            }
            return 0;
        }

        if (*bench) {
            tba::Network net = tba::gen_model(b_family, b_n, /*fixed=*/true, /*nonzeno=*/true, b_scale);
            tba::TBA prop = tba::gen_property(b_family, b_n, b_scale);
            tba::TBA prod = tba::product(net, prop);
            std::vector<std::uint64_t> seeds;
            for (int s = 0; s < b_seeds; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
            const auto rows = tba::run_bench(prod, b_family, b_n, seeds, b_threads);
            std::string csv = tba::csv_header();
            for (const auto& r : rows) csv += tba::csv_row(r);
            if (!b_out.empty())
                write_file(b_out, csv);
            else
                std::cout << csv;
            print_aggregate(rows, b_family, b_n);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
