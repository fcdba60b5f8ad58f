#include "nl2asp/asp.hpp"
#include "nl2asp/constraintgen.hpp"
#include "nl2asp/knowledge.hpp"
#include "nl2asp/penman.hpp"
#include "nl2asp/solver.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nl2asp;
namespace fs = std::filesystem;

namespace {

std::string slurp(fs::path const &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path corpus(std::string const &rel) { return fs::path(NL2ASP_CORPUS_DIR) / rel; }

asp::Program program(std::string const &puzzle) {
    return asp::parse_program(slurp(corpus(puzzle + "/expected/program.lp")));
}

std::vector<amr::Graph> graphs(std::string const &puzzle) {
    std::vector<amr::Graph> out;
    for (auto const &e : fs::directory_iterator(corpus(puzzle + "/amr"))) {
        out.push_back(amr::parse_penman(slurp(e.path())));
    }
    return out;
}

void BM_SolveZoo(benchmark::State &state) {
    auto p = program("zoo");
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver::solve_internal(p));
    }
}
BENCHMARK(BM_SolveZoo)->Unit(benchmark::kMicrosecond);

void BM_SolveEinstein(benchmark::State &state) {
    auto p = program("einstein");
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver::solve_internal(p));
    }
}
BENCHMARK(BM_SolveEinstein)->Unit(benchmark::kMicrosecond);

// Einstein with its last clue dropped, so the search has to enumerate more.
void BM_SolveEinsteinRelaxed(benchmark::State &state) {
    auto p = program("einstein");
    auto last = std::find_if(p.statements.rbegin(), p.statements.rend(), [](auto const &s) {
        return std::holds_alternative<asp::IntegrityConstraint>(s);
    });
    p.statements.erase(std::next(last).base());
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver::solve_internal(p));
    }
}
BENCHMARK(BM_SolveEinsteinRelaxed)->Unit(benchmark::kMicrosecond);

void BM_ParsePenman(benchmark::State &state) {
    std::vector<std::string> texts;
    for (auto const &puzzle : {"zoo", "einstein"}) {
        for (auto const &e : fs::directory_iterator(corpus(std::string(puzzle) + "/amr"))) {
            texts.push_back(slurp(e.path()));
        }
    }
    for (auto _ : state) {
        for (auto const &t : texts) {
            benchmark::DoNotOptimize(amr::parse_penman(t));
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts.size()));
}
BENCHMARK(BM_ParsePenman);

void BM_CompileEinsteinConstraints(benchmark::State &state) {
    auto kb = knowledge::read_kb_file(corpus("einstein/kb.txt").string());
    auto gs = graphs("einstein");
    auto workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(constraints::compile_all(gs, kb, workers));
    }
}
BENCHMARK(BM_CompileEinsteinConstraints)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_ParseAndEmitProgram(benchmark::State &state) {
    auto text = slurp(corpus("einstein/expected/program.lp"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(asp::emit_program(asp::parse_program(text)));
    }
}
BENCHMARK(BM_ParseAndEmitProgram)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
