// nl2asp: logic puzzle text to ASP program to solution table.

#include "nl2asp/app.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

using namespace nl2asp;

namespace {

enum Exit { Ok = 0, Usage = 1, StageFailure = 2, Unsat = 3 };

void add_common(CLI::App &cmd, app::RunConfig &cfg, std::string &solver) {
    cmd.add_option("--puzzle", cfg.puzzle, "Puzzle description text file");
    cmd.add_option("--fixtures", cfg.fixtures, "LLM transcript (JSON lines) to replay, or to write with --record");
    cmd.add_flag("--record", cfg.record, "Call the live endpoint and append exchanges to --fixtures");
    cmd.add_option("--endpoint", cfg.endpoint, "Chat-completions URL")->capture_default_str();
    cmd.add_option("--model", cfg.model, "Model name")->capture_default_str();
    auto *dir = cmd.add_option("--amr-dir", cfg.amr_dir, "Directory of PENMAN files, one per sentence");
    auto *amr_cmd = cmd.add_option("--amr-cmd", cfg.amr_cmd, "AMR parser command; {sentence} is replaced");
    dir->excludes(amr_cmd);
    cmd.add_option("--clingo-path", cfg.clingo_path, "clingo executable (enables the cross-check)");
    cmd.add_option("--out", cfg.out_dir, "Output directory for stage artifacts")->capture_default_str();
    cmd.add_option("--reference", cfg.reference, "Reference category");
    cmd.add_option("--kb", cfg.kb_file, "Knowledge base file instead of the LLM stages");
    cmd.add_option("--sentences", cfg.sentences_file, "Simplified sentences file, one per line");
    cmd.add_option("--program", cfg.program_file, "Complete .lp program to solve");
    cmd.add_option("--solver", solver, "internal, clingo or both")
        ->check(CLI::IsMember({"internal", "clingo", "both"}));
    cmd.add_option("--workers", cfg.workers, "Parallel constraint compilation")->capture_default_str();
}

int print_solution(solver::SolveReport const &report) {
    std::cout << solver::format_report(report);
    return report.status == solver::Status::Unsat ? Unsat : Ok;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App cli{"Compile natural-language logic puzzles to ASP and solve them"};
    cli.require_subcommand(1);
    app::RunConfig cfg;
    std::string solver;

    std::map<std::string, std::function<int(app::Session &)>> actions{
        {"facts",
         [](app::Session &s) {
             std::cout << knowledge::format_kb(s.kb());
             s.facts();
             return Ok;
         }},
        {"rules",
         [](app::Session &s) {
             std::cout << app::format_statements(s.rules());
             return Ok;
         }},
        {"simplify",
         [](app::Session &s) {
             for (auto const &line : s.sentences()) {
                 std::cout << line << "\n";
             }
             return Ok;
         }},
        {"constraints",
         [](app::Session &s) {
             auto const &c = s.constraints();
             for (auto const &item : c.compiled) {
                 if (item.statement) {
                     std::cout << asp::to_string(*item.statement) << "\n";
                 } else {
                     std::cerr << "skipped: " << item.skipped << "\n";
                 }
             }
             return Ok;
         }},
        {"compile",
         [](app::Session &s) {
             std::cout << asp::emit_program(s.program());
             return Ok;
         }},
        {"solve", [](app::Session &s) { return print_solution(s.solve()); }},
        {"e2e",
         [](app::Session &s) {
             s.program();
             return print_solution(s.solve());
         }},
    };
    std::map<std::string, std::string> help{
        {"facts", "Run the fact and pairing prompts; write kb.txt and facts.lp"},
        {"rules", "Generate choice rules and the solution rule; write rules.lp"},
        {"simplify", "Run all prompts; write sentences.txt"},
        {"constraints", "Compile AMR graphs into constraints; write constraints.lp"},
        {"compile", "Assemble the complete program; write program.lp"},
        {"solve", "Solve a program and write solution.txt"},
        {"e2e", "Run every stage"},
    };
    for (auto const &[name, _] : actions) {
        add_common(*cli.add_subcommand(name, help.at(name)), cfg, solver);
    }

    try {
        cli.parse(argc, argv);
    } catch (CLI::ParseError const &e) {
        int code = cli.exit(e);
        return code == 0 ? Ok : Usage;
    }

    auto *sub = cli.get_subcommands().front();
    if (solver.empty()) {
        solver = cfg.clingo_path ? "both" : "internal";
    }
    cfg.solver = solver == "clingo" ? app::SolverChoice::Clingo
               : solver == "both"   ? app::SolverChoice::Both
                                    : app::SolverChoice::Internal;
    cfg.stop_after_pairings = sub->get_name() == "facts" || sub->get_name() == "rules";

    try {
        app::Session session(cfg);
        int code = actions.at(sub->get_name())(session);
        for (auto const &line : session.log()) {
            std::cerr << line << "\n";
        }
        return code;
    } catch (app::UsageError const &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return Usage;
    } catch (app::StageError const &e) {
        std::cerr << "error in stage " << e.what() << "\n";
        return StageFailure;
    } catch (std::exception const &e) {
        std::cerr << "error: " << e.what() << "\n";
        return StageFailure;
    }
}
