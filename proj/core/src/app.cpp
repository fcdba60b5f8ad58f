#include "nl2asp/app.hpp"

#include "nl2asp/process.hpp"
#include "nl2asp/rulegen.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nl2asp::app {

namespace fs = std::filesystem;

StageError::StageError(std::string stage, std::string const &message, std::string sentence)
    : std::runtime_error(stage + ": " + message + (sentence.empty() ? "" : " (sentence: \"" + sentence + "\")")),
      stage_(std::move(stage)), sentence_(std::move(sentence)) {}

namespace {

std::string read_file(std::string const &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

template <class F>
auto guard(char const *stage, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (StageError const &) {
        throw;
    } catch (UsageError const &) {
        throw;
    } catch (constraints::ConstraintError const &e) {
        throw StageError(stage, e.what(), e.sentence());
    } catch (std::exception const &e) {
        throw StageError(stage, e.what());
    }
}

std::string trim(std::string const &s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

} // namespace

std::string format_statements(std::vector<asp::Statement> const &statements) {
    std::string out;
    for (auto const &st : statements) {
        out += asp::to_string(st) + "\n";
    }
    return out;
}

std::string shell_quote(std::string const &text) {
    std::string out = "'";
    for (char c : text) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    return out + "'";
}

std::vector<amr::Graph> load_amr_dir(std::string const &dir) {
    if (!fs::is_directory(dir)) {
        throw UsageError("AMR directory '" + dir + "' does not exist");
    }
    std::vector<fs::path> files;
    for (auto const &e : fs::directory_iterator(dir)) {
        auto ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".amr" || ext == ".penman" || ext == ".txt")) {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<amr::Graph> out;
    for (auto const &f : files) {
        try {
            auto graphs = amr::parse_penman_documents(read_file(f.string()));
            out.insert(out.end(), graphs.begin(), graphs.end());
        } catch (amr::PenmanError const &e) {
            throw StageError("amr", f.filename().string() + ": " + e.what());
        }
    }
    return out;
}

void check_alignment(std::vector<amr::Graph> const &graphs, std::vector<std::string> const &sentences) {
    if (graphs.size() != sentences.size()) {
        throw StageError("amr", std::to_string(graphs.size()) + " graphs for " + std::to_string(sentences.size()) +
                                    " sentences");
    }
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        auto snt = graphs[i].sentence();
        if (!snt.empty() && prompt::normalize_prompt(snt) != prompt::normalize_prompt(sentences[i])) {
            throw StageError("amr", "graph " + std::to_string(i + 1) + " is for \"" + snt + "\"", sentences[i]);
        }
    }
}

// {{{1 session

Session::Session(RunConfig config) : config_(std::move(config)) {
    if (config_.amr_dir && config_.amr_cmd) {
        throw UsageError("--amr-dir and --amr-cmd are mutually exclusive");
    }
    if (config_.record && !config_.fixtures) {
        throw UsageError("--record needs --fixtures naming the transcript to write");
    }
    fs::create_directories(config_.out_dir);
}

Session::~Session() = default;

void Session::write(char const *name, std::string const &text) {
    auto path = fs::path(config_.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw StageError("output", "cannot write " + path.string());
    }
    out << text;
    log_.push_back("wrote " + path.string());
}

std::string Session::description() {
    if (!config_.puzzle) {
        throw UsageError("this stage needs a puzzle description (--puzzle)");
    }
    return trim(read_file(*config_.puzzle));
}

prompt::PipelineResult const &Session::pipeline() {
    if (pipeline_) {
        return *pipeline_;
    }
    auto text = description();
    if (!client_) {
        if (config_.fixtures && !config_.record) {
            client_ = std::make_unique<prompt::ReplayClient>(
                guard("fixtures", [&] { return prompt::Transcript::load(*config_.fixtures); }));
        } else {
            live_ = std::make_unique<prompt::HttpChatClient>(config_.endpoint, config_.model);
            if (config_.record) {
                client_ = std::make_unique<prompt::RecordingClient>(*live_, *config_.fixtures);
            }
        }
    }
    auto &client = client_ ? *client_ : *live_;
    pipeline_ = guard("llm", [&] {
        return prompt::run_pipeline(text, client, prompt::PipelineOptions{config_.reference, config_.stop_after_pairings});
    });
    log_.push_back("llm stages: " + std::to_string(pipeline_->stages.size()));
    return *pipeline_;
}

knowledge::KnowledgeBase const &Session::kb() {
    if (kb_) {
        return *kb_;
    }
    kb_ = guard("facts", [&] {
        if (!config_.kb_file) {
            return pipeline().kb;
        }
        auto kb = knowledge::read_kb_file(*config_.kb_file);
        if (config_.reference && *config_.reference != kb.reference()) {
            std::vector<std::string> names{kb.reference()};
            for (auto const &p : kb.pairings()) {
                names.push_back(p.category);
            }
            kb = knowledge::build_kb(kb.categories(), kb.relational(), names, config_.reference);
        }
        return kb;
    });
    write(artifact::kb, knowledge::format_kb(*kb_));
    return *kb_;
}

std::vector<asp::Statement> const &Session::facts() {
    if (!facts_) {
        auto const &base = kb();
        facts_.emplace();
        for (auto &f : rules::gen_facts(base)) {
            facts_->emplace_back(std::move(f));
        }
        write(artifact::facts, format_statements(*facts_));
    }
    return *facts_;
}

std::vector<asp::Statement> const &Session::rules() {
    if (!rules_) {
        auto const &base = kb();
        auto generated = guard("rules", [&] { return rules::generate_rules(base); });
        rules_.emplace();
        for (auto &c : generated.choice_rules) {
            rules_->emplace_back(std::move(c));
        }
        rules_->emplace_back(std::move(generated.solution_rule));
        rules_->emplace_back(std::move(generated.show));
        write(artifact::rules, format_statements(*rules_));
    }
    return *rules_;
}

std::vector<std::string> const &Session::sentences() {
    if (!sentences_) {
        if (config_.sentences_file) {
            sentences_.emplace();
            std::istringstream in(read_file(*config_.sentences_file));
            std::string line;
            while (std::getline(in, line)) {
                if (!trim(line).empty()) {
                    sentences_->push_back(trim(line));
                }
            }
        } else {
            if (config_.stop_after_pairings) {
                throw UsageError("sentences are not available when the pipeline stops after pairings");
            }
            sentences_ = pipeline().sentences;
        }
        std::string text;
        for (auto const &s : *sentences_) {
            text += s + "\n";
        }
        write(artifact::sentences, text);
    }
    return *sentences_;
}

std::vector<amr::Graph> const &Session::graphs() {
    if (graphs_) {
        return *graphs_;
    }
    if (config_.amr_dir) {
        graphs_ = load_amr_dir(*config_.amr_dir);
        if (config_.sentences_file || config_.puzzle) {
            check_alignment(*graphs_, sentences());
        }
    } else if (config_.amr_cmd) {
        auto const &snts = sentences();
        graphs_.emplace();
        for (auto const &s : snts) {
            auto cmd = *config_.amr_cmd;
            auto pos = cmd.find("{sentence}");
            if (pos == std::string::npos) {
                throw UsageError("--amr-cmd template lacks {sentence}");
            }
            cmd.replace(pos, 10, shell_quote(s));
            auto res = guard("amr", [&] { return run_process({"/bin/sh", "-c", cmd}); });
            if (res.exit_code != 0) {
                throw StageError("amr", "parser exited with " + std::to_string(res.exit_code) + ": " + res.err, s);
            }
            auto g = guard("amr", [&] { return amr::parse_penman(res.out); });
            if (g.sentence().empty()) {
                auto meta = g.metadata();
                meta.insert(meta.begin(), {"snt", s});
                g = amr::Graph(g.nodes(), meta);
            }
            graphs_->push_back(std::move(g));
        }
        check_alignment(*graphs_, snts);
    } else {
        throw UsageError("an AMR source is required (--amr-dir or --amr-cmd)");
    }
    log_.push_back("amr graphs: " + std::to_string(graphs_->size()));
    return *graphs_;
}

CompiledConstraints const &Session::constraints() {
    if (constraints_) {
        return *constraints_;
    }
    auto const &base = kb();
    auto const &gs = graphs();
    CompiledConstraints out;
    out.compiled = guard("constraints", [&] { return constraints::compile_all(gs, base, config_.workers); });
    std::string report;
    for (std::size_t i = 0; i < out.compiled.size(); ++i) {
        auto const &c = out.compiled[i];
        report += std::to_string(i + 1) + ". " + c.sentence + "\n";
        if (c.statement) {
            out.statements.push_back(*c.statement);
            report += "   " + asp::to_string(*c.statement) + "\n";
        } else {
            report += "   skipped: " + c.skipped + "\n";
        }
    }
    constraints_ = std::move(out);
    write(artifact::constraints, format_statements(constraints_->statements));
    write(artifact::constraints_report, report);
    return *constraints_;
}

asp::Program const &Session::program() {
    if (program_) {
        return *program_;
    }
    if (config_.program_file) {
        auto text = read_file(*config_.program_file);
        program_ = guard("compile", [&] { return asp::parse_program(text); });
    } else {
        asp::Program p;
        auto const &f = facts();
        auto const &r = rules();
        auto const &c = constraints();
        p.statements.insert(p.statements.end(), f.begin(), f.end());
        p.statements.insert(p.statements.end(), r.begin(), r.end());
        p.statements.insert(p.statements.end(), c.statements.begin(), c.statements.end());
        program_ = std::move(p);
    }
    auto text = guard("compile", [&] { return asp::emit_program(*program_); });
    write(artifact::program, text);
    return *program_;
}

solver::SolveReport const &Session::solve() {
    if (report_) {
        return *report_;
    }
    auto const &p = program();
    solver::ClingoOptions copts;
    if (config_.clingo_path) {
        copts.binary = *config_.clingo_path;
    }
    std::string text;
    if (config_.solver != SolverChoice::Clingo) {
        report_ = guard("solve", [&] { return solver::solve_internal(p); });
        log_.push_back("internal solver: " + std::to_string(report_->stats.nodes) + " nodes, " +
                       std::to_string(report_->stats.elapsed.count()) + " us");
    }
    if (config_.solver != SolverChoice::Internal) {
        auto clingo = guard("solve", [&] { return solver::solve_clingo(p, copts); });
        if (report_) {
            auto cmp = solver::compare(*report_, clingo);
            if (!cmp.agree) {
                throw StageError("solve", "internal solver and clingo disagree\n" + cmp.diff());
            }
            log_.push_back("clingo agrees with the internal solver");
        } else {
            report_ = std::move(clingo);
        }
    }
    write(artifact::solution, solver::format_report(*report_));
    return *report_;
}

} // namespace nl2asp::app
