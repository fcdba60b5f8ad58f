#pragma once

// Stage orchestration shared by the command-line tool and the tests. Every
// stage writes its artifact into the output directory.

#include "nl2asp/asp.hpp"
#include "nl2asp/constraintgen.hpp"
#include "nl2asp/knowledge.hpp"
#include "nl2asp/penman.hpp"
#include "nl2asp/prompt.hpp"
#include "nl2asp/solver.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nl2asp::app {

class StageError : public std::runtime_error {
public:
    StageError(std::string stage, std::string const &message, std::string sentence = {});

    std::string const &stage() const noexcept { return stage_; }
    std::string const &sentence() const noexcept { return sentence_; }

private:
    std::string stage_;
    std::string sentence_;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SolverChoice { Internal, Clingo, Both };

struct RunConfig {
    std::optional<std::string> puzzle;
    std::optional<std::string> fixtures;
    bool record = false;
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4o";
    std::optional<std::string> amr_dir;
    // Command run once per sentence; `{sentence}` is replaced by the shell-quoted text.
    std::optional<std::string> amr_cmd;
    std::optional<std::string> clingo_path;
    std::string out_dir = "out";
    std::optional<std::string> reference;
    // Earlier stage artifacts that replace running those stages.
    std::optional<std::string> kb_file;
    std::optional<std::string> sentences_file;
    std::optional<std::string> program_file;
    SolverChoice solver = SolverChoice::Internal;
    unsigned workers = 1;
    // Skip the simplify prompt (facts and rules stages).
    bool stop_after_pairings = false;
};

namespace artifact {
inline constexpr char const *kb = "kb.txt";
inline constexpr char const *facts = "facts.lp";
inline constexpr char const *rules = "rules.lp";
inline constexpr char const *sentences = "sentences.txt";
inline constexpr char const *constraints = "constraints.lp";
inline constexpr char const *constraints_report = "constraints_report.txt";
inline constexpr char const *program = "program.lp";
inline constexpr char const *solution = "solution.txt";
} // namespace artifact

struct CompiledConstraints {
    std::vector<constraints::CompiledSentence> compiled;
    std::vector<asp::Statement> statements;
};

// Runs stages on demand and caches their results; each getter writes its artifact.
class Session {
public:
    explicit Session(RunConfig config);
    ~Session();

    knowledge::KnowledgeBase const &kb();
    std::vector<asp::Statement> const &facts();
    std::vector<asp::Statement> const &rules();
    std::vector<std::string> const &sentences();
    std::vector<amr::Graph> const &graphs();
    CompiledConstraints const &constraints();
    asp::Program const &program();
    solver::SolveReport const &solve();

    RunConfig const &config() const { return config_; }
    // Human-readable log of finished stages.
    std::vector<std::string> const &log() const { return log_; }

private:
    void write(char const *name, std::string const &text);
    prompt::PipelineResult const &pipeline();
    std::string description();

    RunConfig config_;
    std::unique_ptr<prompt::ChatClient> live_;
    std::unique_ptr<prompt::ChatClient> client_;
    std::optional<prompt::PipelineResult> pipeline_;
    std::optional<knowledge::KnowledgeBase> kb_;
    std::optional<std::vector<asp::Statement>> facts_;
    std::optional<std::vector<asp::Statement>> rules_;
    std::optional<std::vector<std::string>> sentences_;
    std::optional<std::vector<amr::Graph>> graphs_;
    std::optional<CompiledConstraints> constraints_;
    std::optional<asp::Program> program_;
    std::optional<solver::SolveReport> report_;
    std::vector<std::string> log_;
};

// PENMAN files from a directory in filename order, one or more graphs per file.
std::vector<amr::Graph> load_amr_dir(std::string const &dir);

// Pairs graphs with sentences by index; a graph whose `::snt` differs from its sentence is an error.
void check_alignment(std::vector<amr::Graph> const &graphs, std::vector<std::string> const &sentences);

std::string shell_quote(std::string const &text);

std::string format_statements(std::vector<asp::Statement> const &statements);

} // namespace nl2asp::app
