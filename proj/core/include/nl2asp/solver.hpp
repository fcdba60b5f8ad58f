#pragma once

// Answer sets for generated programs: a backtracking solver for the bijection
// fragment and an adapter for an external clingo binary.

#include "nl2asp/asp.hpp"

#include <chrono>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nl2asp::solver {

class SolverError : public std::runtime_error {
public:
    enum class Kind { UnsupportedStatement, Timeout, BinaryNotFound, ClingoSyntaxError, ClingoFailure };

    SolverError(Kind kind, std::string const &message);

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

char const *to_string(SolverError::Kind kind);

using Row = std::vector<asp::Term>;

struct SolutionTable {
    // Category names in solution-tuple order, reference first.
    std::vector<std::string> columns;
    std::set<Row> rows;
    bool complete = false;

    friend bool operator==(SolutionTable const &, SolutionTable const &) = default;
};

enum class Status { Unique, Multiple, Unsat };

char const *to_string(Status status);

struct SolveStats {
    std::size_t models = 0;
    std::size_t nodes = 0;
    std::chrono::microseconds elapsed{0};
};

struct SolveReport {
    Status status = Status::Unsat;
    std::vector<SolutionTable> tables;
    SolveStats stats;
};

struct SolveOptions {
    std::chrono::milliseconds timeout{30000};
    // Stop after this many models; 0 enumerates all.
    std::size_t max_models = 0;
};

// The bijection structure recovered from a program.
struct ProgramShape {
    std::string reference;
    std::vector<asp::Term> reference_domain;
    struct Pairing {
        std::string predicate;
        std::string category;
        std::vector<asp::Term> domain;
    };
    std::vector<Pairing> pairings;
    std::string show_predicate;
    std::vector<std::string> columns;
};

// Throws UnsupportedStatement when the program falls outside the fragment.
ProgramShape program_shape(asp::Program const &program);

SolveReport solve_internal(asp::Program const &program, SolveOptions const &options = {});

struct ClingoOptions {
    std::string binary = "clingo";
    std::chrono::milliseconds timeout{60000};
};

SolveReport solve_clingo(asp::Program const &program, ClingoOptions const &options = {});
// Solves program text as-is; columns come from the program when it is in the fragment.
SolveReport solve_clingo_text(std::string const &text, ClingoOptions const &options = {});

bool clingo_available(std::string const &binary = "clingo");

struct Comparison {
    bool agree = true;
    // Rendered tables present in only one report.
    std::vector<std::string> only_a;
    std::vector<std::string> only_b;
    std::string diff() const;
};

// Order-insensitive comparison of model sets; columns are matched by name.
Comparison compare(SolveReport const &a, SolveReport const &b);

// Rows reordered into `columns`; throws std::invalid_argument on a column mismatch.
std::set<Row> reorder(SolutionTable const &table, std::vector<std::string> const &columns);

// Each column holds every entity of its category exactly once.
bool is_bijective(SolutionTable const &table, ProgramShape const &shape);

std::string format_table(SolutionTable const &table);
std::string format_report(SolveReport const &report);

} // namespace nl2asp::solver
