#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfadecomp/encoding.hpp"

namespace dfadecomp::sat {

enum class Status { Sat, Unsat, Unknown };

const char* status_name(Status status);

struct SatResult {
    Status status = Status::Unknown;
    /// Total assignment, indexable by variable id (index 0 unused). Present
    /// iff status == Sat; every returned model satisfies every clause.
    std::vector<bool> assignment;
    double solve_time_ms = 0.0;
    std::string solver_name;
    std::string reason; ///< why the status is Unknown, empty otherwise
};

struct SolverConfig {
    enum class Mode { builtin, external };
    Mode mode = Mode::builtin;
    /// Shell command invoked as "<command> <cnf path>"; the solver must print
    /// "s SATISFIABLE"/"s UNSATISFIABLE" and "v" model lines, or use exit
    /// codes 10/20.
    std::string external_command;
    std::optional<int> timeout_ms;
};

SatResult solve(const CnfInstance& instance, const SolverConfig& config);

bool satisfies(const CnfInstance& instance, const std::vector<bool>& assignment);

/// DIMACS CNF: optional leading comment lines carrying the encoder meta, the
/// "p cnf <vars> <clauses>" header, then one 0-terminated clause per line.
std::string to_dimacs(const CnfInstance& instance);

/// Inverse of to_dimacs for plain files: comments ignored, meta not restored.
CnfInstance parse_dimacs(const std::string& text);

/// Parses SAT-competition style solver output. Exit codes 10/20 break ties
/// when no "s" line is present.
struct ParsedSolverOutput {
    Status status = Status::Unknown;
    std::vector<int> model_literals;
    std::string reason;
};

ParsedSolverOutput parse_solver_output(const std::string& output, int exit_code);

} // namespace dfadecomp::sat
