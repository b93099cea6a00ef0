#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

namespace dfadecomp::sat {

/// Conflict-driven clause learning solver: two-watched-literal propagation,
/// first-UIP learning, activity-guided decisions with phase saving, Luby
/// restarts. Deterministic for a given clause sequence.
class CdclSolver {
public:
    enum class Outcome { Sat, Unsat, Interrupted };

    explicit CdclSolver(int num_vars);

    /// DIMACS-style literals; duplicates collapse, tautologies are dropped.
    void add_clause(const std::vector<int>& literals);

    Outcome solve(std::optional<double> timeout_ms = std::nullopt);

    /// Model value of a variable after a Sat outcome.
    bool value(int var) const;

    std::uint64_t conflicts() const { return conflicts_; }
    std::uint64_t decisions() const { return decisions_; }

private:
    // literal encoding: var v (1-based) -> 2*(v-1) + (negated ? 1 : 0)
    static int lit_of(int dimacs_lit);
    static int neg(int lit) { return lit ^ 1; }
    static int var_of(int lit) { return lit >> 1; }

    enum : std::uint8_t { kTrue, kFalse, kUndef };
    std::uint8_t lit_value(int lit) const;

    void enqueue(int lit, int reason);
    int propagate(); ///< conflict clause index or -1
    void analyze(int conflict, std::vector<int>& learned, int& backjump_level);
    void backtrack(int level);
    void bump(int var);
    void decay();
    int pick_branch_var();
    static std::uint64_t luby(std::uint64_t i);

    int num_vars_;
    std::vector<std::vector<int>> clauses_;
    std::vector<std::vector<int>> watches_; ///< per literal: clause indices
    std::vector<std::uint8_t> assign_;      ///< per var: kTrue/kFalse/kUndef
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<double> activity_;
    double var_inc_ = 1.0;
    std::vector<std::uint8_t> phase_;
    std::priority_queue<std::pair<double, int>> order_; ///< lazy; stale entries skipped
    std::vector<std::uint8_t> seen_;
    bool contradiction_ = false;
    std::uint64_t conflicts_ = 0;
    std::uint64_t decisions_ = 0;
};

} // namespace dfadecomp::sat
