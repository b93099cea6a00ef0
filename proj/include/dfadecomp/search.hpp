#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dfadecomp/automata.hpp"
#include "dfadecomp/sat.hpp"

namespace dfadecomp {

/// Ascending tuple of DFA state counts, each >= 2.
class StatesAllocation {
public:
    static StatesAllocation of(std::vector<std::uint32_t> parts);

    const std::vector<std::uint32_t>& parts() const { return parts_; }
    std::uint32_t total() const { return total_; }
    std::size_t size() const { return parts_.size(); }

    bool operator==(const StatesAllocation& other) const { return parts_ == other.parts_; }
    bool operator<(const StatesAllocation& other) const { return parts_ < other.parts_; }

    std::string to_string() const; ///< "(2,3)"

private:
    std::vector<std::uint32_t> parts_;
    std::uint32_t total_ = 0;
};

/// Shannon entropy of the state distribution, in bits.
double entropy(const StatesAllocation& allocation);

/// Strict Pareto dominance; both allocations must have the same arity.
bool pareto_dominates(const StatesAllocation& a, const StatesAllocation& b);

/// Preorder for the states-optimal objective: fewer total states first, equal
/// totals broken toward higher entropy. Entropy comparison is exact
/// (big-integer product rule), with lexicographic order breaking exact ties.
bool states_optimal_less(const StatesAllocation& a, const StatesAllocation& b);

/// -1, 0, +1 comparing entropy(a) with entropy(b) for equal totals, exactly.
int compare_entropy_same_total(const StatesAllocation& a, const StatesAllocation& b);

/// All ascending tuples with parts >= k summing to total_states, sorted by
/// descending entropy, exact ties broken lexicographically.
std::vector<StatesAllocation> compute_states_allocations(std::uint32_t total_states,
                                                         std::uint32_t min_part);

/// Samples with both acceptors built once; every search entry point reuses it.
struct IdentificationContext {
    LabeledSamples samples;
    Apta apta;
    ThreeDfa three_dfa;

    explicit IdentificationContext(LabeledSamples s);
};

struct AllocationReport {
    StatesAllocation allocation;
    EncoderKind encoder = EncoderKind::three_dfa;
    int num_vars = 0;
    std::size_t num_clauses = 0;
    sat::Status status = sat::Status::Unknown;
    double solve_time_ms = 0.0;
};

struct SearchConfig {
    sat::SolverConfig solver;
    EncoderKind encoder = EncoderKind::three_dfa;
    bool symmetry = true;
    unsigned jobs = 1;
    /// Observes every completed allocation solve (single-threaded callbacks).
    std::function<void(const AllocationReport&)> on_allocation;
};

struct AllocationOutcome {
    sat::Status status = sat::Status::Unknown;
    std::optional<Decomposition> decomposition; ///< present iff Sat, verified consistent
    double solve_time_ms = 0.0;
};

/// Encode, solve, decode, verify. A Sat outcome always carries a decomposition
/// that verify_consistency accepts; anything else is an internal error.
AllocationOutcome solve_allocation(const IdentificationContext& context,
                                   const StatesAllocation& allocation,
                                   const SearchConfig& config);

struct StatesOptimalResult {
    StatesAllocation allocation;
    Decomposition decomposition;
    double allocation_entropy = 0.0;

    std::uint32_t total_states() const { return allocation.total(); }
};

/// Upper bound on the total states the states-optimal search can need:
/// an all-accepting pair plus one rejector of size |u|+2 per negative word.
std::uint64_t states_total_bound(const LabeledSamples& samples);

/// The decomposition witnessing states_total_bound; always consistent.
Decomposition degenerate_witness(const LabeledSamples& samples);

/// Grows the total state count from 2 upward, trying each round's allocations
/// in entropy order (optionally capped at max_dfas parts) until one is
/// satisfiable. Throws Error(BoundExceeded) if the search passes
/// states_total_bound, and Error(SolverUnusable) on an Unknown solver result.
StatesOptimalResult solve_states_optimal(const IdentificationContext& context,
                                         const SearchConfig& config,
                                         std::optional<std::uint32_t> max_dfas = std::nullopt);

struct ParetoEntry {
    StatesAllocation allocation;
    Decomposition decomposition;
};

/// Breadth-first walk over n-part allocations from (2,...,2): satisfiable
/// allocations join the frontier, unsatisfiable ones enqueue their ascending
/// single-part increments, dominated ones are skipped; no allocation is
/// visited twice. Entries are mutually non-dominated, in discovery order.
std::vector<ParetoEntry> solve_pareto(const IdentificationContext& context, std::size_t num_dfas,
                                      const SearchConfig& config);

} // namespace dfadecomp
