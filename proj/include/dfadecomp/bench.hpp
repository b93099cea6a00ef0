#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dfadecomp/search.hpp"

namespace dfadecomp {

struct BenchmarkSpec {
    std::uint32_t alphabet_size = 2;
    std::uint32_t max_word_length = 4;
    std::uint32_t num_examples_per_label = 5;
    enum class Generator { partial_order_tasks, random_split } generator =
        Generator::partial_order_tasks;
    std::uint64_t seed = 0;
};

/// Strict partial order over letters; a word is admitted when no occurrence
/// of a greater letter precedes the first occurrence of a required smaller
/// one (a letter with an unseen prerequisite is a violation).
class TaskOrder {
public:
    explicit TaskOrder(std::size_t num_letters) : num_letters_(num_letters),
                                                  less_(num_letters * num_letters, false) {}

    void add_constraint(Symbol before, Symbol after); ///< before < after, closure applied by close()
    void close();                                     ///< transitive closure
    bool constrained(Symbol before, Symbol after) const;
    bool admits(const Word& word) const;

private:
    std::size_t num_letters_;
    std::vector<bool> less_;
};

/// Deterministic in the spec: equal specs yield byte-identical samples.
LabeledSamples generate(const BenchmarkSpec& spec);

/// Exhaustive search for an m-state complete DFA consistent with the samples;
/// accepting sets count upward in binary, transition tables vary fastest in
/// (state, letter) order. Guard: m^(m*|alphabet|) * 2^m <= 1e7.
std::optional<Dfa> oracle_exists_dfa(const LabeledSamples& samples, std::uint32_t num_states);

/// Exhaustive existence check for a decomposition with the given allocation.
/// Enumerates every transition table per part size with the accepting set
/// fixed to the positive end-states (larger accepting sets only accept more
/// negatives, so they never help), deduplicates the reachable
/// negative-acceptance behaviors, and combines them exhaustively.
/// Guard: m^(m*|alphabet|) <= 1e7 per part size and |negatives| <= 60.
bool oracle_exists_decomposition(const LabeledSamples& samples,
                                 const std::vector<std::uint32_t>& allocation);

struct MetricsRow {
    EncoderKind encoder = EncoderKind::three_dfa;
    StatesAllocation allocation;
    std::size_t acceptor_states = 0;
    int num_vars = 0;
    std::size_t num_clauses = 0;
    sat::Status status = sat::Status::Unknown;
    double solve_time_ms = 0.0;
};

struct RunMetrics {
    std::string benchmark_id;
    std::size_t acceptor_states_apta = 0;
    std::size_t acceptor_states_3dfa = 0;
    std::vector<MetricsRow> rows; ///< one per (encoder, solved allocation)
    std::vector<StatesAllocation> frontier_3dfa;
    std::vector<StatesAllocation> frontier_apta;
};

/// Runs solve_pareto under both encoders on the same samples and records
/// sizes, per-allocation encoding stats, statuses and timings. Timings from
/// different encoders are kept in separate rows, never combined.
RunMetrics compare_run(const LabeledSamples& samples, std::size_t num_dfas,
                       const SearchConfig& config, const std::string& benchmark_id = "bench");

/// CSV with a versioned schema comment; allocation cells are quoted.
void write_metrics_csv(std::ostream& out, const RunMetrics& metrics);

} // namespace dfadecomp
