#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dfadecomp/automata.hpp"

namespace dfadecomp {

enum class EncoderKind { three_dfa, apta_legacy };

const char* encoder_kind_name(EncoderKind kind);

/// Deterministic variable numbering for one encoding instance.
/// Blocks in order: x, then e (transition), then z (accepting), then the
/// per-rejecting-state selectors, then symmetry auxiliaries p, t, msym;
/// within each block indices run lexicographically with k outermost.
/// DFA state indices i, j are 1-based; acceptor states v and letters l are
/// 0-based; k is 0-based internally.
class VarMap {
public:
    VarMap() = default;
    VarMap(std::size_t acceptor_states, std::vector<State> rejecting_states,
           std::size_t num_letters, std::vector<std::uint32_t> allocation, bool symmetry);

    int x(std::size_t k, State v, std::uint32_t i) const;
    int e(std::size_t k, Symbol l, std::uint32_t i, std::uint32_t j) const;
    int z(std::size_t k, std::uint32_t i) const;
    /// Selector for "DFA k rejects the word of rejecting state with index
    /// `rej_index` in the rejecting-state list".
    int sel(std::size_t rej_index, std::size_t k) const;
    int p(std::size_t k, std::uint32_t j, std::uint32_t i) const;    // i < j
    int t(std::size_t k, std::uint32_t i, std::uint32_t j) const;    // i < j
    int msym(std::size_t k, Symbol l, std::uint32_t i, std::uint32_t j) const; // i < j

    int next_free() const { return next_free_; }
    int num_vars() const { return next_free_ - 1; }
    long long num_x_vars() const;

    std::size_t num_dfas() const { return allocation_.size(); }
    const std::vector<std::uint32_t>& allocation() const { return allocation_; }
    std::size_t acceptor_states() const { return acceptor_states_; }
    std::size_t num_letters() const { return num_letters_; }
    bool symmetry() const { return symmetry_; }
    const std::vector<State>& rejecting_states() const { return rejecting_states_; }

private:
    std::size_t acceptor_states_ = 0;
    std::vector<State> rejecting_states_;
    std::size_t num_letters_ = 0;
    std::vector<std::uint32_t> allocation_;
    bool symmetry_ = false;
    std::vector<int> x_base_, e_base_, z_base_, p_base_, t_base_, m_base_;
    int sel_base_ = 0;
    int next_free_ = 1;
};

using Clause = std::vector<int>;

/// CNF formula plus the var map and bookkeeping needed to decode models.
struct CnfInstance {
    int num_vars = 0;
    std::vector<Clause> clauses;
    VarMap vars;
    /// Ordered (group name, clause count); groups are emission-ordered.
    std::vector<std::pair<std::string, int>> group_counts;

    struct Meta {
        std::string encoder;              ///< empty for hand-built instances
        std::vector<std::uint32_t> allocation;
        std::size_t acceptor_states = 0;
        bool symmetry = false;
    } meta;

    int group_count(const std::string& name) const;
};

struct EncodingStats {
    int num_vars = 0;
    std::size_t num_clauses = 0;
    std::vector<std::pair<std::string, int>> groups;
};

EncodingStats encoding_stats(const CnfInstance& instance);

void validate_allocation(const std::vector<std::uint32_t>& allocation);

/// Groups D1 (per-letter determinism), D2 (completeness), R1 (accepting words
/// accepted by every DFA), R2 (each rejecting word rejected by a selected
/// DFA), T1 (initial state colored 1), T2 (every acceptor state colored),
/// T3 (transitions propagate colors), O1' (at-most-one color, skipping merged
/// states), SYM.
CnfInstance encode_3dfa(const ThreeDfa& acceptor, const std::vector<std::uint32_t>& allocation,
                        bool symmetry);

/// Prefix-tree encoding over the same variable families (the transition vars
/// double as the classic y's). Groups "1".."9" follow the traditional
/// constraint list; "T1" pins the root color, "SYM" as above.
CnfInstance encode_apta_legacy(const Apta& acceptor, const std::vector<std::uint32_t>& allocation,
                               bool symmetry);

/// Symmetry-breaking clauses for DFA k: states are forced into the order of a
/// depth-first exploration from state 1 that scans letters ascending.
/// per_constraint[c] counts the clauses of rule 10+c.
struct SymmetryClauses {
    std::vector<Clause> clauses;
    std::array<int, 6> per_constraint{};
};

SymmetryClauses encode_symmetry(const VarMap& vars, std::size_t k);

/// Reads one complete DFA per allocation entry out of a satisfying total
/// assignment (indexable by variable id, index 0 unused).
Decomposition decode(const CnfInstance& instance, const std::vector<bool>& assignment,
                     const Alphabet& alphabet);

} // namespace dfadecomp
