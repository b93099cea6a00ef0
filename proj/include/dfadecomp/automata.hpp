#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfadecomp/samples.hpp"

namespace dfadecomp {

using State = std::uint32_t;

/// Three-valued word classification for partial acceptors.
enum class Verdict3 { Accept, Reject, DontCare };

const char* verdict3_name(Verdict3 v);

/// Prefix tree acceptor: one state per distinct sample prefix, tree-shaped
/// partial transitions, states labeled Accept/Reject by sample membership.
/// State ids follow first encounter while inserting positives then negatives.
struct Apta {
    Alphabet alphabet;
    State initial = 0;
    std::vector<std::int32_t> delta; ///< [state * |alphabet| + letter] -> state, -1 absent
    std::vector<Verdict3> kind;      ///< per state
    std::vector<Word> prefix_of;     ///< per state, the unique prefix reaching it
    std::vector<std::int32_t> parent;    ///< -1 for the root
    std::vector<std::int32_t> in_letter; ///< letter on the incoming edge, -1 for the root

    std::size_t num_states() const { return kind.size(); }
    std::size_t num_letters() const { return alphabet.size(); }
    std::optional<State> step(State state, Symbol letter) const;
    Verdict3 classify(const Word& word) const;
    std::vector<State> accepting_states() const;
    std::vector<State> rejecting_states() const;
    /// Letters with an outgoing transition from `state`, ascending.
    std::vector<Symbol> present_letters(State state) const;

    void validate() const; ///< throws Error(InvalidAutomaton) on broken invariants
};

Apta build_apta(const LabeledSamples& samples);

/// Deterministic partial acceptor with Accept/Reject/DontCare states obtained
/// by merging language-equivalent APTA states. Rejecting states are never
/// merged with anything; `merged` lists states standing for >= 2 prefixes.
struct ThreeDfa {
    Alphabet alphabet;
    State initial = 0;
    std::vector<std::int32_t> delta; ///< [state * |alphabet| + letter] -> state, -1 absent
    std::vector<Verdict3> kind;      ///< per state
    std::vector<std::vector<State>> provenance; ///< per state: sorted APTA preimages
    std::vector<State> merged;                  ///< sorted ids with >= 2 preimages

    std::size_t num_states() const { return kind.size(); }
    std::size_t num_letters() const { return alphabet.size(); }
    std::optional<State> step(State state, Symbol letter) const;
    Verdict3 classify(const Word& word) const;
    std::vector<State> accepting_states() const;
    std::vector<State> rejecting_states() const;
    std::vector<Symbol> present_letters(State state) const;

    /// Smallest APTA preimage per state; the names used in diagnostics.
    std::vector<State> provenance_labels() const;

    void validate() const; ///< throws Error(InvalidAutomaton) on broken invariants
};

/// Backward register construction: accepting leaves collapse into one
/// representative, every rejecting state stays its own representative, then
/// states whose successors are all registered join by (class flag, successor
/// representative per letter) register key. Ids follow first discovery.
ThreeDfa reduce_to_3dfa(const Apta& apta);

/// Complete DFA over states 1..m (m >= 2), initial state 1.
class Dfa {
public:
    Dfa(std::uint32_t num_states, std::uint32_t num_letters);

    std::uint32_t num_states() const { return m_; }
    std::uint32_t num_letters() const { return letters_; }
    State initial() const { return initial_; }
    void set_initial(State s);
    void set_transition(State from, Symbol letter, State to);
    State transition(State from, Symbol letter) const;
    void set_accepting(State s, bool accepting);
    bool is_accepting(State s) const;
    std::vector<State> accepting_states() const;
    bool is_complete() const;

    bool accepts(const Word& word) const;

    void validate() const; ///< throws unless complete with states in range

    bool operator==(const Dfa& other) const;

private:
    std::uint32_t m_ = 0;
    std::uint32_t letters_ = 0;
    State initial_ = 1;
    std::vector<State> delta_; ///< [(from-1) * letters + letter] -> to, 0 unset
    std::vector<bool> accepting_;
};

inline bool dfa_accepts(const Dfa& dfa, const Word& word) { return dfa.accepts(word); }

/// Tuple of complete DFAs with ascending state counts; accepts the
/// intersection of the member languages.
struct Decomposition {
    Alphabet alphabet;
    std::vector<Dfa> dfas;

    std::vector<std::uint32_t> allocation() const;
    bool accepts(const Word& word) const;
    void validate() const;
};

inline bool decomposition_accepts(const Decomposition& d, const Word& w) { return d.accepts(w); }

struct Violation {
    enum class Kind { positive_rejected, negative_accepted };
    Word word;
    Kind kind;
};

const char* violation_kind_name(Violation::Kind kind);

/// nullopt iff every positive is accepted by all DFAs and every negative is
/// rejected by at least one; otherwise the first violating word in sample
/// order (positives before negatives).
std::optional<Violation> verify_consistency(const Decomposition& decomposition,
                                            const LabeledSamples& samples);

} // namespace dfadecomp
