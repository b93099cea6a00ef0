#include "dfadecomp/automata.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dfadecomp {

const char* verdict3_name(Verdict3 v) {
    switch (v) {
        case Verdict3::Accept: return "accept";
        case Verdict3::Reject: return "reject";
        case Verdict3::DontCare: return "dont_care";
    }
    return "?";
}

const char* violation_kind_name(Violation::Kind kind) {
    return kind == Violation::Kind::positive_rejected ? "positive_rejected"
                                                      : "negative_accepted";
}

namespace {

template <typename Acceptor>
std::optional<State> partial_step(const Acceptor& a, State state, Symbol letter) {
    std::int32_t next = a.delta[state * a.alphabet.size() + letter];
    if (next < 0) return std::nullopt;
    return static_cast<State>(next);
}

template <typename Acceptor>
Verdict3 partial_classify(const Acceptor& a, const Word& word) {
    State state = a.initial;
    for (Symbol letter : word) {
        auto next = partial_step(a, state, letter);
        if (!next) return Verdict3::DontCare;
        state = *next;
    }
    return a.kind[state];
}

template <typename Acceptor>
std::vector<State> states_of_kind(const Acceptor& a, Verdict3 kind) {
    std::vector<State> out;
    for (State v = 0; v < a.kind.size(); ++v) {
        if (a.kind[v] == kind) out.push_back(v);
    }
    return out;
}

template <typename Acceptor>
std::vector<Symbol> letters_present(const Acceptor& a, State state) {
    std::vector<Symbol> out;
    for (Symbol l = 0; l < a.alphabet.size(); ++l) {
        if (a.delta[state * a.alphabet.size() + l] >= 0) out.push_back(l);
    }
    return out;
}

} // namespace

std::optional<State> Apta::step(State state, Symbol letter) const {
    return partial_step(*this, state, letter);
}

Verdict3 Apta::classify(const Word& word) const { return partial_classify(*this, word); }

std::vector<State> Apta::accepting_states() const { return states_of_kind(*this, Verdict3::Accept); }

std::vector<State> Apta::rejecting_states() const { return states_of_kind(*this, Verdict3::Reject); }

std::vector<Symbol> Apta::present_letters(State state) const {
    return letters_present(*this, state);
}

void Apta::validate() const {
    const std::size_t n = num_states();
    const std::size_t letters = num_letters();
    if (kind.size() != n || prefix_of.size() != n || parent.size() != n ||
        in_letter.size() != n || delta.size() != n * letters || initial >= n) {
        throw Error(ErrorCode::InvalidAutomaton, "inconsistent state tables");
    }
    std::set<Word> seen;
    for (State v = 0; v < n; ++v) {
        if (!seen.insert(prefix_of[v]).second) {
            throw Error(ErrorCode::InvalidAutomaton, "duplicate prefix");
        }
        for (Symbol l = 0; l < letters; ++l) {
            std::int32_t to = delta[v * letters + l];
            if (to < 0) continue;
            auto u = static_cast<State>(to);
            if (u >= n || parent[u] != static_cast<std::int32_t>(v) ||
                in_letter[u] != static_cast<std::int32_t>(l)) {
                throw Error(ErrorCode::InvalidAutomaton, "transition breaks tree shape");
            }
        }
    }
    if (!prefix_of[initial].empty()) {
        throw Error(ErrorCode::InvalidAutomaton, "root prefix not empty");
    }
}

Apta build_apta(const LabeledSamples& samples) {
    Apta apta;
    apta.alphabet = samples.alphabet;
    const std::size_t letters = apta.alphabet.size();

    auto add_state = [&](const Word& prefix, std::int32_t from, std::int32_t letter) {
        apta.delta.insert(apta.delta.end(), letters, -1);
        apta.kind.push_back(Verdict3::DontCare);
        apta.prefix_of.push_back(prefix);
        apta.parent.push_back(from);
        apta.in_letter.push_back(letter);
        return static_cast<State>(apta.kind.size() - 1);
    };

    add_state(Word{}, -1, -1);
    apta.initial = 0;

    auto insert_word = [&](const Word& word, Verdict3 label) {
        State state = apta.initial;
        Word prefix;
        prefix.reserve(word.size());
        for (Symbol letter : word) {
            prefix.push_back(letter);
            // add_state grows delta, so index it fresh instead of via a reference
            const std::size_t slot = state * letters + letter;
            if (apta.delta[slot] < 0) {
                const State child = add_state(prefix, static_cast<std::int32_t>(state),
                                              static_cast<std::int32_t>(letter));
                apta.delta[slot] = static_cast<std::int32_t>(child);
            }
            state = static_cast<State>(apta.delta[slot]);
        }
        apta.kind[state] = label;
    };

    for (const auto& word : samples.positives) insert_word(word, Verdict3::Accept);
    for (const auto& word : samples.negatives) insert_word(word, Verdict3::Reject);
    return apta;
}

std::optional<State> ThreeDfa::step(State state, Symbol letter) const {
    return partial_step(*this, state, letter);
}

Verdict3 ThreeDfa::classify(const Word& word) const { return partial_classify(*this, word); }

std::vector<State> ThreeDfa::accepting_states() const {
    return states_of_kind(*this, Verdict3::Accept);
}

std::vector<State> ThreeDfa::rejecting_states() const {
    return states_of_kind(*this, Verdict3::Reject);
}

std::vector<Symbol> ThreeDfa::present_letters(State state) const {
    return letters_present(*this, state);
}

std::vector<State> ThreeDfa::provenance_labels() const {
    std::vector<State> labels;
    labels.reserve(provenance.size());
    for (const auto& preimages : provenance) {
        labels.push_back(preimages.empty() ? 0 : preimages.front());
    }
    return labels;
}

void ThreeDfa::validate() const {
    const std::size_t n = num_states();
    const std::size_t letters = num_letters();
    if (kind.size() != n || provenance.size() != n || delta.size() != n * letters ||
        initial >= n) {
        throw Error(ErrorCode::InvalidAutomaton, "inconsistent state tables");
    }
    std::set<State> preimages;
    for (State v = 0; v < n; ++v) {
        if (provenance[v].empty()) {
            throw Error(ErrorCode::InvalidAutomaton, "state without preimage");
        }
        if (!std::is_sorted(provenance[v].begin(), provenance[v].end())) {
            throw Error(ErrorCode::InvalidAutomaton, "unsorted preimage list");
        }
        for (State p : provenance[v]) {
            if (!preimages.insert(p).second) {
                throw Error(ErrorCode::InvalidAutomaton, "preimage shared between states");
            }
        }
        // A rejecting state stands for exactly one prefix; merging rejecting
        // prefixes can lose required rejections of the conjunction language.
        if (kind[v] == Verdict3::Reject && provenance[v].size() != 1) {
            throw Error(ErrorCode::InvalidAutomaton, "merged rejecting state");
        }
        for (Symbol l = 0; l < letters; ++l) {
            std::int32_t to = delta[v * letters + l];
            if (to >= 0 && static_cast<std::size_t>(to) >= n) {
                throw Error(ErrorCode::InvalidAutomaton, "transition target out of range");
            }
        }
    }
    std::vector<State> expected_merged;
    for (State v = 0; v < n; ++v) {
        if (provenance[v].size() >= 2) expected_merged.push_back(v);
    }
    if (merged != expected_merged) {
        throw Error(ErrorCode::InvalidAutomaton, "merged list out of sync with preimages");
    }
}

ThreeDfa reduce_to_3dfa(const Apta& apta) {
    const std::size_t n = apta.num_states();
    const std::size_t letters = apta.num_letters();

    constexpr std::int32_t kUnregistered = -1;
    std::vector<std::int32_t> rep_of(n, kUnregistered);

    ThreeDfa out;
    out.alphabet = apta.alphabet;

    auto new_rep = [&](Verdict3 kind) {
        out.kind.push_back(kind);
        out.provenance.emplace_back();
        return static_cast<State>(out.kind.size() - 1);
    };
    auto assign = [&](State apta_state, State rep) {
        rep_of[apta_state] = static_cast<std::int32_t>(rep);
        out.provenance[rep].push_back(apta_state);
    };

    auto is_leaf = [&](State v) {
        for (Symbol l = 0; l < letters; ++l) {
            if (apta.delta[v * letters + l] >= 0) return false;
        }
        return true;
    };

    // Accepting leaves all recognize exactly the empty word: one class.
    std::int32_t accepting_leaf_rep = kUnregistered;
    for (State v = 0; v < n; ++v) {
        if (apta.kind[v] == Verdict3::Accept && is_leaf(v)) {
            if (accepting_leaf_rep == kUnregistered) {
                accepting_leaf_rep = static_cast<std::int32_t>(new_rep(Verdict3::Accept));
            }
            assign(v, static_cast<State>(accepting_leaf_rep));
        }
    }
    // Rejecting states keep their identity unconditionally.
    for (State v = 0; v < n; ++v) {
        if (apta.kind[v] == Verdict3::Reject) assign(v, new_rep(Verdict3::Reject));
    }

    // Sweep the remaining states from the longest prefixes toward the root;
    // every successor sits one level deeper, so it is already registered.
    // Key: class flag plus the successor representative per letter.
    std::vector<std::vector<State>> by_depth;
    for (State v = 0; v < n; ++v) {
        if (rep_of[v] != kUnregistered) continue;
        std::size_t depth = apta.prefix_of[v].size();
        if (by_depth.size() <= depth) by_depth.resize(depth + 1);
        by_depth[depth].push_back(v);
    }
    using RegisterKey = std::vector<std::int32_t>;
    std::map<RegisterKey, State> register_map;
    for (auto level = by_depth.rbegin(); level != by_depth.rend(); ++level) {
        for (State v : *level) {
            RegisterKey key;
            key.reserve(letters + 1);
            key.push_back(apta.kind[v] == Verdict3::Accept ? 1 : 0);
            for (Symbol l = 0; l < letters; ++l) {
                std::int32_t to = apta.delta[v * letters + l];
                key.push_back(to < 0 ? -1 : rep_of[static_cast<State>(to)]);
            }
            auto [it, inserted] = register_map.try_emplace(key, 0);
            if (inserted) it->second = new_rep(apta.kind[v]);
            assign(v, it->second);
        }
    }

    out.delta.assign(out.kind.size() * letters, -1);
    for (State rep = 0; rep < out.kind.size(); ++rep) {
        State member = out.provenance[rep].front();
        for (Symbol l = 0; l < letters; ++l) {
            std::int32_t to = apta.delta[member * letters + l];
            if (to >= 0) out.delta[rep * letters + l] = rep_of[static_cast<State>(to)];
        }
    }
    out.initial = static_cast<State>(rep_of[apta.initial]);
    for (auto& preimages : out.provenance) std::sort(preimages.begin(), preimages.end());
    for (State rep = 0; rep < out.kind.size(); ++rep) {
        if (out.provenance[rep].size() >= 2) out.merged.push_back(rep);
    }
    return out;
}

Dfa::Dfa(std::uint32_t num_states, std::uint32_t num_letters)
    : m_(num_states), letters_(num_letters), delta_(num_states * num_letters, 0),
      accepting_(num_states + 1, false) {
    if (num_states < 2) {
        throw Error(ErrorCode::InvalidAutomaton, "a component DFA needs at least 2 states");
    }
    if (num_letters == 0) {
        throw Error(ErrorCode::InvalidAutomaton, "empty alphabet");
    }
}

void Dfa::set_initial(State s) {
    if (s < 1 || s > m_) throw Error(ErrorCode::InvalidAutomaton, "initial state out of range");
    initial_ = s;
}

void Dfa::set_transition(State from, Symbol letter, State to) {
    if (from < 1 || from > m_ || to < 1 || to > m_ || letter >= letters_) {
        throw Error(ErrorCode::InvalidAutomaton, "transition out of range");
    }
    delta_[(from - 1) * letters_ + letter] = to;
}

State Dfa::transition(State from, Symbol letter) const {
    State to = delta_[(from - 1) * letters_ + letter];
    if (to == 0) throw Error(ErrorCode::InvalidAutomaton, "transition unset");
    return to;
}

void Dfa::set_accepting(State s, bool accepting) {
    if (s < 1 || s > m_) throw Error(ErrorCode::InvalidAutomaton, "state out of range");
    accepting_[s] = accepting;
}

bool Dfa::is_accepting(State s) const { return accepting_.at(s); }

std::vector<State> Dfa::accepting_states() const {
    std::vector<State> out;
    for (State s = 1; s <= m_; ++s) {
        if (accepting_[s]) out.push_back(s);
    }
    return out;
}

bool Dfa::is_complete() const {
    return std::all_of(delta_.begin(), delta_.end(), [](State to) { return to != 0; });
}

bool Dfa::accepts(const Word& word) const {
    State state = initial_;
    for (Symbol letter : word) state = transition(state, letter);
    return accepting_[state];
}

void Dfa::validate() const {
    if (!is_complete()) throw Error(ErrorCode::InvalidAutomaton, "incomplete transition table");
    if (initial_ < 1 || initial_ > m_) {
        throw Error(ErrorCode::InvalidAutomaton, "initial state out of range");
    }
}

bool Dfa::operator==(const Dfa& other) const {
    return m_ == other.m_ && letters_ == other.letters_ && initial_ == other.initial_ &&
           delta_ == other.delta_ && accepting_ == other.accepting_;
}

std::vector<std::uint32_t> Decomposition::allocation() const {
    std::vector<std::uint32_t> parts;
    parts.reserve(dfas.size());
    for (const auto& dfa : dfas) parts.push_back(dfa.num_states());
    return parts;
}

bool Decomposition::accepts(const Word& word) const {
    return std::all_of(dfas.begin(), dfas.end(),
                       [&](const Dfa& dfa) { return dfa.accepts(word); });
}

void Decomposition::validate() const {
    if (dfas.empty()) throw Error(ErrorCode::InvalidAutomaton, "empty decomposition");
    std::uint32_t prev = 0;
    for (const auto& dfa : dfas) {
        dfa.validate();
        if (dfa.num_letters() != alphabet.size()) {
            throw Error(ErrorCode::InvalidAutomaton, "alphabet size mismatch");
        }
        if (dfa.num_states() < prev) {
            throw Error(ErrorCode::InvalidAutomaton, "component sizes not ascending");
        }
        prev = dfa.num_states();
    }
}

std::optional<Violation> verify_consistency(const Decomposition& decomposition,
                                            const LabeledSamples& samples) {
    for (const auto& word : samples.positives) {
        if (!decomposition.accepts(word)) {
            return Violation{word, Violation::Kind::positive_rejected};
        }
    }
    for (const auto& word : samples.negatives) {
        if (decomposition.accepts(word)) {
            return Violation{word, Violation::Kind::negative_accepted};
        }
    }
    return std::nullopt;
}

} // namespace dfadecomp
