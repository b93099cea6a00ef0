#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dfadecomp/errors.hpp"

namespace dfadecomp {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

/// Orders words by length first, then lexicographically by letter index.
struct WordOrder {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

std::string word_to_string(const Word& word, const class Alphabet& alphabet);

/// Finite ordered set of distinct letter names. Letter indices are stable.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> letters);

    /// Letters "0", "1", ..., "<size-1>", as used by the abbadingo format.
    static Alphabet numeric(std::size_t size);

    std::size_t size() const { return letters_.size(); }
    const std::string& name(Symbol s) const { return letters_.at(s); }
    const std::vector<std::string>& letters() const { return letters_; }
    std::optional<Symbol> index_of(std::string_view letter) const;

    bool operator==(const Alphabet& other) const { return letters_ == other.letters_; }

private:
    std::vector<std::string> letters_;
    std::unordered_map<std::string, Symbol> index_;
};

/// A finite sample: disjoint positive and negative word sets over one alphabet.
/// Words are deduplicated but keep first-appearance order; that order decides
/// which violation a consistency check reports first.
struct LabeledSamples {
    Alphabet alphabet;
    std::vector<Word> positives;
    std::vector<Word> negatives;

    /// Validates membership disjointness and symbol ranges.
    static LabeledSamples make(Alphabet alphabet, std::vector<Word> positives,
                               std::vector<Word> negatives);

    std::size_t num_words() const { return positives.size() + negatives.size(); }

    bool operator==(const LabeledSamples& other) const;
};

enum class SampleFormat {
    abbadingo, ///< header "<num_words> <alphabet_size>", rows "<label> <len> <symbols...>"
    lines,     ///< rows "<+|-> <letter tokens...>", '#' comments, bare label = empty word
};

LabeledSamples parse_samples(std::istream& input, SampleFormat format);
LabeledSamples parse_samples(const std::string& text, SampleFormat format);

/// Canonical serialization; parse_samples(format_samples(s, f), f) == s.
std::string format_samples(const LabeledSamples& samples, SampleFormat format);

/// All prefixes (including the empty word) of all sample words, deduplicated,
/// ordered by length then lexicographically by letter index.
std::vector<Word> prefixes(const LabeledSamples& samples);

} // namespace dfadecomp
