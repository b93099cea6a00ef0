#include "dfadecomp/samples.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <set>
#include <sstream>

namespace dfadecomp {

namespace {

bool has_space(std::string_view token) {
    return std::any_of(token.begin(), token.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) tokens.push_back(std::move(token));
    return tokens;
}

std::optional<long long> parse_int(const std::string& token) {
    if (token.empty()) return std::nullopt;
    std::size_t pos = 0;
    long long value = 0;
    try {
        value = std::stoll(token, &pos);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (pos != token.size()) return std::nullopt;
    return value;
}

void append_word(std::vector<Word>& dst, std::set<Word>& seen_here, const std::set<Word>& other,
                 Word word, const Alphabet& alphabet) {
    if (other.count(word) != 0) {
        throw Error(ErrorCode::ConflictingLabel,
                    "word '" + word_to_string(word, alphabet) + "' appears with both labels");
    }
    if (seen_here.insert(word).second) dst.push_back(std::move(word));
}

} // namespace

std::string word_to_string(const Word& word, const Alphabet& alphabet) {
    std::string out;
    bool multi = false;
    for (const auto& letter : alphabet.letters()) multi = multi || letter.size() != 1;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (multi && i != 0) out += ' ';
        out += alphabet.name(word[i]);
    }
    return out;
}

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
    for (Symbol i = 0; i < letters_.size(); ++i) {
        const auto& letter = letters_[i];
        if (letter.empty() || has_space(letter)) {
            throw Error(ErrorCode::MalformedInput, "invalid letter token '" + letter + "'");
        }
        if (!index_.emplace(letter, i).second) {
            throw Error(ErrorCode::MalformedInput, "duplicate letter '" + letter + "'");
        }
    }
}

Alphabet Alphabet::numeric(std::size_t size) {
    std::vector<std::string> letters;
    letters.reserve(size);
    for (std::size_t i = 0; i < size; ++i) letters.push_back(std::to_string(i));
    return Alphabet(std::move(letters));
}

std::optional<Symbol> Alphabet::index_of(std::string_view letter) const {
    auto it = index_.find(std::string(letter));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

LabeledSamples LabeledSamples::make(Alphabet alphabet, std::vector<Word> positives,
                                    std::vector<Word> negatives) {
    LabeledSamples samples;
    samples.alphabet = std::move(alphabet);
    std::set<Word> pos_seen;
    std::set<Word> neg_seen;
    for (auto& word : positives) {
        for (Symbol s : word) {
            if (s >= samples.alphabet.size()) {
                throw Error(ErrorCode::UnknownSymbol, "symbol index " + std::to_string(s));
            }
        }
        if (pos_seen.insert(word).second) samples.positives.push_back(std::move(word));
    }
    for (auto& word : negatives) {
        for (Symbol s : word) {
            if (s >= samples.alphabet.size()) {
                throw Error(ErrorCode::UnknownSymbol, "symbol index " + std::to_string(s));
            }
        }
        if (pos_seen.count(word) != 0) {
            throw Error(ErrorCode::ConflictingLabel,
                        "word '" + word_to_string(word, samples.alphabet) +
                            "' appears with both labels");
        }
        if (neg_seen.insert(word).second) samples.negatives.push_back(std::move(word));
    }
    return samples;
}

bool LabeledSamples::operator==(const LabeledSamples& other) const {
    return alphabet == other.alphabet && positives == other.positives &&
           negatives == other.negatives;
}

namespace {

LabeledSamples parse_abbadingo(std::istream& input) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(input, line)) {
        header = split_tokens(line);
        if (!header.empty()) break;
    }
    if (header.empty()) throw Error(ErrorCode::EmptyInput, "no abbadingo header");
    if (header.size() != 2) {
        throw Error(ErrorCode::MalformedHeader, "expected '<num_words> <alphabet_size>'");
    }
    auto num_words = parse_int(header[0]);
    auto alphabet_size = parse_int(header[1]);
    if (!num_words || !alphabet_size || *num_words < 0 || *alphabet_size <= 0) {
        throw Error(ErrorCode::MalformedHeader, "bad counts in '" + line + "'");
    }
    if (*num_words == 0) throw Error(ErrorCode::EmptyInput, "header declares zero words");

    Alphabet alphabet = Alphabet::numeric(static_cast<std::size_t>(*alphabet_size));
    std::vector<Word> positives;
    std::vector<Word> negatives;
    std::set<Word> pos_seen;
    std::set<Word> neg_seen;
    long long rows = 0;
    while (rows < *num_words && std::getline(input, line)) {
        auto tokens = split_tokens(line);
        if (tokens.empty()) continue;
        ++rows;
        auto label = parse_int(tokens[0]);
        if (!label || (*label != 0 && *label != 1)) {
            throw Error(ErrorCode::MalformedInput, "bad label in '" + line + "'");
        }
        if (tokens.size() < 2) throw Error(ErrorCode::MalformedInput, "missing length in '" + line + "'");
        auto length = parse_int(tokens[1]);
        if (!length || *length < 0 ||
            tokens.size() != static_cast<std::size_t>(*length) + 2) {
            throw Error(ErrorCode::MalformedInput, "length mismatch in '" + line + "'");
        }
        Word word;
        word.reserve(static_cast<std::size_t>(*length));
        for (std::size_t i = 2; i < tokens.size(); ++i) {
            auto symbol = parse_int(tokens[i]);
            if (!symbol || *symbol < 0 || *symbol >= *alphabet_size) {
                throw Error(ErrorCode::UnknownSymbol, "symbol '" + tokens[i] + "'");
            }
            word.push_back(static_cast<Symbol>(*symbol));
        }
        if (*label == 1) {
            if (neg_seen.count(word) != 0) {
                throw Error(ErrorCode::ConflictingLabel,
                            "word '" + word_to_string(word, alphabet) + "' appears with both labels");
            }
            if (pos_seen.insert(word).second) positives.push_back(std::move(word));
        } else {
            if (pos_seen.count(word) != 0) {
                throw Error(ErrorCode::ConflictingLabel,
                            "word '" + word_to_string(word, alphabet) + "' appears with both labels");
            }
            if (neg_seen.insert(word).second) negatives.push_back(std::move(word));
        }
    }
    if (rows != *num_words) {
        throw Error(ErrorCode::MalformedHeader,
                    "header declares " + std::to_string(*num_words) + " words, found " +
                        std::to_string(rows));
    }
    LabeledSamples samples;
    samples.alphabet = std::move(alphabet);
    samples.positives = std::move(positives);
    samples.negatives = std::move(negatives);
    return samples;
}

LabeledSamples parse_lines(std::istream& input) {
    struct Row {
        bool positive;
        std::vector<std::string> tokens;
    };
    std::vector<Row> rows;
    std::vector<std::string> letters;
    std::set<std::string> letter_seen;
    std::string line;
    while (std::getline(input, line)) {
        if (!line.empty() && line[0] == '#') continue;
        auto tokens = split_tokens(line);
        if (tokens.empty()) continue;
        if (tokens[0] != "+" && tokens[0] != "-") {
            throw Error(ErrorCode::MalformedInput, "expected '+' or '-' label in '" + line + "'");
        }
        Row row;
        row.positive = tokens[0] == "+";
        row.tokens.assign(tokens.begin() + 1, tokens.end());
        for (const auto& token : row.tokens) {
            if (letter_seen.insert(token).second) letters.push_back(token);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no sample lines");

    Alphabet alphabet(std::move(letters));
    std::vector<Word> positives;
    std::vector<Word> negatives;
    std::set<Word> pos_seen;
    std::set<Word> neg_seen;
    for (const auto& row : rows) {
        Word word;
        word.reserve(row.tokens.size());
        for (const auto& token : row.tokens) word.push_back(*alphabet.index_of(token));
        if (row.positive) {
            append_word(positives, pos_seen, neg_seen, std::move(word), alphabet);
        } else {
            append_word(negatives, neg_seen, pos_seen, std::move(word), alphabet);
        }
    }
    LabeledSamples samples;
    samples.alphabet = std::move(alphabet);
    samples.positives = std::move(positives);
    samples.negatives = std::move(negatives);
    return samples;
}

} // namespace

LabeledSamples parse_samples(std::istream& input, SampleFormat format) {
    return format == SampleFormat::abbadingo ? parse_abbadingo(input) : parse_lines(input);
}

LabeledSamples parse_samples(const std::string& text, SampleFormat format) {
    std::istringstream stream(text);
    return parse_samples(stream, format);
}

std::string format_samples(const LabeledSamples& samples, SampleFormat format) {
    std::ostringstream out;
    if (format == SampleFormat::abbadingo) {
        out << samples.num_words() << ' ' << samples.alphabet.size() << '\n';
        auto emit = [&](const Word& word, int label) {
            out << label << ' ' << word.size();
            for (Symbol s : word) out << ' ' << s;
            out << '\n';
        };
        for (const auto& word : samples.positives) emit(word, 1);
        for (const auto& word : samples.negatives) emit(word, 0);
    } else {
        auto emit = [&](const Word& word, char label) {
            out << label;
            for (Symbol s : word) out << ' ' << samples.alphabet.name(s);
            out << '\n';
        };
        for (const auto& word : samples.positives) emit(word, '+');
        for (const auto& word : samples.negatives) emit(word, '-');
    }
    return out.str();
}

std::vector<Word> prefixes(const LabeledSamples& samples) {
    std::set<Word, WordOrder> all;
    auto add = [&](const Word& word) {
        for (std::size_t len = 0; len <= word.size(); ++len) {
            all.insert(Word(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(len)));
        }
    };
    for (const auto& word : samples.positives) add(word);
    for (const auto& word : samples.negatives) add(word);
    if (all.empty()) all.insert(Word{});
    return {all.begin(), all.end()};
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::MalformedInput: return "MalformedInput";
        case ErrorCode::UnknownSymbol: return "UnknownSymbol";
        case ErrorCode::ConflictingLabel: return "ConflictingLabel";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::EmptyAllocation: return "EmptyAllocation";
        case ErrorCode::AllocationTooSmall: return "AllocationTooSmall";
        case ErrorCode::AllocationNotAscending: return "AllocationNotAscending";
        case ErrorCode::MalformedModel: return "MalformedModel";
        case ErrorCode::SolverUnusable: return "SolverUnusable";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::InvalidBound: return "InvalidBound";
        case ErrorCode::BoundExceeded: return "BoundExceeded";
        case ErrorCode::InsufficientWords: return "InsufficientWords";
        case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
        case ErrorCode::InvalidAutomaton: return "InvalidAutomaton";
        case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    }
    return "Error";
}

} // namespace dfadecomp
