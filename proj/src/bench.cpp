#include "dfadecomp/bench.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "dfadecomp/errors.hpp"

namespace dfadecomp {

void TaskOrder::add_constraint(Symbol before, Symbol after) {
    less_[before * num_letters_ + after] = true;
}

void TaskOrder::close() {
    for (std::size_t k = 0; k < num_letters_; ++k) {
        for (std::size_t i = 0; i < num_letters_; ++i) {
            if (!less_[i * num_letters_ + k]) continue;
            for (std::size_t j = 0; j < num_letters_; ++j) {
                if (less_[k * num_letters_ + j]) less_[i * num_letters_ + j] = true;
            }
        }
    }
}

bool TaskOrder::constrained(Symbol before, Symbol after) const {
    return less_[before * num_letters_ + after];
}

bool TaskOrder::admits(const Word& word) const {
    std::vector<bool> seen(num_letters_, false);
    for (Symbol c : word) {
        for (Symbol a = 0; a < num_letters_; ++a) {
            if (constrained(a, c) && !seen[a]) return false;
        }
        seen[c] = true;
    }
    return true;
}

namespace {

std::vector<std::string> letter_names(std::uint32_t count) {
    std::vector<std::string> names;
    names.reserve(count);
    if (count <= 26) {
        for (std::uint32_t i = 0; i < count; ++i) {
            names.emplace_back(1, static_cast<char>('a' + i));
        }
    } else {
        for (std::uint32_t i = 0; i < count; ++i) names.push_back("s" + std::to_string(i));
    }
    return names;
}

// Words of length 0..max_length over `letters` symbols, or nullopt when there
// are more than `cap` of them.
std::optional<std::vector<Word>> enumerate_words(std::uint32_t letters, std::uint32_t max_length,
                                                 std::uint64_t cap) {
    std::uint64_t total = 1;
    std::uint64_t layer = 1;
    for (std::uint32_t len = 1; len <= max_length; ++len) {
        if (layer > cap / letters) return std::nullopt;
        layer *= letters;
        total += layer;
        if (total > cap) return std::nullopt;
    }
    std::vector<Word> words;
    words.reserve(total);
    words.push_back({});
    std::size_t level_begin = 0;
    for (std::uint32_t len = 1; len <= max_length; ++len) {
        const std::size_t level_end = words.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (Symbol l = 0; l < letters; ++l) {
                Word next = words[i];
                next.push_back(l);
                words.push_back(std::move(next));
            }
        }
        level_begin = level_end;
    }
    return words;
}

// Keeps the first `count` entries of a deterministic partial shuffle, then
// restores length-lexicographic order.
std::vector<Word> pick_subset(std::vector<Word> pool, std::size_t count, std::mt19937_64& rng) {
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end(), WordOrder{});
    return pool;
}

Word random_word(std::uint32_t letters, std::uint32_t max_length, std::mt19937_64& rng) {
    const auto length = static_cast<std::uint32_t>(rng() % (max_length + 1ull));
    Word word;
    word.reserve(length);
    for (std::uint32_t i = 0; i < length; ++i) {
        word.push_back(static_cast<Symbol>(rng() % letters));
    }
    return word;
}

Dfa random_small_dfa(std::uint32_t letters, std::mt19937_64& rng) {
    const auto states = static_cast<std::uint32_t>(2 + rng() % 2);
    Dfa dfa(states, letters);
    for (std::uint32_t q = 1; q <= states; ++q) {
        for (Symbol l = 0; l < letters; ++l) {
            dfa.set_transition(q, l, static_cast<std::uint32_t>(rng() % states) + 1);
        }
    }
    for (std::uint32_t q = 1; q <= states; ++q) dfa.set_accepting(q, rng() % 2 == 1);
    return dfa;
}

LabeledSamples sample_by_label(const Alphabet& alphabet, const BenchmarkSpec& spec,
                               std::mt19937_64& rng,
                               const std::function<bool(const Word&)>& label) {
    const std::uint32_t need = spec.num_examples_per_label;
    const auto space = enumerate_words(spec.alphabet_size, spec.max_word_length, 1u << 20);
    if (space) {
        std::vector<Word> admitted;
        std::vector<Word> rejected;
        for (const Word& w : *space) (label(w) ? admitted : rejected).push_back(w);
        if (admitted.size() < need || rejected.size() < need) {
            throw Error(ErrorCode::InsufficientWords,
                        "the word space up to length " + std::to_string(spec.max_word_length) +
                            " has " + std::to_string(admitted.size()) + " positive and " +
                            std::to_string(rejected.size()) + " negative words, need " +
                            std::to_string(need) + " of each");
        }
        return LabeledSamples::make(alphabet, pick_subset(std::move(admitted), need, rng),
                                    pick_subset(std::move(rejected), need, rng));
    }
    std::set<Word, WordOrder> positives;
    std::set<Word, WordOrder> negatives;
    for (std::uint64_t attempts = 0; attempts < 2'000'000; ++attempts) {
        if (positives.size() >= need && negatives.size() >= need) break;
        Word w = random_word(spec.alphabet_size, spec.max_word_length, rng);
        auto& bucket = label(w) ? positives : negatives;
        if (bucket.size() < need) bucket.insert(std::move(w));
    }
    if (positives.size() < need || negatives.size() < need) {
        throw Error(ErrorCode::InsufficientWords,
                    "sampling exhausted before finding " + std::to_string(need) +
                        " words of each label");
    }
    return LabeledSamples::make(alphabet,
                                std::vector<Word>(positives.begin(), positives.end()),
                                std::vector<Word>(negatives.begin(), negatives.end()));
}

} // namespace

LabeledSamples generate(const BenchmarkSpec& spec) {
    if (spec.alphabet_size == 0) {
        throw Error(ErrorCode::InvalidBound, "alphabet_size must be at least 1");
    }
    if (spec.num_examples_per_label == 0) {
        throw Error(ErrorCode::InvalidBound, "num_examples_per_label must be at least 1");
    }
    const Alphabet alphabet(letter_names(spec.alphabet_size));
    std::mt19937_64 rng(spec.seed);

    if (spec.generator == BenchmarkSpec::Generator::partial_order_tasks) {
        std::vector<Symbol> order(spec.alphabet_size);
        for (Symbol i = 0; i < spec.alphabet_size; ++i) order[i] = i;
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
        }
        TaskOrder tasks(spec.alphabet_size);
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (std::size_t j = i + 1; j < order.size(); ++j) {
                if (rng() % 2 == 1) tasks.add_constraint(order[i], order[j]);
            }
        }
        tasks.close();
        return sample_by_label(alphabet, spec, rng,
                               [&tasks](const Word& w) { return tasks.admits(w); });
    }

    const Dfa first = random_small_dfa(spec.alphabet_size, rng);
    const Dfa second = random_small_dfa(spec.alphabet_size, rng);
    return sample_by_label(alphabet, spec, rng, [&](const Word& w) {
        return first.accepts(w) && second.accepts(w);
    });
}

namespace {

constexpr std::uint64_t kOracleGuard = 10'000'000;

std::uint64_t table_space(std::uint32_t states, std::uint32_t letters) {
    std::uint64_t space = 1;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(states) * letters; ++i) {
        space *= states;
        if (space > kOracleGuard) return kOracleGuard + 1;
    }
    return space;
}

std::uint32_t walk(const std::vector<std::uint32_t>& table, std::uint32_t letters,
                   const Word& word) {
    std::uint32_t q = 1;
    for (Symbol s : word) q = table[(q - 1) * letters + s];
    return q;
}

// Advances the table odometer: entry (1, first letter) varies fastest.
bool next_table(std::vector<std::uint32_t>& table, std::uint32_t states) {
    for (std::uint32_t& cell : table) {
        if (cell < states) {
            ++cell;
            return true;
        }
        cell = 1;
    }
    return false;
}

} // namespace

std::optional<Dfa> oracle_exists_dfa(const LabeledSamples& samples, std::uint32_t num_states) {
    if (num_states < 2) {
        throw Error(ErrorCode::InvalidBound, "complete DFAs here have at least 2 states");
    }
    const auto letters = static_cast<std::uint32_t>(samples.alphabet.size());
    const std::uint64_t tables = table_space(num_states, letters);
    if (num_states > 25 || tables > kOracleGuard ||
        tables > kOracleGuard >> num_states) {
        throw Error(ErrorCode::SearchSpaceTooLarge,
                    "exhaustive search over " + std::to_string(num_states) +
                        " states is out of reach");
    }
    for (std::uint32_t acc = 0; acc < (1u << num_states); ++acc) {
        std::vector<std::uint32_t> table(static_cast<std::size_t>(num_states) * letters, 1);
        do {
            bool ok = true;
            for (const Word& w : samples.positives) {
                if ((acc >> (walk(table, letters, w) - 1) & 1) == 0) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            for (const Word& w : samples.negatives) {
                if ((acc >> (walk(table, letters, w) - 1) & 1) == 1) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            Dfa dfa(num_states, letters);
            for (std::uint32_t q = 1; q <= num_states; ++q) {
                for (Symbol l = 0; l < letters; ++l) {
                    dfa.set_transition(q, l, table[(q - 1) * letters + l]);
                }
                dfa.set_accepting(q, (acc >> (q - 1) & 1) == 1);
            }
            return dfa;
        } while (next_table(table, num_states));
    }
    return std::nullopt;
}

namespace {

// Minimal negative-acceptance masks reachable with m states: for every
// transition table, accepting exactly the positive end-states is the least
// acceptance consistent with the positives, so the masks below cover every
// consistent m-state DFA from below.
std::vector<std::uint64_t> negative_masks(const LabeledSamples& samples, std::uint32_t states) {
    const auto letters = static_cast<std::uint32_t>(samples.alphabet.size());
    if (table_space(states, letters) > kOracleGuard) {
        throw Error(ErrorCode::SearchSpaceTooLarge,
                    "exhaustive search over " + std::to_string(states) +
                        " states is out of reach");
    }
    std::set<std::uint64_t> masks;
    std::vector<std::uint32_t> table(static_cast<std::size_t>(states) * letters, 1);
    do {
        std::uint32_t acc = 0;
        for (const Word& w : samples.positives) acc |= 1u << (walk(table, letters, w) - 1);
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < samples.negatives.size(); ++i) {
            if ((acc >> (walk(table, letters, samples.negatives[i]) - 1) & 1) == 1) {
                mask |= 1ull << i;
            }
        }
        masks.insert(mask);
    } while (next_table(table, states));

    // Keep only subset-minimal masks; a superset never rejects more words.
    std::vector<std::uint64_t> minimal;
    for (std::uint64_t m : masks) {
        bool covered = false;
        for (std::uint64_t kept : minimal) {
            if ((kept & m) == kept) {
                covered = true;
                break;
            }
        }
        if (!covered) minimal.push_back(m);
    }
    return minimal;
}

bool masks_reach_zero(const std::vector<std::vector<std::uint64_t>>& mask_sets, std::size_t part,
                      std::uint64_t current) {
    if (current == 0) return true;
    if (part == mask_sets.size()) return false;
    for (std::uint64_t m : mask_sets[part]) {
        if (masks_reach_zero(mask_sets, part + 1, current & m)) return true;
    }
    return false;
}

} // namespace

bool oracle_exists_decomposition(const LabeledSamples& samples,
                                 const std::vector<std::uint32_t>& allocation) {
    validate_allocation(allocation);
    if (samples.negatives.size() > 60) {
        throw Error(ErrorCode::SearchSpaceTooLarge, "more than 60 negative words");
    }
    std::map<std::uint32_t, std::vector<std::uint64_t>> by_size;
    std::vector<std::vector<std::uint64_t>> mask_sets;
    for (std::uint32_t m : allocation) {
        auto it = by_size.find(m);
        if (it == by_size.end()) it = by_size.emplace(m, negative_masks(samples, m)).first;
        mask_sets.push_back(it->second);
    }
    const std::uint64_t all =
        samples.negatives.empty() ? 0 : ~0ull >> (64 - samples.negatives.size());
    return masks_reach_zero(mask_sets, 0, all);
}

RunMetrics compare_run(const LabeledSamples& samples, std::size_t num_dfas,
                       const SearchConfig& config, const std::string& benchmark_id) {
    const IdentificationContext context(samples);
    RunMetrics metrics;
    metrics.benchmark_id = benchmark_id;
    metrics.acceptor_states_apta = context.apta.num_states();
    metrics.acceptor_states_3dfa = context.three_dfa.num_states();

    for (const EncoderKind encoder : {EncoderKind::three_dfa, EncoderKind::apta_legacy}) {
        SearchConfig run = config;
        run.encoder = encoder;
        const std::size_t acceptor_states = encoder == EncoderKind::three_dfa
                                                ? metrics.acceptor_states_3dfa
                                                : metrics.acceptor_states_apta;
        run.on_allocation = [&](const AllocationReport& report) {
            metrics.rows.push_back(MetricsRow{report.encoder, report.allocation, acceptor_states,
                                              report.num_vars, report.num_clauses, report.status,
                                              report.solve_time_ms});
            if (config.on_allocation) config.on_allocation(report);
        };
        const auto frontier = solve_pareto(context, num_dfas, run);
        auto& out = encoder == EncoderKind::three_dfa ? metrics.frontier_3dfa
                                                      : metrics.frontier_apta;
        for (const ParetoEntry& entry : frontier) out.push_back(entry.allocation);
    }
    return metrics;
}

void write_metrics_csv(std::ostream& out, const RunMetrics& metrics) {
    out << "# schema=dfadecomp.metrics.v1\n";
    out << "benchmark_id,encoder,allocation,acceptor_states,num_vars,num_clauses,status,"
           "solve_time_ms\n";
    for (const MetricsRow& row : metrics.rows) {
        out << metrics.benchmark_id << ',' << encoder_kind_name(row.encoder) << ",\""
            << row.allocation.to_string() << "\"," << row.acceptor_states << ',' << row.num_vars
            << ',' << row.num_clauses << ',' << sat::status_name(row.status) << ','
            << row.solve_time_ms << '\n';
    }
}

} // namespace dfadecomp
