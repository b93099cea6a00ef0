#include "dfadecomp/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "dfadecomp/encoding.hpp"
#include "dfadecomp/errors.hpp"

namespace dfadecomp {

StatesAllocation StatesAllocation::of(std::vector<std::uint32_t> parts) {
    validate_allocation(parts);
    StatesAllocation allocation;
    allocation.parts_ = std::move(parts);
    for (std::uint32_t m : allocation.parts_) allocation.total_ += m;
    return allocation;
}

std::string StatesAllocation::to_string() const {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i > 0) out << ',';
        out << parts_[i];
    }
    out << ')';
    return out.str();
}

double entropy(const StatesAllocation& allocation) {
    const double total = allocation.total();
    double h = 0.0;
    for (std::uint32_t m : allocation.parts()) {
        const double p = m / total;
        h -= p * std::log2(p);
    }
    return h;
}

bool pareto_dominates(const StatesAllocation& a, const StatesAllocation& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::ArityMismatch,
                    "cannot compare allocations of " + std::to_string(a.size()) + " and " +
                        std::to_string(b.size()) + " parts");
    }
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.parts()[i] > b.parts()[i]) return false;
        if (a.parts()[i] < b.parts()[i]) strict = true;
    }
    return strict;
}

namespace {

// Little-endian base-2^32 natural number; large enough for products of
// m^m factors well past any allocation this search can reach.
using BigUint = std::vector<std::uint32_t>;

void big_mul_small(BigUint& a, std::uint32_t factor) {
    std::uint64_t carry = 0;
    for (std::uint32_t& limb : a) {
        const std::uint64_t product = static_cast<std::uint64_t>(limb) * factor + carry;
        limb = static_cast<std::uint32_t>(product);
        carry = product >> 32;
    }
    while (carry != 0) {
        a.push_back(static_cast<std::uint32_t>(carry));
        carry >>= 32;
    }
}

int big_compare(const BigUint& a, const BigUint& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

// Product of m^m over the parts. At a fixed total T the entropy is
// log2(T) - log2(product)/T, so entropy order is the reverse of product order.
BigUint entropy_kernel(const StatesAllocation& allocation) {
    BigUint product{1};
    for (std::uint32_t m : allocation.parts()) {
        for (std::uint32_t i = 0; i < m; ++i) big_mul_small(product, m);
    }
    return product;
}

} // namespace

int compare_entropy_same_total(const StatesAllocation& a, const StatesAllocation& b) {
    return big_compare(entropy_kernel(b), entropy_kernel(a));
}

bool states_optimal_less(const StatesAllocation& a, const StatesAllocation& b) {
    if (a.total() != b.total()) return a.total() < b.total();
    const int cmp = compare_entropy_same_total(a, b);
    if (cmp != 0) return cmp > 0;
    return a.parts() < b.parts();
}

std::vector<StatesAllocation> compute_states_allocations(std::uint32_t total_states,
                                                         std::uint32_t min_part) {
    std::vector<StatesAllocation> out;
    std::vector<std::uint32_t> current;
    auto generate = [&](auto&& self, std::uint32_t remaining, std::uint32_t next_min) -> void {
        if (remaining == 0) {
            if (!current.empty()) out.push_back(StatesAllocation::of(current));
            return;
        }
        for (std::uint32_t p = next_min; p <= remaining; ++p) {
            current.push_back(p);
            self(self, remaining - p, p);
            current.pop_back();
        }
    };
    generate(generate, total_states, min_part);
    std::sort(out.begin(), out.end(), states_optimal_less);
    return out;
}

IdentificationContext::IdentificationContext(LabeledSamples s)
    : samples(std::move(s)), apta(build_apta(samples)), three_dfa(reduce_to_3dfa(apta)) {}

namespace {

AllocationOutcome solve_allocation_impl(const IdentificationContext& context,
                                        const StatesAllocation& allocation,
                                        const SearchConfig& config, AllocationReport& report) {
    const CnfInstance instance =
        config.encoder == EncoderKind::three_dfa
            ? encode_3dfa(context.three_dfa, allocation.parts(), config.symmetry)
            : encode_apta_legacy(context.apta, allocation.parts(), config.symmetry);
    const sat::SatResult result = sat::solve(instance, config.solver);
    AllocationOutcome outcome;
    outcome.status = result.status;
    outcome.solve_time_ms = result.solve_time_ms;
    if (result.status == sat::Status::Sat) {
        Decomposition decomposition = decode(instance, result.assignment,
                                             context.samples.alphabet);
        if (const auto violation = verify_consistency(decomposition, context.samples)) {
            throw Error(ErrorCode::InternalInconsistency,
                        "decoded decomposition mislabels \"" +
                            word_to_string(violation->word, context.samples.alphabet) + "\" (" +
                            violation_kind_name(violation->kind) + ")");
        }
        outcome.decomposition = std::move(decomposition);
    }
    report = AllocationReport{allocation, config.encoder, instance.num_vars,
                              instance.clauses.size(), result.status, result.solve_time_ms};
    return outcome;
}

constexpr std::size_t kNoSat = std::numeric_limits<std::size_t>::max();

/// Solves a round of allocations, honoring config.jobs. Returns the index of
/// the first satisfiable allocation and its outcome, or kNoSat. Throws
/// SolverUnusable if an Unknown result precedes (in round order) any Sat.
std::pair<std::size_t, AllocationOutcome> solve_round(
    const IdentificationContext& context, const std::vector<StatesAllocation>& round,
    const SearchConfig& config) {
    struct Slot {
        bool ran = false;
        AllocationOutcome outcome;
        AllocationReport report;
    };
    std::vector<Slot> slots(round.size());

    const unsigned jobs = std::max(1u, config.jobs);
    if (jobs == 1 || round.size() == 1) {
        for (std::size_t i = 0; i < round.size(); ++i) {
            slots[i].outcome = solve_allocation_impl(context, round[i], config, slots[i].report);
            slots[i].ran = true;
            if (config.on_allocation) config.on_allocation(slots[i].report);
            if (slots[i].outcome.status == sat::Status::Sat) {
                return {i, std::move(slots[i].outcome)};
            }
            if (slots[i].outcome.status == sat::Status::Unknown) {
                throw Error(ErrorCode::SolverUnusable, "solver gave up on allocation " +
                                                           round[i].to_string());
            }
        }
        return {kNoSat, AllocationOutcome{}};
    }

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best_sat{kNoSat};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= round.size()) return;
            if (idx > best_sat.load()) continue;
            try {
                slots[idx].outcome =
                    solve_allocation_impl(context, round[idx], config, slots[idx].report);
                slots[idx].ran = true;
                if (slots[idx].outcome.status == sat::Status::Sat) {
                    std::size_t current = best_sat.load();
                    while (idx < current && !best_sat.compare_exchange_weak(current, idx)) {
                    }
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t width = std::min<std::size_t>(jobs, round.size());
    pool.reserve(width);
    for (std::size_t i = 0; i < width; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    if (config.on_allocation) {
        for (const Slot& slot : slots) {
            if (slot.ran) config.on_allocation(slot.report);
        }
    }
    const std::size_t winner = best_sat.load();
    const std::size_t scan_end = winner == kNoSat ? round.size() : winner;
    for (std::size_t i = 0; i < scan_end; ++i) {
        if (slots[i].ran && slots[i].outcome.status == sat::Status::Unknown) {
            throw Error(ErrorCode::SolverUnusable,
                        "solver gave up on allocation " + round[i].to_string());
        }
    }
    if (winner == kNoSat) return {kNoSat, AllocationOutcome{}};
    return {winner, std::move(slots[winner].outcome)};
}

} // namespace

AllocationOutcome solve_allocation(const IdentificationContext& context,
                                   const StatesAllocation& allocation,
                                   const SearchConfig& config) {
    AllocationReport report;
    AllocationOutcome outcome = solve_allocation_impl(context, allocation, config, report);
    if (config.on_allocation) config.on_allocation(report);
    return outcome;
}

std::uint64_t states_total_bound(const LabeledSamples& samples) {
    std::uint64_t bound = 2;
    for (const Word& u : samples.negatives) bound += u.size() + 2;
    return bound;
}

Decomposition degenerate_witness(const LabeledSamples& samples) {
    const auto letters = static_cast<std::uint32_t>(samples.alphabet.size());
    Decomposition decomposition;
    decomposition.alphabet = samples.alphabet;

    Dfa all(2, letters);
    for (Symbol l = 0; l < letters; ++l) {
        all.set_transition(1, l, 1);
        all.set_transition(2, l, 2);
    }
    all.set_accepting(1, true);
    all.set_accepting(2, true);
    decomposition.dfas.push_back(std::move(all));

    for (const Word& u : samples.negatives) {
        const auto m = static_cast<std::uint32_t>(u.size() + 2);
        const std::uint32_t sink = m;
        const std::uint32_t dead_end = static_cast<std::uint32_t>(u.size()) + 1;
        Dfa rejector(m, letters);
        for (std::uint32_t q = 1; q <= m; ++q) {
            for (Symbol l = 0; l < letters; ++l) rejector.set_transition(q, l, sink);
            rejector.set_accepting(q, q != dead_end);
        }
        for (std::size_t i = 0; i < u.size(); ++i) {
            rejector.set_transition(static_cast<std::uint32_t>(i) + 1, u[i],
                                    static_cast<std::uint32_t>(i) + 2);
        }
        decomposition.dfas.push_back(std::move(rejector));
    }

    std::sort(decomposition.dfas.begin(), decomposition.dfas.end(),
              [](const Dfa& a, const Dfa& b) { return a.num_states() < b.num_states(); });
    decomposition.validate();
    return decomposition;
}

StatesOptimalResult solve_states_optimal(const IdentificationContext& context,
                                         const SearchConfig& config,
                                         std::optional<std::uint32_t> max_dfas) {
    if (max_dfas && *max_dfas == 0) {
        throw Error(ErrorCode::InvalidBound, "max_dfas must be at least 1");
    }
    const std::uint64_t bound = states_total_bound(context.samples);
    for (std::uint64_t total = 2;; ++total) {
        if (total > bound) {
            throw Error(ErrorCode::BoundExceeded,
                        "no decomposition within " + std::to_string(bound) +
                            " total states; the search invariant is broken");
        }
        std::vector<StatesAllocation> round =
            compute_states_allocations(static_cast<std::uint32_t>(total), 2);
        if (max_dfas) {
            round.erase(std::remove_if(round.begin(), round.end(),
                                       [&](const StatesAllocation& a) {
                                           return a.size() > *max_dfas;
                                       }),
                        round.end());
        }
        if (round.empty()) continue;
        auto [index, outcome] = solve_round(context, round, config);
        if (index == kNoSat) continue;
        return StatesOptimalResult{round[index], std::move(*outcome.decomposition),
                                   entropy(round[index])};
    }
}

std::vector<ParetoEntry> solve_pareto(const IdentificationContext& context, std::size_t num_dfas,
                                      const SearchConfig& config) {
    std::vector<ParetoEntry> frontier;
    std::deque<StatesAllocation> queue;
    std::set<std::vector<std::uint32_t>> visited;

    const StatesAllocation start =
        StatesAllocation::of(std::vector<std::uint32_t>(num_dfas, 2));
    queue.push_back(start);
    visited.insert(start.parts());

    while (!queue.empty()) {
        const StatesAllocation allocation = queue.front();
        queue.pop_front();

        bool dominated = false;
        for (const ParetoEntry& entry : frontier) {
            if (pareto_dominates(entry.allocation, allocation)) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;

        AllocationOutcome outcome = solve_allocation(context, allocation, config);
        if (outcome.status == sat::Status::Unknown) {
            throw Error(ErrorCode::SolverUnusable,
                        "solver gave up on allocation " + allocation.to_string());
        }
        if (outcome.status == sat::Status::Sat) {
            frontier.push_back(ParetoEntry{allocation, std::move(*outcome.decomposition)});
            continue;
        }
        for (std::size_t i = 0; i < num_dfas; ++i) {
            std::vector<std::uint32_t> parts = allocation.parts();
            ++parts[i];
            std::sort(parts.begin(), parts.end());
            if (visited.insert(parts).second) {
                queue.push_back(StatesAllocation::of(parts));
            }
        }
    }
    return frontier;
}

} // namespace dfadecomp
