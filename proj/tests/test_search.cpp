#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sys/stat.h>

#include "dfadecomp/search.hpp"

using namespace dfadecomp;

namespace {

LabeledSamples fig1() {
    return LabeledSamples::make(Alphabet::numeric(2),
                                {{0, 0, 1}, {0, 0, 0}, {0, 1}}, {{1}, {0, 1, 0}});
}

StatesAllocation alloc(std::vector<std::uint32_t> parts) {
    return StatesAllocation::of(std::move(parts));
}

/// All ascending part tuples with parts >= min_part summing to total.
void enumerate_partitions(std::uint32_t total, std::uint32_t min_part,
                          std::vector<std::uint32_t>& prefix,
                          std::set<std::vector<std::uint32_t>>& out) {
    if (total == 0) {
        if (!prefix.empty()) out.insert(prefix);
        return;
    }
    for (std::uint32_t part = min_part; part <= total; ++part) {
        prefix.push_back(part);
        enumerate_partitions(total - part, part, prefix, out);
        prefix.pop_back();
    }
}

LabeledSamples random_samples(std::mt19937_64& rng) {
    const std::size_t letters = 2 + rng() % 2;
    std::vector<Word> positives;
    std::vector<Word> negatives;
    std::set<Word> used;
    const std::size_t count = 1 + rng() % 6;
    for (std::size_t i = 0; i < count; ++i) {
        Word word(rng() % 5);
        for (auto& s : word) s = static_cast<Symbol>(rng() % letters);
        if (!used.insert(word).second) continue;
        (rng() % 2 == 0 ? positives : negatives).push_back(word);
    }
    if (positives.empty() && negatives.empty()) positives.push_back({0});
    return LabeledSamples::make(Alphabet::numeric(letters), positives, negatives);
}

std::string write_script(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << "#!/bin/sh\n" << body << "\n";
    out.close();
    ::chmod(path.c_str(), 0755);
    return path;
}

} // namespace

TEST_CASE("allocation construction and printing") {
    const StatesAllocation a = alloc({2, 3, 3});
    CHECK(a.total() == 8);
    CHECK(a.size() == 3);
    CHECK(a.to_string() == "(2,3,3)");
    CHECK(alloc({4}).to_string() == "(4)");
    CHECK_THROWS_AS(StatesAllocation::of({3, 2}), Error);
    CHECK_THROWS_AS(StatesAllocation::of({}), Error);
}

TEST_CASE("entropy of a state distribution") {
    CHECK(entropy(alloc({5})) == 0.0);
    CHECK(entropy(alloc({2, 2})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entropy(alloc({2, 2, 3, 3})) ==
          doctest::Approx(1.9709505944546688).epsilon(1e-12));
    CHECK(entropy(alloc({2, 2, 2, 2, 2})) ==
          doctest::Approx(std::log2(5.0)).epsilon(1e-12));
}

TEST_CASE("pareto dominance") {
    CHECK(pareto_dominates(alloc({2, 2}), alloc({2, 3})));
    CHECK(pareto_dominates(alloc({2, 2}), alloc({3, 3})));
    CHECK_FALSE(pareto_dominates(alloc({2, 2}), alloc({2, 2})));
    CHECK_FALSE(pareto_dominates(alloc({2, 4}), alloc({3, 3})));
    CHECK_FALSE(pareto_dominates(alloc({3, 3}), alloc({2, 4})));
    CHECK_THROWS_AS(pareto_dominates(alloc({2, 2}), alloc({2, 2, 2})), Error);
}

TEST_CASE("exact entropy comparison matches floating point when it is decisive") {
    std::mt19937_64 rng(20240813);
    for (int round = 0; round < 200; ++round) {
        const std::uint32_t total = 6 + rng() % 20;
        std::set<std::vector<std::uint32_t>> parts;
        std::vector<std::uint32_t> prefix;
        enumerate_partitions(total, 2, prefix, parts);
        std::vector<std::vector<std::uint32_t>> list(parts.begin(), parts.end());
        const auto& a = list[rng() % list.size()];
        const auto& b = list[rng() % list.size()];
        const int exact = compare_entropy_same_total(alloc(a), alloc(b));
        const double delta = entropy(alloc(a)) - entropy(alloc(b));
        if (std::abs(delta) > 1e-9) {
            CHECK(exact == (delta > 0 ? 1 : -1));
        }
        if (a == b) CHECK(exact == 0);
        CHECK(exact == -compare_entropy_same_total(alloc(b), alloc(a)));
    }
}

TEST_CASE("states-optimal order: totals, then entropy, then lexicographic") {
    CHECK(states_optimal_less(alloc({3}), alloc({2, 2})));
    CHECK_FALSE(states_optimal_less(alloc({2, 2}), alloc({3})));
    CHECK(states_optimal_less(alloc({2, 3}), alloc({5})));
    CHECK(states_optimal_less(alloc({2, 2, 3}), alloc({3, 4})));
    CHECK_FALSE(states_optimal_less(alloc({2, 3}), alloc({2, 3})));
}

TEST_CASE("allocation enumeration for ten states") {
    const std::vector<std::vector<std::uint32_t>> expected = {
        {2, 2, 2, 2, 2}, {2, 2, 3, 3}, {2, 2, 2, 4}, {3, 3, 4}, {2, 4, 4}, {2, 3, 5},
        {2, 2, 6},       {5, 5},       {4, 6},       {3, 7},    {2, 8},    {10},
    };
    const auto got = compute_states_allocations(10, 2);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(got[i].parts() == expected[i]);
    }
}

TEST_CASE("allocation enumeration is complete and ordered") {
    for (std::uint32_t total = 2; total <= 14; ++total) {
        for (std::uint32_t min_part : {2u, 3u}) {
            const auto got = compute_states_allocations(total, min_part);
            std::set<std::vector<std::uint32_t>> expected;
            std::vector<std::uint32_t> prefix;
            enumerate_partitions(total, min_part, prefix, expected);
            REQUIRE(got.size() == expected.size());
            for (const auto& allocation : got) {
                CHECK(expected.count(allocation.parts()) == 1);
                CHECK(std::is_sorted(allocation.parts().begin(), allocation.parts().end()));
            }
            for (std::size_t i = 1; i < got.size(); ++i) {
                const int cmp = compare_entropy_same_total(got[i - 1], got[i]);
                const bool ordered =
                    cmp > 0 || (cmp == 0 && got[i - 1].parts() < got[i].parts());
                CHECK(ordered);
            }
        }
    }
}

TEST_CASE("identification context builds both acceptors once") {
    const IdentificationContext context(fig1());
    CHECK(context.apta.num_states() == 8);
    CHECK(context.three_dfa.num_states() == 7);
    CHECK(context.samples.num_words() == 5);
}

TEST_CASE("allocation solving decodes and verifies satisfiable cases") {
    const IdentificationContext context(fig1());
    SearchConfig config;
    config.symmetry = false;

    std::vector<AllocationReport> reports;
    config.on_allocation = [&](const AllocationReport& r) { reports.push_back(r); };

    const AllocationOutcome sat_outcome = solve_allocation(context, alloc({2, 2}), config);
    REQUIRE(sat_outcome.status == sat::Status::Sat);
    REQUIRE(sat_outcome.decomposition.has_value());
    CHECK_FALSE(verify_consistency(*sat_outcome.decomposition, context.samples).has_value());
    CHECK(sat_outcome.decomposition->allocation() == std::vector<std::uint32_t>{2, 2});

    const AllocationOutcome unsat_outcome = solve_allocation(context, alloc({2}), config);
    CHECK(unsat_outcome.status == sat::Status::Unsat);
    CHECK_FALSE(unsat_outcome.decomposition.has_value());

    REQUIRE(reports.size() == 2);
    CHECK(reports[0].allocation == alloc({2, 2}));
    CHECK(reports[0].num_vars == 52);
    CHECK(reports[0].num_clauses == 118);
    CHECK(reports[0].status == sat::Status::Sat);
    CHECK(reports[1].status == sat::Status::Unsat);
}

TEST_CASE("termination bound and its witness") {
    const LabeledSamples samples = fig1();
    CHECK(states_total_bound(samples) == 10);
    CHECK(states_total_bound(LabeledSamples::make(Alphabet::numeric(2), {{0}}, {})) == 2);

    const Decomposition witness = degenerate_witness(samples);
    witness.validate();
    CHECK_FALSE(verify_consistency(witness, samples).has_value());
    std::uint64_t total = 0;
    for (std::uint32_t part : witness.allocation()) total += part;
    CHECK(total == states_total_bound(samples));

    std::mt19937_64 rng(20240814);
    for (int round = 0; round < 20; ++round) {
        const LabeledSamples random = random_samples(rng);
        const Decomposition w = degenerate_witness(random);
        w.validate();
        CHECK_FALSE(verify_consistency(w, random).has_value());
        std::uint64_t t = 0;
        for (std::uint32_t part : w.allocation()) t += part;
        CHECK(t == states_total_bound(random));
    }
}

TEST_CASE("states-optimal search on the reference sample") {
    const IdentificationContext context(fig1());
    SearchConfig config;

    const StatesOptimalResult result = solve_states_optimal(context, config);
    CHECK(result.allocation == alloc({3}));
    CHECK(result.total_states() == 3);
    CHECK(result.allocation_entropy == 0.0);
    CHECK_FALSE(verify_consistency(result.decomposition, context.samples).has_value());

    SUBCASE("parallel run finds the same allocation") {
        SearchConfig parallel = config;
        parallel.jobs = 4;
        CHECK(solve_states_optimal(context, parallel).allocation == result.allocation);
    }
    SUBCASE("prefix tree encoder finds the same allocation") {
        SearchConfig legacy = config;
        legacy.encoder = EncoderKind::apta_legacy;
        CHECK(solve_states_optimal(context, legacy).allocation == result.allocation);
    }
    SUBCASE("symmetry off finds the same allocation") {
        SearchConfig plain = config;
        plain.symmetry = false;
        CHECK(solve_states_optimal(context, plain).allocation == result.allocation);
    }
    SUBCASE("part cap still answers when it binds") {
        CHECK(solve_states_optimal(context, config, 1).allocation == alloc({3}));
    }
    SUBCASE("zero part cap is rejected") {
        try {
            solve_states_optimal(context, config, 0);
            FAIL("expected Error(InvalidBound)");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidBound);
        }
    }
}

TEST_CASE("states-optimal search on a one-letter separation") {
    const IdentificationContext context(
        LabeledSamples::make(Alphabet::numeric(2), {{0}}, {{1}}));
    const StatesOptimalResult result = solve_states_optimal(context, {});
    CHECK(result.allocation == alloc({2}));
}

TEST_CASE("search guards against defective solvers") {
    const IdentificationContext context(fig1());
    SUBCASE("an always-unsatisfiable solver exhausts the bound") {
        SearchConfig config;
        config.solver.mode = sat::SolverConfig::Mode::external;
        config.solver.external_command = write_script("/tmp/dfadecomp-always-unsat.sh",
                                                      "echo 's UNSATISFIABLE'");
        try {
            solve_states_optimal(context, config);
            FAIL("expected Error(BoundExceeded)");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BoundExceeded);
        }
    }
    SUBCASE("an unknown verdict stops the search") {
        SearchConfig config;
        config.solver.mode = sat::SolverConfig::Mode::external;
        config.solver.external_command =
            write_script("/tmp/dfadecomp-always-unknown.sh", "exit 1");
        try {
            solve_states_optimal(context, config);
            FAIL("expected Error(SolverUnusable)");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SolverUnusable);
        }
    }
}

TEST_CASE("pareto frontier on the reference sample") {
    const IdentificationContext context(fig1());
    SearchConfig config;

    const std::vector<ParetoEntry> pair = solve_pareto(context, 2, config);
    REQUIRE(pair.size() == 1);
    CHECK(pair[0].allocation == alloc({2, 2}));
    CHECK_FALSE(verify_consistency(pair[0].decomposition, context.samples).has_value());

    const std::vector<ParetoEntry> single = solve_pareto(context, 1, config);
    REQUIRE(single.size() == 1);
    CHECK(single[0].allocation == alloc({3}));

    SUBCASE("parallel run agrees") {
        SearchConfig parallel = config;
        parallel.jobs = 4;
        const auto entries = solve_pareto(context, 2, parallel);
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].allocation == alloc({2, 2}));
    }
    SUBCASE("prefix tree encoder agrees") {
        SearchConfig legacy = config;
        legacy.encoder = EncoderKind::apta_legacy;
        const auto entries = solve_pareto(context, 2, legacy);
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].allocation == alloc({2, 2}));
    }
}

TEST_CASE("pareto frontier entries are mutually non-dominated and verified") {
    std::mt19937_64 rng(20240815);
    int nontrivial = 0;
    for (int round = 0; round < 10; ++round) {
        const IdentificationContext context(random_samples(rng));
        const auto entries = solve_pareto(context, 2, {});
        if (entries.size() > 1) ++nontrivial;
        for (std::size_t a = 0; a < entries.size(); ++a) {
            CHECK_FALSE(
                verify_consistency(entries[a].decomposition, context.samples).has_value());
            for (std::size_t b = 0; b < entries.size(); ++b) {
                if (a == b) continue;
                CHECK_FALSE(pareto_dominates(entries[a].allocation, entries[b].allocation));
            }
        }
    }
    (void)nontrivial;
}
