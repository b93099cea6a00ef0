#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <sys/stat.h>

#include "dfadecomp/cdcl.hpp"
#include "dfadecomp/sat.hpp"
#include "dfadecomp/search.hpp"

using namespace dfadecomp;

namespace {

CnfInstance make_instance(int num_vars, std::vector<Clause> clauses) {
    CnfInstance instance;
    instance.num_vars = num_vars;
    instance.clauses = std::move(clauses);
    return instance;
}

/// Exhaustive satisfiability oracle for up to ~20 variables.
std::optional<std::vector<bool>> brute_force(int num_vars, const std::vector<Clause>& clauses) {
    for (std::uint64_t mask = 0; mask < (1ull << num_vars); ++mask) {
        bool all = true;
        for (const Clause& clause : clauses) {
            bool sat = false;
            for (int lit : clause) {
                const int v = std::abs(lit);
                const bool val = (mask >> (v - 1)) & 1ull;
                if ((lit > 0) == val) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all) {
            std::vector<bool> model(static_cast<std::size_t>(num_vars) + 1, false);
            for (int v = 1; v <= num_vars; ++v) model[v] = (mask >> (v - 1)) & 1ull;
            return model;
        }
    }
    return std::nullopt;
}

/// Pigeonhole principle formula: pigeons = holes + 1, unsatisfiable.
CnfInstance pigeonhole(int holes) {
    const int pigeons = holes + 1;
    const auto var = [holes](int p, int h) { return (p - 1) * holes + h; };
    std::vector<Clause> clauses;
    for (int p = 1; p <= pigeons; ++p) {
        Clause any;
        for (int h = 1; h <= holes; ++h) any.push_back(var(p, h));
        clauses.push_back(std::move(any));
    }
    for (int h = 1; h <= holes; ++h) {
        for (int p = 1; p <= pigeons; ++p) {
            for (int q = p + 1; q <= pigeons; ++q) {
                clauses.push_back({-var(p, h), -var(q, h)});
            }
        }
    }
    return make_instance(pigeons * holes, std::move(clauses));
}

std::string write_script(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << "#!/bin/sh\n" << body << "\n";
    out.close();
    ::chmod(path.c_str(), 0755);
    return path;
}

} // namespace

TEST_CASE("builtin solver agrees with exhaustive search on random formulas") {
    std::mt19937_64 rng(20240812);
    int sat_count = 0;
    int unsat_count = 0;
    for (int round = 0; round < 300; ++round) {
        const int num_vars = 3 + static_cast<int>(rng() % 8);
        const std::size_t num_clauses = 2 + rng() % 40;
        std::vector<Clause> clauses;
        for (std::size_t c = 0; c < num_clauses; ++c) {
            const std::size_t width = 1 + rng() % 3;
            Clause clause;
            for (std::size_t w = 0; w < width; ++w) {
                const int v = 1 + static_cast<int>(rng() % num_vars);
                clause.push_back(rng() % 2 == 0 ? v : -v);
            }
            clauses.push_back(std::move(clause));
        }
        const auto expected = brute_force(num_vars, clauses);
        const CnfInstance instance = make_instance(num_vars, clauses);
        const sat::SatResult result = sat::solve(instance, {});
        if (expected.has_value()) {
            ++sat_count;
            REQUIRE(result.status == sat::Status::Sat);
            CHECK(sat::satisfies(instance, result.assignment));
            CHECK(result.assignment.size() == static_cast<std::size_t>(num_vars) + 1);
        } else {
            ++unsat_count;
            REQUIRE(result.status == sat::Status::Unsat);
        }
    }
    // The generator must exercise both outcomes to mean anything.
    CHECK(sat_count > 50);
    CHECK(unsat_count > 50);
}

TEST_CASE("builtin solver handles edge formulas") {
    SUBCASE("contradiction between units") {
        const CnfInstance instance = make_instance(1, {{1}, {-1}});
        CHECK(sat::solve(instance, {}).status == sat::Status::Unsat);
    }
    SUBCASE("tautological clause leaves the variable free") {
        const CnfInstance instance = make_instance(1, {{1, -1}});
        CHECK(sat::solve(instance, {}).status == sat::Status::Sat);
    }
    SUBCASE("no clauses at all") {
        const CnfInstance instance = make_instance(3, {});
        const auto result = sat::solve(instance, {});
        REQUIRE(result.status == sat::Status::Sat);
        CHECK(result.assignment.size() == 4);
    }
    SUBCASE("pigeonhole is unsatisfiable") {
        CHECK(sat::solve(pigeonhole(3), {}).status == sat::Status::Unsat);
    }
    SUBCASE("builtin timeout reports unknown") {
        sat::SolverConfig config;
        config.timeout_ms = 1;
        const auto result = sat::solve(pigeonhole(10), config);
        REQUIRE(result.status == sat::Status::Unknown);
        CHECK(result.reason == "timeout");
    }
}

TEST_CASE("solver core exposes statistics and direct clause loading") {
    sat::CdclSolver solver(2);
    solver.add_clause({1, 2});
    solver.add_clause({-1, 2});
    solver.add_clause({1, -2});
    CHECK(solver.solve() == sat::CdclSolver::Outcome::Sat);
    CHECK(solver.value(1));
    CHECK(solver.value(2));

    sat::CdclSolver empty_clause(1);
    empty_clause.add_clause({});
    CHECK(empty_clause.solve() == sat::CdclSolver::Outcome::Unsat);

    sat::CdclSolver hard(0);
    CHECK(hard.solve() == sat::CdclSolver::Outcome::Sat);
}

TEST_CASE("satisfies checks every clause") {
    const CnfInstance instance = make_instance(2, {{1, -2}, {2}});
    std::vector<bool> good = {false, true, true};
    std::vector<bool> bad = {false, false, true};
    CHECK(sat::satisfies(instance, good));
    CHECK_FALSE(sat::satisfies(instance, bad));
}

TEST_CASE("DIMACS serialization") {
    CnfInstance instance = make_instance(2, {{1, -2}});
    CHECK(sat::to_dimacs(instance) == "p cnf 2 1\n1 -2 0\n");

    instance.meta.encoder = "three_dfa";
    instance.meta.allocation = {2, 2};
    instance.meta.acceptor_states = 7;
    instance.meta.symmetry = true;
    CHECK(sat::to_dimacs(instance) == "c encoder three_dfa\n"
                                      "c allocation 2 2\n"
                                      "c acceptor_states 7\n"
                                      "c symmetry 1\n"
                                      "p cnf 2 1\n"
                                      "1 -2 0\n");
}

TEST_CASE("DIMACS parsing round-trips and rejects malformed input") {
    const CnfInstance parsed = sat::parse_dimacs("c comment\np cnf 3 2\n1 -2 0\n2 3 0\n");
    CHECK(parsed.num_vars == 3);
    REQUIRE(parsed.clauses.size() == 2);
    CHECK(parsed.clauses[0] == Clause{1, -2});
    CHECK(parsed.clauses[1] == Clause{2, 3});

    const CnfInstance folded = sat::parse_dimacs("p cnf 2 2\n1\n-2 0 2 0\n");
    CHECK(folded.clauses.size() == 2);
    CHECK(folded.clauses[0] == Clause{1, -2});

    const auto code_of = [](const std::string& text) {
        try {
            sat::parse_dimacs(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InternalInconsistency;
    };
    CHECK(code_of("") == ErrorCode::EmptyInput);
    CHECK(code_of("c nothing\n") == ErrorCode::EmptyInput);
    CHECK(code_of("p cnf 2 1\np cnf 2 1\n1 0\n") == ErrorCode::MalformedHeader);
    CHECK(code_of("1 0\np cnf 2 1\n") == ErrorCode::MalformedHeader);
    CHECK(code_of("p cnf 2 1\n3 0\n") == ErrorCode::MalformedInput);
    CHECK(code_of("p cnf 2 1\n1 x 0\n") == ErrorCode::MalformedInput);
    CHECK(code_of("p cnf 2 1\n1 -2\n") == ErrorCode::MalformedInput);
    CHECK(code_of("p cnf 2 2\n1 0\n") == ErrorCode::MalformedHeader);
}

TEST_CASE("solver output parsing") {
    const auto sat_out = sat::parse_solver_output("s SATISFIABLE\nv 1 -2 0\n", 10);
    CHECK(sat_out.status == sat::Status::Sat);
    CHECK(sat_out.model_literals == std::vector<int>{1, -2});

    const auto split = sat::parse_solver_output("s SATISFIABLE\nv 1\nv -2\nv 0\n", 0);
    CHECK(split.status == sat::Status::Sat);
    CHECK(split.model_literals == std::vector<int>{1, -2});

    CHECK(sat::parse_solver_output("s UNSATISFIABLE\n", 20).status == sat::Status::Unsat);
    CHECK(sat::parse_solver_output("chatter\n", 10).status == sat::Status::Sat);
    CHECK(sat::parse_solver_output("chatter\n", 20).status == sat::Status::Unsat);

    const auto unknown = sat::parse_solver_output("chatter\n", 1);
    CHECK(unknown.status == sat::Status::Unknown);
    CHECK_FALSE(unknown.reason.empty());
}

TEST_CASE("external solver round trip through a script") {
    sat::SolverConfig config;
    config.mode = sat::SolverConfig::Mode::external;

    SUBCASE("satisfiable claim with a valid model") {
        config.external_command = write_script(
            "/tmp/dfadecomp-fake-sat.sh", "echo 's SATISFIABLE'\necho 'v 1 0'");
        const CnfInstance instance = make_instance(1, {{1}});
        const auto result = sat::solve(instance, config);
        REQUIRE(result.status == sat::Status::Sat);
        CHECK(result.assignment[1]);
    }
    SUBCASE("model completion fills unmentioned variables as false") {
        config.external_command = write_script(
            "/tmp/dfadecomp-fake-partial.sh", "echo 's SATISFIABLE'\necho 'v 1 0'");
        const CnfInstance instance = make_instance(3, {{1, 2}, {-2, -3}});
        const auto result = sat::solve(instance, config);
        REQUIRE(result.status == sat::Status::Sat);
        CHECK(result.assignment == std::vector<bool>{false, true, false, false});
    }
    SUBCASE("claimed model violating the formula is rejected") {
        config.external_command = write_script(
            "/tmp/dfadecomp-fake-lie.sh", "echo 's SATISFIABLE'\necho 'v -1 0'");
        const CnfInstance instance = make_instance(1, {{1}});
        try {
            sat::solve(instance, config);
            FAIL("expected Error(MalformedModel)");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MalformedModel);
        }
    }
    SUBCASE("unsatisfiable claim passes through") {
        config.external_command = write_script(
            "/tmp/dfadecomp-fake-unsat.sh", "echo 's UNSATISFIABLE'");
        CHECK(sat::solve(make_instance(1, {{1}}), config).status == sat::Status::Unsat);
    }
    SUBCASE("exit-code-only solvers work") {
        config.external_command =
            write_script("/tmp/dfadecomp-fake-exit.sh", "exit 10");
        const CnfInstance instance = make_instance(1, {{-1}});
        CHECK(sat::solve(instance, config).status == sat::Status::Sat);
    }
    SUBCASE("missing binary raises SolverUnusable") {
        config.external_command = "/nonexistent/dfadecomp-solver";
        try {
            sat::solve(make_instance(1, {{1}}), config);
            FAIL("expected Error(SolverUnusable)");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SolverUnusable);
        }
    }
    SUBCASE("empty command raises SolverUnusable") {
        config.external_command = "";
        try {
            sat::solve(make_instance(1, {{1}}), config);
            FAIL("expected Error(SolverUnusable)");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SolverUnusable);
        }
    }
    SUBCASE("hanging solver hits the timeout") {
        config.external_command =
            write_script("/tmp/dfadecomp-fake-hang.sh", "sleep 30");
        config.timeout_ms = 200;
        const auto result = sat::solve(make_instance(1, {{1}}), config);
        REQUIRE(result.status == sat::Status::Unknown);
        CHECK(result.reason == "timeout");
    }
}

TEST_CASE("encoded instances solve end to end") {
    const LabeledSamples samples = LabeledSamples::make(
        Alphabet::numeric(2), {{0, 0, 1}, {0, 0, 0}, {0, 1}}, {{1}, {0, 1, 0}});
    const ThreeDfa acceptor = reduce_to_3dfa(build_apta(samples));

    const CnfInstance sat_instance = encode_3dfa(acceptor, {2, 2}, false);
    const auto sat_result = sat::solve(sat_instance, {});
    REQUIRE(sat_result.status == sat::Status::Sat);
    const Decomposition decomposition =
        decode(sat_instance, sat_result.assignment, samples.alphabet);
    CHECK_FALSE(verify_consistency(decomposition, samples).has_value());

    // One 2-state machine alone cannot separate this sample.
    const CnfInstance unsat_instance = encode_3dfa(acceptor, {2}, false);
    CHECK(sat::solve(unsat_instance, {}).status == sat::Status::Unsat);
}
