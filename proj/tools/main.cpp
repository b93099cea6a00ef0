#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dfadecomp/bench.hpp"
#include "dfadecomp/errors.hpp"
#include "dfadecomp/io.hpp"
#include "dfadecomp/search.hpp"

namespace {

using namespace dfadecomp;

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InsufficientWords:
        return 2;
    case ErrorCode::SolverUnusable:
    case ErrorCode::MalformedModel:
        return 3;
    case ErrorCode::InternalInconsistency:
    case ErrorCode::BoundExceeded:
    case ErrorCode::ArityMismatch:
        return 4;
    default:
        return 1;
    }
}

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::MalformedInput, "cannot write " + path);
    out << text;
}

LabeledSamples read_samples(const std::string& path, const std::string& format) {
    return parse_samples(read_text(path),
                         format == "lines" ? SampleFormat::lines : SampleFormat::abbadingo);
}

struct SolveFlags {
    std::string encoder = "3dfa";
    bool no_symmetry = false;
    std::string solver;
    int timeout_ms = 0;
    unsigned jobs = 1;
    bool verbose = false;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& flags) {
    cmd->add_option("--encoder", flags.encoder, "CNF encoder")
        ->check(CLI::IsMember({"3dfa", "apta"}))
        ->capture_default_str();
    cmd->add_flag("--no-symmetry", flags.no_symmetry, "drop symmetry-breaking clauses");
    cmd->add_option("--solver", flags.solver,
                    "external SAT solver command (falls back to $DFA_DECOMP_SOLVER; "
                    "\"builtin\" forces the built-in solver)");
    cmd->add_option("--timeout-ms", flags.timeout_ms, "per-solve timeout")
        ->check(CLI::Range(1, 1000000));
    cmd->add_option("--jobs", flags.jobs, "parallel solves per search round")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
    cmd->add_flag("--verbose", flags.verbose, "report every solved allocation on stderr");
}

SearchConfig make_search_config(const SolveFlags& flags) {
    SearchConfig config;
    config.encoder = flags.encoder == "apta" ? EncoderKind::apta_legacy : EncoderKind::three_dfa;
    config.symmetry = !flags.no_symmetry;
    config.jobs = flags.jobs;
    std::string command = flags.solver;
    if (command.empty()) {
        if (const char* env = std::getenv("DFA_DECOMP_SOLVER"); env != nullptr && *env != '\0') {
            command = env;
        }
    }
    if (!command.empty() && command != "builtin") {
        config.solver.mode = sat::SolverConfig::Mode::external;
        config.solver.external_command = command;
    }
    if (flags.timeout_ms > 0) config.solver.timeout_ms = flags.timeout_ms;
    if (flags.verbose) {
        config.on_allocation = [](const AllocationReport& report) {
            std::cerr << "allocation=" << report.allocation.to_string()
                      << " encoder=" << encoder_kind_name(report.encoder)
                      << " status=" << sat::status_name(report.status)
                      << " vars=" << report.num_vars << " clauses=" << report.num_clauses
                      << " time_ms=" << report.solve_time_ms << "\n";
        };
    }
    return config;
}

std::string format_entropy(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%g", value);
    return buffer;
}

nlohmann::json decomposition_json_object(const Decomposition& decomposition) {
    return nlohmann::json::parse(decomposition_to_json(decomposition));
}

int run_build(const std::string& input, const std::string& format, const std::string& dot_3dfa,
              const std::string& dot_apta, const std::string& json_out) {
    const LabeledSamples samples = read_samples(input, format);
    const Apta apta = build_apta(samples);
    const ThreeDfa acceptor = reduce_to_3dfa(apta);
    if (!dot_3dfa.empty()) write_text(dot_3dfa, to_dot(acceptor));
    if (!dot_apta.empty()) write_text(dot_apta, to_dot(apta));
    if (!json_out.empty()) write_text(json_out, three_dfa_to_json(acceptor));
    std::cout << "apta_states=" << apta.num_states() << " 3dfa_states=" << acceptor.num_states()
              << " merged=" << acceptor.merged.size() << "\n";
    return 0;
}

int run_pareto(const std::string& input, const std::string& format, std::size_t num_dfas,
               const SolveFlags& flags, const std::string& out, const std::string& metrics_out,
               const std::string& benchmark_id) {
    const LabeledSamples samples = read_samples(input, format);
    const SearchConfig config = make_search_config(flags);

    if (!metrics_out.empty()) {
        const RunMetrics metrics = compare_run(samples, num_dfas, config, benchmark_id);
        std::ostringstream csv;
        write_metrics_csv(csv, metrics);
        write_text(metrics_out, csv.str());
        const auto& frontier = config.encoder == EncoderKind::three_dfa
                                   ? metrics.frontier_3dfa
                                   : metrics.frontier_apta;
        for (const StatesAllocation& allocation : frontier) {
            std::cout << "allocation=" << allocation.to_string() << "\n";
        }
        return 0;
    }

    const IdentificationContext context(samples);
    const auto frontier = solve_pareto(context, num_dfas, config);
    nlohmann::json entries = nlohmann::json::array();
    for (const ParetoEntry& entry : frontier) {
        std::cout << "allocation=" << entry.allocation.to_string() << "\n";
        nlohmann::json object = decomposition_json_object(entry.decomposition);
        object["allocation"] = entry.allocation.parts();
        entries.push_back(std::move(object));
    }
    if (!out.empty()) write_text(out, entries.dump(2) + "\n");
    return 0;
}

int run_states_optimal(const std::string& input, const std::string& format,
                       std::optional<std::uint32_t> max_dfas, const SolveFlags& flags,
                       const std::string& out) {
    const LabeledSamples samples = read_samples(input, format);
    const SearchConfig config = make_search_config(flags);
    const IdentificationContext context(samples);
    const StatesOptimalResult result = solve_states_optimal(context, config, max_dfas);
    std::cout << "N=" << result.total_states() << " allocation=" << result.allocation.to_string()
              << " entropy=" << format_entropy(result.allocation_entropy) << "\n";
    if (!out.empty()) write_text(out, decomposition_to_json(result.decomposition));
    return 0;
}

int run_verify(const std::string& input, const std::string& format,
               const std::string& decomposition_path) {
    const LabeledSamples samples = read_samples(input, format);
    const Decomposition decomposition = decomposition_from_json(read_text(decomposition_path));
    if (decomposition.alphabet != samples.alphabet) {
        throw Error(ErrorCode::ArityMismatch,
                    "decomposition and samples use different alphabets");
    }
    if (const auto violation = verify_consistency(decomposition, samples)) {
        std::cout << "violation word=" << word_to_string(violation->word, samples.alphabet)
                  << " kind=" << violation_kind_name(violation->kind) << "\n";
        return 2;
    }
    std::cout << "consistent\n";
    return 0;
}

int run_gen_bench(const BenchmarkSpec& spec, const std::string& out) {
    const LabeledSamples samples = generate(spec);
    write_text(out, format_samples(samples, SampleFormat::lines));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DFA decomposition identification from labeled words"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string format = "abbadingo";
    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("input", input, "sample file path, or - for stdin")->required();
        cmd->add_option("--format", format, "sample file format")
            ->check(CLI::IsMember({"abbadingo", "lines"}))
            ->capture_default_str();
    };

    CLI::App* build = app.add_subcommand(
        "build-3dfa", "Build the prefix tree and its reduced 3-valued acceptor");
    std::string dot_3dfa;
    std::string dot_apta;
    std::string json_out;
    add_input(build);
    build->add_option("--dot", dot_3dfa, "write the reduced acceptor as DOT");
    build->add_option("--dot-apta", dot_apta, "write the prefix tree as DOT");
    build->add_option("--json", json_out, "write the reduced acceptor as JSON");

    CLI::App* pareto = app.add_subcommand(
        "identify-pareto", "Find all Pareto-optimal decompositions with a fixed DFA count");
    std::size_t num_dfas = 0;
    std::string pareto_out;
    std::string metrics_out;
    std::string benchmark_id = "bench";
    SolveFlags pareto_flags;
    add_input(pareto);
    pareto->add_option("--n", num_dfas, "number of DFAs in the decomposition")
        ->required()
        ->check(CLI::Range(1, 1000000));
    add_solve_flags(pareto, pareto_flags);
    pareto->add_option("--out", pareto_out, "write the frontier as JSON");
    pareto->add_option("--metrics", metrics_out,
                       "run both encoders and write a metrics CSV (instead of --out)")
        ->excludes(pareto->get_option("--out"));
    pareto->add_option("--benchmark-id", benchmark_id, "metrics row label")
        ->capture_default_str();

    CLI::App* states = app.add_subcommand(
        "identify-states-optimal", "Find a decomposition minimizing the total state count");
    std::uint32_t max_n = 0;
    std::string states_out;
    SolveFlags states_flags;
    add_input(states);
    CLI::Option* max_n_option =
        states->add_option("--max-n", max_n, "largest DFA count to consider")
            ->check(CLI::Range(1, 1000000));
    add_solve_flags(states, states_flags);
    states->add_option("--out", states_out, "write the decomposition as JSON");

    CLI::App* verify = app.add_subcommand(
        "verify", "Check a decomposition against labeled samples");
    std::string decomposition_path;
    add_input(verify);
    verify->add_option("--decomposition", decomposition_path, "decomposition JSON file")
        ->required();

    CLI::App* gen = app.add_subcommand("gen-bench", "Generate a labeled benchmark sample");
    BenchmarkSpec spec;
    std::string gen_out = "-";
    std::string generator = "partial_order_tasks";
    gen->add_option("--alphabet", spec.alphabet_size, "alphabet size")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
    gen->add_option("--max-len", spec.max_word_length, "longest sampled word")
        ->capture_default_str();
    gen->add_option("--count", spec.num_examples_per_label, "words per label")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
    gen->add_option("--generator", generator, "labeling rule")
        ->check(CLI::IsMember({"partial_order_tasks", "random_split"}))
        ->capture_default_str();
    gen->add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output path, or - for stdout")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (build->parsed()) return run_build(input, format, dot_3dfa, dot_apta, json_out);
        if (pareto->parsed()) {
            return run_pareto(input, format, num_dfas, pareto_flags, pareto_out, metrics_out,
                              benchmark_id);
        }
        if (states->parsed()) {
            std::optional<std::uint32_t> max_dfas;
            if (max_n_option->count() > 0) max_dfas = max_n;
            return run_states_optimal(input, format, max_dfas, states_flags, states_out);
        }
        if (verify->parsed()) return run_verify(input, format, decomposition_path);
        if (gen->parsed()) {
            spec.generator = generator == "random_split"
                                 ? BenchmarkSpec::Generator::random_split
                                 : BenchmarkSpec::Generator::partial_order_tasks;
            return run_gen_bench(spec, gen_out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 1;
}
