#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dfadecomp/bench.hpp"
#include "dfadecomp/io.hpp"
#include "dfadecomp/search.hpp"

namespace py = pybind11;
using namespace dfadecomp;

namespace {

SampleFormat format_from(const std::string& name) {
    if (name == "abbadingo") return SampleFormat::abbadingo;
    if (name == "lines") return SampleFormat::lines;
    throw Error(ErrorCode::MalformedInput, "unknown sample format \"" + name + "\"");
}

SearchConfig config_from(const std::string& encoder, bool symmetry, int timeout_ms,
                         unsigned jobs, const std::string& solver) {
    SearchConfig config;
    if (encoder == "3dfa") {
        config.encoder = EncoderKind::three_dfa;
    } else if (encoder == "apta") {
        config.encoder = EncoderKind::apta_legacy;
    } else {
        throw Error(ErrorCode::MalformedInput, "unknown encoder \"" + encoder + "\"");
    }
    config.symmetry = symmetry;
    config.jobs = jobs;
    if (!solver.empty() && solver != "builtin") {
        config.solver.mode = sat::SolverConfig::Mode::external;
        config.solver.external_command = solver;
    }
    if (timeout_ms > 0) config.solver.timeout_ms = timeout_ms;
    return config;
}

} // namespace

PYBIND11_MODULE(dfadecomp, m) {
    m.doc() = "DFA decomposition identification from labeled examples";

    py::class_<Alphabet>(m, "Alphabet")
        .def(py::init<std::vector<std::string>>(), py::arg("letters"))
        .def_static("numeric", &Alphabet::numeric, py::arg("size"))
        .def("__len__", &Alphabet::size)
        .def("name", &Alphabet::name, py::arg("symbol"))
        .def("letters", &Alphabet::letters)
        .def("index_of", [](const Alphabet& a, const std::string& letter) {
            return a.index_of(letter);
        })
        .def("__eq__", [](const Alphabet& a, const Alphabet& b) { return a == b; });

    py::class_<LabeledSamples>(m, "LabeledSamples")
        .def_static("make", &LabeledSamples::make, py::arg("alphabet"), py::arg("positives"),
                    py::arg("negatives"))
        .def_readonly("alphabet", &LabeledSamples::alphabet)
        .def_readonly("positives", &LabeledSamples::positives)
        .def_readonly("negatives", &LabeledSamples::negatives)
        .def("num_words", &LabeledSamples::num_words);

    m.def("parse_samples",
          [](const std::string& text, const std::string& format) {
              return parse_samples(text, format_from(format));
          },
          py::arg("text"), py::arg("format") = "abbadingo");
    m.def("format_samples",
          [](const LabeledSamples& samples, const std::string& format) {
              return format_samples(samples, format_from(format));
          },
          py::arg("samples"), py::arg("format") = "abbadingo");
    m.def("word_to_string", &word_to_string, py::arg("word"), py::arg("alphabet"));

    py::enum_<Verdict3>(m, "Verdict3")
        .value("Accept", Verdict3::Accept)
        .value("Reject", Verdict3::Reject)
        .value("DontCare", Verdict3::DontCare);

    py::class_<Apta>(m, "Apta")
        .def_readonly("initial", &Apta::initial)
        .def("num_states", &Apta::num_states)
        .def("classify", &Apta::classify, py::arg("word"))
        .def("accepting_states", &Apta::accepting_states)
        .def("rejecting_states", &Apta::rejecting_states)
        .def("to_dot", [](const Apta& a) { return to_dot(a); });

    py::class_<ThreeDfa>(m, "ThreeDfa")
        .def_readonly("initial", &ThreeDfa::initial)
        .def_readonly("merged", &ThreeDfa::merged)
        .def_readonly("provenance", &ThreeDfa::provenance)
        .def("num_states", &ThreeDfa::num_states)
        .def("classify", &ThreeDfa::classify, py::arg("word"))
        .def("accepting_states", &ThreeDfa::accepting_states)
        .def("rejecting_states", &ThreeDfa::rejecting_states)
        .def("to_dot", [](const ThreeDfa& a) { return to_dot(a); })
        .def("to_json", &three_dfa_to_json);

    m.def("build_apta", &build_apta, py::arg("samples"));
    m.def("reduce_to_3dfa", &reduce_to_3dfa, py::arg("apta"));

    py::class_<Dfa>(m, "Dfa")
        .def(py::init<std::uint32_t, std::uint32_t>(), py::arg("num_states"),
             py::arg("num_letters"))
        .def("num_states", &Dfa::num_states)
        .def("num_letters", &Dfa::num_letters)
        .def("initial", &Dfa::initial)
        .def("set_initial", &Dfa::set_initial)
        .def("set_transition", &Dfa::set_transition)
        .def("transition", &Dfa::transition)
        .def("set_accepting", &Dfa::set_accepting)
        .def("is_accepting", &Dfa::is_accepting)
        .def("accepting_states", &Dfa::accepting_states)
        .def("accepts", &Dfa::accepts, py::arg("word"));

    py::class_<Decomposition>(m, "Decomposition")
        .def_readonly("alphabet", &Decomposition::alphabet)
        .def_readonly("dfas", &Decomposition::dfas)
        .def("allocation", &Decomposition::allocation)
        .def("accepts", &Decomposition::accepts, py::arg("word"))
        .def("to_json", &decomposition_to_json);

    m.def("decomposition_from_json", &decomposition_from_json, py::arg("text"));

    py::class_<Violation>(m, "Violation")
        .def_readonly("word", &Violation::word)
        .def_property_readonly("kind", [](const Violation& v) {
            return std::string(violation_kind_name(v.kind));
        });

    m.def("verify_consistency", &verify_consistency, py::arg("decomposition"),
          py::arg("samples"));

    py::class_<StatesAllocation>(m, "StatesAllocation")
        .def_static("of", &StatesAllocation::of, py::arg("parts"))
        .def("parts", &StatesAllocation::parts)
        .def("total", &StatesAllocation::total)
        .def("__len__", &StatesAllocation::size)
        .def("__repr__", &StatesAllocation::to_string)
        .def("__eq__",
             [](const StatesAllocation& a, const StatesAllocation& b) { return a == b; });

    m.def("entropy", &entropy, py::arg("allocation"));
    m.def("compute_states_allocations", &compute_states_allocations, py::arg("total_states"),
          py::arg("min_part") = 2);

    m.def("identify_pareto",
          [](const LabeledSamples& samples, std::size_t num_dfas, const std::string& encoder,
             bool symmetry, int timeout_ms, unsigned jobs, const std::string& solver) {
              const IdentificationContext context(samples);
              auto frontier = solve_pareto(
                  context, num_dfas, config_from(encoder, symmetry, timeout_ms, jobs, solver));
              std::vector<std::pair<std::vector<std::uint32_t>, Decomposition>> out;
              out.reserve(frontier.size());
              for (ParetoEntry& entry : frontier) {
                  out.emplace_back(entry.allocation.parts(), std::move(entry.decomposition));
              }
              return out;
          },
          py::arg("samples"), py::arg("num_dfas"), py::arg("encoder") = "3dfa",
          py::arg("symmetry") = true, py::arg("timeout_ms") = 0, py::arg("jobs") = 1,
          py::arg("solver") = "");

    m.def("identify_states_optimal",
          [](const LabeledSamples& samples, std::optional<std::uint32_t> max_dfas,
             const std::string& encoder, bool symmetry, int timeout_ms, unsigned jobs,
             const std::string& solver) {
              const IdentificationContext context(samples);
              StatesOptimalResult result = solve_states_optimal(
                  context, config_from(encoder, symmetry, timeout_ms, jobs, solver), max_dfas);
              return std::make_tuple(result.allocation.parts(), std::move(result.decomposition),
                                     result.allocation_entropy);
          },
          py::arg("samples"), py::arg("max_dfas") = std::nullopt, py::arg("encoder") = "3dfa",
          py::arg("symmetry") = true, py::arg("timeout_ms") = 0, py::arg("jobs") = 1,
          py::arg("solver") = "");

    m.def("generate_benchmark",
          [](std::uint32_t alphabet_size, std::uint32_t max_word_length,
             std::uint32_t num_examples_per_label, const std::string& generator,
             std::uint64_t seed) {
              BenchmarkSpec spec;
              spec.alphabet_size = alphabet_size;
              spec.max_word_length = max_word_length;
              spec.num_examples_per_label = num_examples_per_label;
              if (generator == "partial_order_tasks") {
                  spec.generator = BenchmarkSpec::Generator::partial_order_tasks;
              } else if (generator == "random_split") {
                  spec.generator = BenchmarkSpec::Generator::random_split;
              } else {
                  throw Error(ErrorCode::MalformedInput,
                              "unknown generator \"" + generator + "\"");
              }
              spec.seed = seed;
              return generate(spec);
          },
          py::arg("alphabet_size") = 2, py::arg("max_word_length") = 4,
          py::arg("num_examples_per_label") = 5, py::arg("generator") = "partial_order_tasks",
          py::arg("seed") = 0);

    m.def("dfa_to_dot", [](const Dfa& dfa, const Alphabet& alphabet) {
        return to_dot(dfa, alphabet);
    });
}
