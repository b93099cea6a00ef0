#include "dfadecomp/io.hpp"

#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dfadecomp/errors.hpp"

namespace dfadecomp {

namespace {

std::string dot_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

const char* shape_of(Verdict3 kind) {
    switch (kind) {
    case Verdict3::Accept: return "doublecircle";
    case Verdict3::Reject: return "box";
    case Verdict3::DontCare: return "circle";
    }
    return "circle";
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += parts[i];
    }
    return out;
}

template <typename Acceptor, typename TooltipFn>
std::string partial_dot(const Acceptor& acceptor, const char* name, TooltipFn tooltip) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n  __start [shape=point, label=\"\"];\n";
    for (State v = 0; v < acceptor.num_states(); ++v) {
        out << "  " << v << " [shape=" << shape_of(acceptor.kind[v]);
        const std::string tip = tooltip(v);
        if (!tip.empty()) out << ", tooltip=\"" << dot_escape(tip) << "\"";
        out << "];\n";
    }
    out << "  __start -> " << acceptor.initial << ";\n";
    for (State v = 0; v < acceptor.num_states(); ++v) {
        std::map<State, std::vector<std::string>> by_target;
        for (Symbol l = 0; l < acceptor.num_letters(); ++l) {
            if (const auto to = acceptor.step(v, l)) {
                by_target[*to].push_back(acceptor.alphabet.name(l));
            }
        }
        for (const auto& [to, letters] : by_target) {
            out << "  " << v << " -> " << to << " [label=\"" << dot_escape(join(letters))
                << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

} // namespace

std::string to_dot(const Apta& apta) {
    return partial_dot(apta, "apta", [](State) { return std::string(); });
}

std::string to_dot(const ThreeDfa& acceptor) {
    return partial_dot(acceptor, "three_dfa", [&acceptor](State v) {
        if (acceptor.provenance[v].size() < 2) return std::string();
        std::string tip = "preimages:";
        for (State u : acceptor.provenance[v]) tip += " " + std::to_string(u);
        return tip;
    });
}

std::string to_dot(const Dfa& dfa, const Alphabet& alphabet) {
    std::ostringstream out;
    out << "digraph dfa {\n  rankdir=LR;\n  __start [shape=point, label=\"\"];\n";
    for (std::uint32_t q = 1; q <= dfa.num_states(); ++q) {
        out << "  " << q << " [shape=" << (dfa.is_accepting(q) ? "doublecircle" : "box")
            << "];\n";
    }
    out << "  __start -> " << dfa.initial() << ";\n";
    for (std::uint32_t q = 1; q <= dfa.num_states(); ++q) {
        std::map<std::uint32_t, std::vector<std::string>> by_target;
        for (Symbol l = 0; l < dfa.num_letters(); ++l) {
            by_target[dfa.transition(q, l)].push_back(alphabet.name(l));
        }
        for (const auto& [to, letters] : by_target) {
            out << "  " << q << " -> " << to << " [label=\"" << dot_escape(join(letters))
                << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

namespace {

nlohmann::json alphabet_to_json(const Alphabet& alphabet) {
    nlohmann::json names = nlohmann::json::array();
    for (Symbol l = 0; l < alphabet.size(); ++l) names.push_back(alphabet.name(l));
    return names;
}

nlohmann::json delta_to_json(const Dfa& dfa, const Alphabet& alphabet) {
    nlohmann::json delta = nlohmann::json::array();
    for (std::uint32_t q = 1; q <= dfa.num_states(); ++q) {
        for (Symbol l = 0; l < dfa.num_letters(); ++l) {
            delta.push_back({{"from", q}, {"letter", alphabet.name(l)}, {"to",
                             dfa.transition(q, l)}});
        }
    }
    return delta;
}

} // namespace

std::string decomposition_to_json(const Decomposition& decomposition) {
    nlohmann::json root;
    root["alphabet"] = alphabet_to_json(decomposition.alphabet);
    nlohmann::json dfas = nlohmann::json::array();
    for (const Dfa& dfa : decomposition.dfas) {
        nlohmann::json entry;
        entry["num_states"] = dfa.num_states();
        entry["initial"] = dfa.initial();
        entry["accepting"] = dfa.accepting_states();
        entry["delta"] = delta_to_json(dfa, decomposition.alphabet);
        dfas.push_back(std::move(entry));
    }
    root["dfas"] = std::move(dfas);
    return root.dump(2) + "\n";
}

Decomposition decomposition_from_json(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("invalid JSON: ") + e.what());
    }
    try {
        Decomposition decomposition;
        decomposition.alphabet = Alphabet(root.at("alphabet").get<std::vector<std::string>>());
        const auto letters = static_cast<std::uint32_t>(decomposition.alphabet.size());
        for (const nlohmann::json& entry : root.at("dfas")) {
            const auto num_states = entry.at("num_states").get<std::uint32_t>();
            Dfa dfa(num_states, letters);
            const auto initial = entry.at("initial").get<std::uint32_t>();
            if (initial < 1 || initial > num_states) {
                throw Error(ErrorCode::MalformedInput, "initial state out of range");
            }
            dfa.set_initial(initial);
            for (const nlohmann::json& acc : entry.at("accepting")) {
                const auto q = acc.get<std::uint32_t>();
                if (q < 1 || q > num_states) {
                    throw Error(ErrorCode::MalformedInput, "accepting state out of range");
                }
                dfa.set_accepting(q, true);
            }
            std::set<std::pair<std::uint32_t, Symbol>> seen;
            for (const nlohmann::json& edge : entry.at("delta")) {
                const auto from = edge.at("from").get<std::uint32_t>();
                const auto to = edge.at("to").get<std::uint32_t>();
                const auto letter = edge.at("letter").get<std::string>();
                const auto l = decomposition.alphabet.index_of(letter);
                if (!l) {
                    throw Error(ErrorCode::UnknownSymbol, "unknown letter \"" + letter + "\"");
                }
                if (from < 1 || from > num_states || to < 1 || to > num_states) {
                    throw Error(ErrorCode::MalformedInput, "transition endpoint out of range");
                }
                if (!seen.emplace(from, *l).second) {
                    throw Error(ErrorCode::MalformedInput,
                                "duplicate transition for one state and letter");
                }
                dfa.set_transition(from, *l, to);
            }
            decomposition.dfas.push_back(std::move(dfa));
        }
        decomposition.validate();
        return decomposition;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("bad decomposition JSON: ") + e.what());
    }
}

std::string three_dfa_to_json(const ThreeDfa& acceptor) {
    nlohmann::json root;
    root["alphabet"] = alphabet_to_json(acceptor.alphabet);
    root["num_states"] = acceptor.num_states();
    root["initial"] = acceptor.initial;
    root["accepting"] = acceptor.accepting_states();
    root["rejecting"] = acceptor.rejecting_states();
    nlohmann::json delta = nlohmann::json::array();
    for (State v = 0; v < acceptor.num_states(); ++v) {
        for (Symbol l = 0; l < acceptor.num_letters(); ++l) {
            if (const auto to = acceptor.step(v, l)) {
                delta.push_back({{"from", v}, {"letter", acceptor.alphabet.name(l)},
                                 {"to", *to}});
            }
        }
    }
    root["delta"] = std::move(delta);
    root["merged"] = acceptor.merged;
    root["provenance"] = acceptor.provenance;
    return root.dump(2) + "\n";
}

} // namespace dfadecomp
