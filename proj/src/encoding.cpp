#include "dfadecomp/encoding.hpp"

#include <algorithm>
#include <set>

namespace dfadecomp {

const char* encoder_kind_name(EncoderKind kind) {
    return kind == EncoderKind::three_dfa ? "three_dfa" : "apta_legacy";
}

namespace {

// Index of the pair (i, j), 1 <= i < j <= m, in (i, j)-lexicographic order.
int pair_index_ij(std::uint32_t m, std::uint32_t i, std::uint32_t j) {
    return static_cast<int>((i - 1) * m - i * (i - 1) / 2 + (j - i - 1));
}

// Index of the pair (j, i), 1 <= i < j, in (j, i)-lexicographic order.
int pair_index_ji(std::uint32_t j, std::uint32_t i) {
    return static_cast<int>((j - 1) * (j - 2) / 2 + (i - 1));
}

int num_pairs(std::uint32_t m) { return static_cast<int>(m * (m - 1) / 2); }

} // namespace

VarMap::VarMap(std::size_t acceptor_states, std::vector<State> rejecting_states,
               std::size_t num_letters, std::vector<std::uint32_t> allocation, bool symmetry)
    : acceptor_states_(acceptor_states), rejecting_states_(std::move(rejecting_states)),
      num_letters_(num_letters), allocation_(std::move(allocation)), symmetry_(symmetry) {
    const std::size_t n = allocation_.size();
    x_base_.resize(n);
    e_base_.resize(n);
    z_base_.resize(n);
    int next = 1;
    for (std::size_t k = 0; k < n; ++k) {
        x_base_[k] = next;
        next += static_cast<int>(acceptor_states_ * allocation_[k]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        e_base_[k] = next;
        next += static_cast<int>(num_letters_ * allocation_[k] * allocation_[k]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        z_base_[k] = next;
        next += static_cast<int>(allocation_[k]);
    }
    sel_base_ = next;
    next += static_cast<int>(rejecting_states_.size() * n);
    if (symmetry_) {
        p_base_.resize(n);
        t_base_.resize(n);
        m_base_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            p_base_[k] = next;
            next += num_pairs(allocation_[k]);
        }
        for (std::size_t k = 0; k < n; ++k) {
            t_base_[k] = next;
            next += num_pairs(allocation_[k]);
        }
        for (std::size_t k = 0; k < n; ++k) {
            m_base_[k] = next;
            next += static_cast<int>(num_letters_) * num_pairs(allocation_[k]);
        }
    }
    next_free_ = next;
}

int VarMap::x(std::size_t k, State v, std::uint32_t i) const {
    return x_base_[k] + static_cast<int>(v * allocation_[k] + (i - 1));
}

int VarMap::e(std::size_t k, Symbol l, std::uint32_t i, std::uint32_t j) const {
    const std::uint32_t m = allocation_[k];
    return e_base_[k] + static_cast<int>((l * m + (i - 1)) * m + (j - 1));
}

int VarMap::z(std::size_t k, std::uint32_t i) const {
    return z_base_[k] + static_cast<int>(i - 1);
}

int VarMap::sel(std::size_t rej_index, std::size_t k) const {
    return sel_base_ + static_cast<int>(rej_index * allocation_.size() + k);
}

int VarMap::p(std::size_t k, std::uint32_t j, std::uint32_t i) const {
    return p_base_[k] + pair_index_ji(j, i);
}

int VarMap::t(std::size_t k, std::uint32_t i, std::uint32_t j) const {
    return t_base_[k] + pair_index_ij(allocation_[k], i, j);
}

int VarMap::msym(std::size_t k, Symbol l, std::uint32_t i, std::uint32_t j) const {
    return m_base_[k] + static_cast<int>(l) * num_pairs(allocation_[k]) +
           pair_index_ij(allocation_[k], i, j);
}

long long VarMap::num_x_vars() const {
    long long total = 0;
    for (std::uint32_t m : allocation_) total += static_cast<long long>(acceptor_states_) * m;
    return total;
}

int CnfInstance::group_count(const std::string& name) const {
    for (const auto& [group, count] : group_counts) {
        if (group == name) return count;
    }
    return 0;
}

EncodingStats encoding_stats(const CnfInstance& instance) {
    return EncodingStats{instance.num_vars, instance.clauses.size(), instance.group_counts};
}

void validate_allocation(const std::vector<std::uint32_t>& allocation) {
    if (allocation.empty()) {
        throw Error(ErrorCode::EmptyAllocation, "allocation has no parts");
    }
    std::uint32_t prev = 0;
    for (std::uint32_t m : allocation) {
        if (m < 2) {
            throw Error(ErrorCode::AllocationTooSmall,
                        "part " + std::to_string(m) + " is below the 2-state minimum");
        }
        if (m < prev) {
            throw Error(ErrorCode::AllocationNotAscending, "parts must ascend");
        }
        prev = m;
    }
}

namespace {

class ClauseSink {
public:
    explicit ClauseSink(CnfInstance& instance) : instance_(instance) {}

    void begin_group(std::string name) {
        instance_.group_counts.emplace_back(std::move(name), 0);
    }

    void add(Clause clause) {
        instance_.clauses.push_back(std::move(clause));
        ++instance_.group_counts.back().second;
    }

private:
    CnfInstance& instance_;
};

void emit_determinism(ClauseSink& sink, const VarMap& vars) {
    for (std::size_t k = 0; k < vars.num_dfas(); ++k) {
        const std::uint32_t m = vars.allocation()[k];
        for (Symbol l = 0; l < vars.num_letters(); ++l) {
            for (std::uint32_t i = 1; i <= m; ++i) {
                for (std::uint32_t j = 1; j <= m; ++j) {
                    for (std::uint32_t t = j + 1; t <= m; ++t) {
                        sink.add({-vars.e(k, l, i, j), -vars.e(k, l, i, t)});
                    }
                }
            }
        }
    }
}

void emit_completeness(ClauseSink& sink, const VarMap& vars) {
    for (std::size_t k = 0; k < vars.num_dfas(); ++k) {
        const std::uint32_t m = vars.allocation()[k];
        for (Symbol l = 0; l < vars.num_letters(); ++l) {
            for (std::uint32_t i = 1; i <= m; ++i) {
                Clause clause;
                for (std::uint32_t j = 1; j <= m; ++j) clause.push_back(vars.e(k, l, i, j));
                sink.add(std::move(clause));
            }
        }
    }
}

void emit_rejector_selectors(ClauseSink& sink, const VarMap& vars) {
    for (std::size_t idx = 0; idx < vars.rejecting_states().size(); ++idx) {
        const State v = vars.rejecting_states()[idx];
        Clause any;
        for (std::size_t k = 0; k < vars.num_dfas(); ++k) any.push_back(vars.sel(idx, k));
        sink.add(std::move(any));
        for (std::size_t k = 0; k < vars.num_dfas(); ++k) {
            for (std::uint32_t i = 1; i <= vars.allocation()[k]; ++i) {
                sink.add({-vars.sel(idx, k), -vars.x(k, v, i), -vars.z(k, i)});
            }
        }
    }
}

void emit_symmetry_all(ClauseSink& sink, const VarMap& vars) {
    sink.begin_group("SYM");
    for (std::size_t k = 0; k < vars.num_dfas(); ++k) {
        auto sym = encode_symmetry(vars, k);
        for (auto& clause : sym.clauses) sink.add(std::move(clause));
    }
}

} // namespace

CnfInstance encode_3dfa(const ThreeDfa& acceptor, const std::vector<std::uint32_t>& allocation,
                        bool symmetry) {
    validate_allocation(allocation);
    CnfInstance instance;
    instance.vars = VarMap(acceptor.num_states(), acceptor.rejecting_states(),
                           acceptor.num_letters(), allocation, symmetry);
    const VarMap& vars = instance.vars;
    const std::size_t n = vars.num_dfas();
    ClauseSink sink(instance);

    sink.begin_group("D1");
    emit_determinism(sink, vars);

    sink.begin_group("D2");
    emit_completeness(sink, vars);

    sink.begin_group("R1");
    for (State v : acceptor.accepting_states()) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::uint32_t i = 1; i <= vars.allocation()[k]; ++i) {
                sink.add({-vars.x(k, v, i), vars.z(k, i)});
            }
        }
    }

    sink.begin_group("R2");
    emit_rejector_selectors(sink, vars);

    sink.begin_group("T1");
    for (std::size_t k = 0; k < n; ++k) sink.add({vars.x(k, acceptor.initial, 1)});

    sink.begin_group("T2");
    for (State v = 0; v < acceptor.num_states(); ++v) {
        for (std::size_t k = 0; k < n; ++k) {
            Clause clause;
            for (std::uint32_t i = 1; i <= vars.allocation()[k]; ++i) {
                clause.push_back(vars.x(k, v, i));
            }
            sink.add(std::move(clause));
        }
    }

    sink.begin_group("T3");
    for (State v = 0; v < acceptor.num_states(); ++v) {
        const auto present = acceptor.present_letters(v);
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint32_t m = vars.allocation()[k];
            for (std::uint32_t i = 1; i <= m; ++i) {
                for (std::uint32_t j = 1; j <= m; ++j) {
                    for (Symbol a : present) {
                        const State to = *acceptor.step(v, a);
                        sink.add({-vars.x(k, v, i), -vars.e(k, a, i, j), vars.x(k, to, j)});
                    }
                }
            }
        }
    }

    // Color uniqueness is sound only where the acceptor state stands for a
    // single behavior; merged states may legitimately need several colors.
    sink.begin_group("O1'");
    std::set<State> merged(acceptor.merged.begin(), acceptor.merged.end());
    for (State v = 0; v < acceptor.num_states(); ++v) {
        if (merged.count(v) != 0) continue;
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint32_t m = vars.allocation()[k];
            for (std::uint32_t i = 1; i <= m; ++i) {
                for (std::uint32_t j = i + 1; j <= m; ++j) {
                    sink.add({-vars.x(k, v, i), -vars.x(k, v, j)});
                }
            }
        }
    }

    if (symmetry) emit_symmetry_all(sink, vars);

    instance.num_vars = vars.num_vars();
    instance.meta = {encoder_kind_name(EncoderKind::three_dfa), allocation,
                     acceptor.num_states(), symmetry};
    return instance;
}

CnfInstance encode_apta_legacy(const Apta& acceptor, const std::vector<std::uint32_t>& allocation,
                               bool symmetry) {
    validate_allocation(allocation);
    CnfInstance instance;
    instance.vars = VarMap(acceptor.num_states(), acceptor.rejecting_states(),
                           acceptor.num_letters(), allocation, symmetry);
    const VarMap& vars = instance.vars;
    const std::size_t n = vars.num_dfas();
    const auto accepting = acceptor.accepting_states();
    const auto rejecting = acceptor.rejecting_states();
    ClauseSink sink(instance);

    // 1: a positive node's color is accepting in every DFA.
    sink.begin_group("1");
    for (State v : accepting) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::uint32_t i = 1; i <= vars.allocation()[k]; ++i) {
                sink.add({-vars.x(k, v, i), vars.z(k, i)});
            }
        }
    }

    // 2: some selected DFA gives the negative node a non-accepting color.
    sink.begin_group("2");
    emit_rejector_selectors(sink, vars);

    // 3: every node takes at least one color per DFA.
    sink.begin_group("3");
    for (State v = 0; v < acceptor.num_states(); ++v) {
        for (std::size_t k = 0; k < n; ++k) {
            Clause clause;
            for (std::uint32_t i = 1; i <= vars.allocation()[k]; ++i) {
                clause.push_back(vars.x(k, v, i));
            }
            sink.add(std::move(clause));
        }
    }

    // 4: coloring a node and its parent fixes the connecting transition.
    sink.begin_group("4");
    for (State v = 0; v < acceptor.num_states(); ++v) {
        if (acceptor.parent[v] < 0) continue;
        const auto parent = static_cast<State>(acceptor.parent[v]);
        const auto letter = static_cast<Symbol>(acceptor.in_letter[v]);
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint32_t m = vars.allocation()[k];
            for (std::uint32_t i = 1; i <= m; ++i) {
                for (std::uint32_t j = 1; j <= m; ++j) {
                    sink.add({-vars.x(k, parent, i), -vars.x(k, v, j), vars.e(k, letter, i, j)});
                }
            }
        }
    }

    // 5: a transition targets at most one state.
    sink.begin_group("5");
    for (Symbol l = 0; l < vars.num_letters(); ++l) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint32_t m = vars.allocation()[k];
            for (std::uint32_t i = 1; i <= m; ++i) {
                for (std::uint32_t j = 1; j <= m; ++j) {
                    for (std::uint32_t t = j + 1; t <= m; ++t) {
                        sink.add({-vars.e(k, l, i, j), -vars.e(k, l, i, t)});
                    }
                }
            }
        }
    }

    // 6: every node takes at most one color per DFA.
    sink.begin_group("6");
    for (State v = 0; v < acceptor.num_states(); ++v) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint32_t m = vars.allocation()[k];
            for (std::uint32_t i = 1; i <= m; ++i) {
                for (std::uint32_t j = i + 1; j <= m; ++j) {
                    sink.add({-vars.x(k, v, i), -vars.x(k, v, j)});
                }
            }
        }
    }

    // 7: a transition targets at least one state.
    sink.begin_group("7");
    for (Symbol l = 0; l < vars.num_letters(); ++l) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint32_t m = vars.allocation()[k];
            for (std::uint32_t i = 1; i <= m; ++i) {
                Clause clause;
                for (std::uint32_t j = 1; j <= m; ++j) clause.push_back(vars.e(k, l, i, j));
                sink.add(std::move(clause));
            }
        }
    }

    // 8: the parent's color and the transition force the node's color.
    sink.begin_group("8");
    for (State v = 0; v < acceptor.num_states(); ++v) {
        if (acceptor.parent[v] < 0) continue;
        const auto parent = static_cast<State>(acceptor.parent[v]);
        const auto letter = static_cast<Symbol>(acceptor.in_letter[v]);
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint32_t m = vars.allocation()[k];
            for (std::uint32_t i = 1; i <= m; ++i) {
                for (std::uint32_t j = 1; j <= m; ++j) {
                    sink.add({-vars.x(k, parent, i), -vars.e(k, letter, i, j), vars.x(k, v, j)});
                }
            }
        }
    }

    // 9: a color rejected somewhere cannot be shared by positive and negative nodes.
    sink.begin_group("9");
    for (State neg : rejecting) {
        for (State pos : accepting) {
            for (std::size_t k = 0; k < n; ++k) {
                for (std::uint32_t i = 1; i <= vars.allocation()[k]; ++i) {
                    sink.add({-vars.x(k, neg, i), vars.z(k, i), -vars.x(k, pos, i)});
                }
            }
        }
    }

    // The run correspondence starts at the root: color 1 is the initial state.
    sink.begin_group("T1");
    for (std::size_t k = 0; k < n; ++k) sink.add({vars.x(k, acceptor.initial, 1)});

    if (symmetry) emit_symmetry_all(sink, vars);

    instance.num_vars = vars.num_vars();
    instance.meta = {encoder_kind_name(EncoderKind::apta_legacy), allocation,
                     acceptor.num_states(), symmetry};
    return instance;
}

SymmetryClauses encode_symmetry(const VarMap& vars, std::size_t k) {
    SymmetryClauses out;
    const std::uint32_t m = vars.allocation()[k];
    const auto letters = static_cast<Symbol>(vars.num_letters());
    auto add = [&out](int rule, Clause clause) {
        out.clauses.push_back(std::move(clause));
        ++out.per_constraint[static_cast<std::size_t>(rule - 10)];
    };

    // 10: every state beyond the first is somebody's child.
    for (std::uint32_t j = 2; j <= m; ++j) {
        Clause clause;
        for (std::uint32_t i = 1; i < j; ++i) clause.push_back(vars.p(k, j, i));
        add(10, std::move(clause));
    }

    // 11: the parent of j is the largest i < j with a transition into j.
    for (std::uint32_t j = 2; j <= m; ++j) {
        for (std::uint32_t i = 1; i < j; ++i) {
            add(11, {-vars.p(k, j, i), vars.t(k, i, j)});
            for (std::uint32_t r = i + 1; r < j; ++r) {
                add(11, {-vars.p(k, j, i), -vars.t(k, r, j)});
            }
            Clause back{-vars.t(k, i, j)};
            for (std::uint32_t r = i + 1; r < j; ++r) back.push_back(vars.t(k, r, j));
            back.push_back(vars.p(k, j, i));
            add(11, std::move(back));
        }
    }

    // 12: t aggregates the per-letter transition variables.
    for (std::uint32_t i = 1; i <= m; ++i) {
        for (std::uint32_t j = i + 1; j <= m; ++j) {
            Clause any{-vars.t(k, i, j)};
            for (Symbol l = 0; l < letters; ++l) any.push_back(vars.e(k, l, i, j));
            add(12, std::move(any));
            for (Symbol l = 0; l < letters; ++l) {
                add(12, {-vars.e(k, l, i, j), vars.t(k, i, j)});
            }
        }
    }

    // 13: when j hangs off i, states between them are already fully explored,
    // so none of them may reach past j.
    for (std::uint32_t i = 1; i <= m; ++i) {
        for (std::uint32_t p = i + 1; p <= m; ++p) {
            for (std::uint32_t j = p + 1; j <= m; ++j) {
                for (std::uint32_t q = j + 1; q <= m; ++q) {
                    add(13, {-vars.p(k, j, i), -vars.t(k, p, q)});
                }
            }
        }
    }

    // 14: msym marks the smallest letter carrying a transition i -> j.
    for (std::uint32_t i = 1; i <= m; ++i) {
        for (std::uint32_t j = i + 1; j <= m; ++j) {
            for (Symbol l = 0; l < letters; ++l) {
                add(14, {-vars.msym(k, l, i, j), vars.e(k, l, i, j)});
                for (Symbol s = 0; s < l; ++s) {
                    add(14, {-vars.msym(k, l, i, j), -vars.e(k, s, i, j)});
                }
                Clause back{-vars.e(k, l, i, j)};
                for (Symbol s = 0; s < l; ++s) back.push_back(vars.e(k, s, i, j));
                back.push_back(vars.msym(k, l, i, j));
                add(14, std::move(back));
            }
        }
    }

    // 15: siblings are discovered on ascending smallest letters: for children
    // j < q of i, the smallest letter into q cannot be <= the one into j.
    for (std::uint32_t i = 1; i <= m; ++i) {
        for (std::uint32_t j = i + 1; j <= m; ++j) {
            for (std::uint32_t q = j + 1; q <= m; ++q) {
                for (Symbol r = 0; r < letters; ++r) {
                    for (Symbol s = 0; s <= r; ++s) {
                        add(15, {-vars.p(k, j, i), -vars.p(k, q, i), -vars.msym(k, r, i, j),
                                 -vars.msym(k, s, i, q)});
                    }
                }
            }
        }
    }

    return out;
}

Decomposition decode(const CnfInstance& instance, const std::vector<bool>& assignment,
                     const Alphabet& alphabet) {
    const VarMap& vars = instance.vars;
    if (vars.num_vars() == 0 || assignment.size() < static_cast<std::size_t>(vars.num_vars()) + 1) {
        throw Error(ErrorCode::MalformedModel, "assignment does not cover the instance");
    }
    Decomposition decomposition;
    decomposition.alphabet = alphabet;
    for (std::size_t k = 0; k < vars.num_dfas(); ++k) {
        const std::uint32_t m = vars.allocation()[k];
        Dfa dfa(m, static_cast<std::uint32_t>(vars.num_letters()));
        for (std::uint32_t i = 1; i <= m; ++i) {
            for (Symbol l = 0; l < vars.num_letters(); ++l) {
                std::uint32_t target = 0;
                for (std::uint32_t j = 1; j <= m; ++j) {
                    if (!assignment[static_cast<std::size_t>(vars.e(k, l, i, j))]) continue;
                    if (target != 0) {
                        throw Error(ErrorCode::MalformedModel, "two targets for one transition");
                    }
                    target = j;
                }
                if (target == 0) {
                    throw Error(ErrorCode::MalformedModel, "transition without target");
                }
                dfa.set_transition(i, l, target);
            }
            dfa.set_accepting(i, assignment[static_cast<std::size_t>(vars.z(k, i))]);
        }
        decomposition.dfas.push_back(std::move(dfa));
    }
    decomposition.validate();
    return decomposition;
}

} // namespace dfadecomp
