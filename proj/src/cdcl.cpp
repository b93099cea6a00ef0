#include "dfadecomp/cdcl.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>

namespace dfadecomp::sat {

CdclSolver::CdclSolver(int num_vars)
    : num_vars_(num_vars), watches_(2 * static_cast<std::size_t>(num_vars)),
      assign_(num_vars, kUndef), level_(num_vars, 0), reason_(num_vars, -1),
      activity_(num_vars, 0.0), phase_(num_vars, 1), seen_(num_vars, 0) {}

int CdclSolver::lit_of(int dimacs_lit) {
    const int v = std::abs(dimacs_lit);
    return 2 * (v - 1) + (dimacs_lit < 0 ? 1 : 0);
}

std::uint8_t CdclSolver::lit_value(int lit) const {
    const std::uint8_t a = assign_[static_cast<std::size_t>(var_of(lit))];
    if (a == kUndef) return kUndef;
    return static_cast<std::uint8_t>(a ^ (lit & 1));
}

void CdclSolver::add_clause(const std::vector<int>& literals) {
    if (contradiction_) return;
    std::vector<int> lits;
    lits.reserve(literals.size());
    for (int dl : literals) lits.push_back(lit_of(dl));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i) {
        if (lits[i + 1] == (lits[i] | 1) && var_of(lits[i]) == var_of(lits[i + 1])) return;
    }
    if (lits.empty()) {
        contradiction_ = true;
        return;
    }
    if (lits.size() == 1) {
        const int l = lits[0];
        if (lit_value(l) == kTrue) return;
        if (lit_value(l) == kFalse) {
            contradiction_ = true;
            return;
        }
        clauses_.push_back(std::move(lits));
        enqueue(l, static_cast<int>(clauses_.size()) - 1);
        return;
    }
    clauses_.push_back(std::move(lits));
    const int ci = static_cast<int>(clauses_.size()) - 1;
    watches_[static_cast<std::size_t>(clauses_[ci][0])].push_back(ci);
    watches_[static_cast<std::size_t>(clauses_[ci][1])].push_back(ci);
}

void CdclSolver::enqueue(int lit, int reason) {
    const int v = var_of(lit);
    assign_[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(lit & 1);
    level_[static_cast<std::size_t>(v)] = static_cast<int>(trail_lim_.size());
    reason_[static_cast<std::size_t>(v)] = reason;
    phase_[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(lit & 1);
    trail_.push_back(lit);
}

int CdclSolver::propagate() {
    while (qhead_ < trail_.size()) {
        const int p = trail_[qhead_++];
        const int false_lit = neg(p);
        std::vector<int>& ws = watches_[static_cast<std::size_t>(false_lit)];
        std::size_t i = 0;
        std::size_t j = 0;
        int conflict = -1;
        while (i < ws.size()) {
            const int ci = ws[i++];
            std::vector<int>& c = clauses_[static_cast<std::size_t>(ci)];
            if (c[0] == false_lit) std::swap(c[0], c[1]);
            if (lit_value(c[0]) == kTrue) {
                ws[j++] = ci;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (lit_value(c[k]) != kFalse) {
                    std::swap(c[1], c[k]);
                    watches_[static_cast<std::size_t>(c[1])].push_back(ci);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = ci;
            if (lit_value(c[0]) == kFalse) {
                while (i < ws.size()) ws[j++] = ws[i++];
                conflict = ci;
                break;
            }
            enqueue(c[0], ci);
        }
        ws.resize(j);
        if (conflict >= 0) {
            qhead_ = trail_.size();
            return conflict;
        }
    }
    return -1;
}

void CdclSolver::analyze(int conflict, std::vector<int>& learned, int& backjump_level) {
    learned.assign(1, 0);
    const int current = static_cast<int>(trail_lim_.size());
    int counter = 0;
    int p = -1;
    int clause = conflict;
    std::size_t index = trail_.size();
    std::vector<int> touched;
    do {
        const std::vector<int>& c = clauses_[static_cast<std::size_t>(clause)];
        for (std::size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
            const int v = var_of(c[k]);
            if (seen_[static_cast<std::size_t>(v)] != 0 ||
                level_[static_cast<std::size_t>(v)] == 0) {
                continue;
            }
            seen_[static_cast<std::size_t>(v)] = 1;
            touched.push_back(v);
            bump(v);
            if (level_[static_cast<std::size_t>(v)] >= current) {
                ++counter;
            } else {
                learned.push_back(c[k]);
            }
        }
        while (seen_[static_cast<std::size_t>(var_of(trail_[index - 1]))] == 0) --index;
        --index;
        p = trail_[index];
        clause = reason_[static_cast<std::size_t>(var_of(p))];
        seen_[static_cast<std::size_t>(var_of(p))] = 0;
        --counter;
    } while (counter > 0);
    learned[0] = neg(p);
    for (int v : touched) seen_[static_cast<std::size_t>(v)] = 0;

    backjump_level = 0;
    if (learned.size() > 1) {
        std::size_t best = 1;
        for (std::size_t k = 2; k < learned.size(); ++k) {
            if (level_[static_cast<std::size_t>(var_of(learned[k]))] >
                level_[static_cast<std::size_t>(var_of(learned[best]))]) {
                best = k;
            }
        }
        std::swap(learned[1], learned[best]);
        backjump_level = level_[static_cast<std::size_t>(var_of(learned[1]))];
    }
}

void CdclSolver::backtrack(int level) {
    if (static_cast<std::size_t>(level) >= trail_lim_.size()) return;
    while (trail_.size() > static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(level)])) {
        const int v = var_of(trail_.back());
        assign_[static_cast<std::size_t>(v)] = kUndef;
        reason_[static_cast<std::size_t>(v)] = -1;
        order_.push({activity_[static_cast<std::size_t>(v)], v});
        trail_.pop_back();
    }
    trail_lim_.resize(static_cast<std::size_t>(level));
    qhead_ = trail_.size();
}

void CdclSolver::bump(int var) {
    activity_[static_cast<std::size_t>(var)] += var_inc_;
    if (activity_[static_cast<std::size_t>(var)] > 1e100) {
        for (double& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
}

void CdclSolver::decay() { var_inc_ /= 0.95; }

int CdclSolver::pick_branch_var() {
    while (!order_.empty()) {
        const auto [act, v] = order_.top();
        order_.pop();
        if (assign_[static_cast<std::size_t>(v)] != kUndef) continue;
        if (act != activity_[static_cast<std::size_t>(v)]) {
            order_.push({activity_[static_cast<std::size_t>(v)], v});
            continue;
        }
        return v;
    }
    for (int v = 0; v < num_vars_; ++v) {
        if (assign_[static_cast<std::size_t>(v)] == kUndef) return v;
    }
    return -1;
}

std::uint64_t CdclSolver::luby(std::uint64_t i) {
    std::uint64_t size = 1;
    std::uint64_t seq = 0;
    while (size < i + 1) {
        size = 2 * size + 1;
        ++seq;
    }
    while (size - 1 != i) {
        size = (size - 1) / 2;
        --seq;
        i %= size;
    }
    return 1ULL << seq;
}

CdclSolver::Outcome CdclSolver::solve(std::optional<double> timeout_ms) {
    if (contradiction_) return Outcome::Unsat;
    qhead_ = 0;
    for (int v = 0; v < num_vars_; ++v) {
        if (assign_[static_cast<std::size_t>(v)] == kUndef) {
            order_.push({activity_[static_cast<std::size_t>(v)], v});
        }
    }
    const auto start = std::chrono::steady_clock::now();
    auto timed_out = [&] {
        if (!timeout_ms) return false;
        const auto elapsed = std::chrono::steady_clock::now() - start;
        return std::chrono::duration<double, std::milli>(elapsed).count() > *timeout_ms;
    };

    std::uint64_t run = 1;
    std::uint64_t budget = 32 * luby(run);
    std::uint64_t run_conflicts = 0;
    std::uint64_t events = 0;
    std::vector<int> learned;
    for (;;) {
        const int conflict = propagate();
        if (conflict >= 0) {
            ++conflicts_;
            ++run_conflicts;
            if (trail_lim_.empty()) return Outcome::Unsat;
            int backjump = 0;
            analyze(conflict, learned, backjump);
            backtrack(backjump);
            clauses_.push_back(learned);
            const int ci = static_cast<int>(clauses_.size()) - 1;
            if (learned.size() >= 2) {
                watches_[static_cast<std::size_t>(learned[0])].push_back(ci);
                watches_[static_cast<std::size_t>(learned[1])].push_back(ci);
            }
            enqueue(learned[0], ci);
            decay();
            if ((++events & 0xFF) == 0 && timed_out()) return Outcome::Interrupted;
        } else {
            if (run_conflicts >= budget) {
                backtrack(0);
                run_conflicts = 0;
                budget = 32 * luby(++run);
                continue;
            }
            if ((++events & 0xFF) == 0 && timed_out()) return Outcome::Interrupted;
            const int v = pick_branch_var();
            if (v < 0) return Outcome::Sat;
            ++decisions_;
            trail_lim_.push_back(static_cast<int>(trail_.size()));
            enqueue(2 * v + (phase_[static_cast<std::size_t>(v)] & 1), -1);
        }
    }
}

bool CdclSolver::value(int var) const {
    return assign_[static_cast<std::size_t>(var - 1)] == kTrue;
}

} // namespace dfadecomp::sat
