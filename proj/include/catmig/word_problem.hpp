// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Bounded decision procedure for the path equivalence relation generated by a schema's equations.
 *
 *  Equations are used as bidirectional rewrite rules at any position of a path.  A bidirectional breadth-first
 *  search looks for a rewrite chain of at most `budget` steps; failing to find one is reported as
 *  `NotProvedWithinBudget`, never as a disproof.
 */

#include <catmig/schema.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

namespace catmig {

enum class Equivalence { Equivalent, NotProvedWithinBudget };

struct RewriteOptions
{
    std::size_t budget = 64;           ///< maximum number of rewrite steps in a proof
    std::size_t max_path_length = 32;  ///< intermediate paths longer than this are not explored
    std::size_t max_states = 200000;   ///< visited-path cap across both search directions
};

struct EquivalenceResult
{
    Equivalence outcome = Equivalence::NotProvedWithinBudget;
    std::size_t steps = 0;  ///< length of the rewrite chain found (meaningful when equivalent)

    bool equivalent() const { return outcome == Equivalence::Equivalent; }
};

namespace detail {

using Word = std::vector<std::uint32_t>;

struct WordHash
{
    std::size_t operator()(const Word &w) const noexcept
    {
        std::size_t h = w.size();
        for (auto x : w)
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

struct RewriteRule
{
    Word from;
    Word to;
    VertexId at;  // vertex where `from` starts; needed when `from` is empty
};

inline Word to_word(const Path &p)
{
    Word w;
    w.reserve(p.arrows.size());
    for (ArrowId a : p.arrows) w.push_back(static_cast<std::uint32_t>(index(a)));
    return w;
}

inline std::vector<RewriteRule> rules_of(const Schema &s)
{
    std::vector<RewriteRule> rules;
    for (const auto &eq : s.equations()) {
        Word l = to_word(eq.lhs), r = to_word(eq.rhs);
        if (l == r) continue;
        rules.push_back({l, r, eq.lhs.source});
        rules.push_back({r, l, eq.lhs.source});
    }
    return rules;
}

/// Calls `emit` with every path reachable from `w` (starting at `start`) by one rule application.
template<typename Emit>
void for_each_rewrite(const Graph &g, VertexId start, const Word &w, const std::vector<RewriteRule> &rules,
                      std::size_t max_len, Emit &&emit)
{
    std::vector<VertexId> at(w.size() + 1);
    at[0] = start;
    for (std::size_t i = 0; i < w.size(); ++i)
        at[i + 1] = g.target(arrow_id(w[i]));

    for (const auto &rule : rules) {
        if (w.size() - std::min(w.size(), rule.from.size()) + rule.to.size() > max_len)
            continue;
        if (rule.from.size() > w.size()) continue;
        for (std::size_t i = 0; i + rule.from.size() <= w.size(); ++i) {
            if (at[i] != rule.at) continue;
            if (not std::equal(rule.from.begin(), rule.from.end(), w.begin() + i)) continue;
            Word next;
            next.reserve(w.size() - rule.from.size() + rule.to.size());
            next.insert(next.end(), w.begin(), w.begin() + i);
            next.insert(next.end(), rule.to.begin(), rule.to.end());
            next.insert(next.end(), w.begin() + i + rule.from.size(), w.end());
            emit(std::move(next));
        }
    }
}

}

/// Decides (within budget) whether `p ≃ q` in the relation generated by `schema`'s equations.
inline EquivalenceResult paths_equivalent(const Schema &schema, const Path &p, const Path &q,
                                          const RewriteOptions &opts = {})
{
    const Graph &g = schema.graph();
    check_path(g, p);
    check_path(g, q);
    if (p.source != q.source or target(g, p) != target(g, q))
        return {};
    if (p == q)
        return {Equivalence::Equivalent, 0};

    using namespace detail;
    auto rules = rules_of(schema);
    if (rules.empty()) return {};

    using Seen = std::unordered_map<Word, std::size_t, WordHash>;
    Seen seen[2];
    std::vector<Word> frontier[2];
    std::size_t depth[2] = {0, 0};
    frontier[0].push_back(to_word(p));
    frontier[1].push_back(to_word(q));
    seen[0].emplace(frontier[0].front(), 0);
    seen[1].emplace(frontier[1].front(), 0);

    while (depth[0] + depth[1] < opts.budget and not frontier[0].empty() and not frontier[1].empty()) {
        int side = frontier[0].size() <= frontier[1].size() ? 0 : 1;
        int other = 1 - side;
        std::vector<Word> next;
        std::size_t found = 0;
        bool hit = false;
        for (const Word &w : frontier[side]) {
            for_each_rewrite(g, p.source, w, rules, opts.max_path_length, [&](Word n) {
                if (hit or seen[side].contains(n)) return;
                if (auto it = seen[other].find(n); it != seen[other].end()) {
                    hit = true;
                    found = depth[side] + 1 + it->second;
                    return;
                }
                seen[side].emplace(n, depth[side] + 1);
                next.push_back(std::move(n));
            });
            if (hit) return {Equivalence::Equivalent, found};
            if (seen[0].size() + seen[1].size() > opts.max_states) return {};
        }
        frontier[side] = std::move(next);
        ++depth[side];
    }
    return {};
}

/// Memoizing front end for repeated queries against one schema.
class PathEquivalenceOracle
{
    const Schema *schema_;
    RewriteOptions opts_;
    std::map<std::pair<Path, Path>, EquivalenceResult> cache_;

    public:
    explicit PathEquivalenceOracle(const Schema &schema, RewriteOptions opts = {})
        : schema_(&schema)
        , opts_(opts)
    { }

    const Schema & schema() const { return *schema_; }
    const RewriteOptions & options() const { return opts_; }

    EquivalenceResult check(const Path &p, const Path &q)
    {
        auto key = p < q ? std::pair{p, q} : std::pair{q, p};
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        auto r = paths_equivalent(*schema_, key.first, key.second, opts_);
        cache_.emplace(std::move(key), r);
        return r;
    }

    bool equivalent(const Path &p, const Path &q) { return check(p, q).equivalent(); }
};

}
