// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Left pushforward by a chase: seed, glue along translated arrows, then alternate equation enforcement
 *         and totalization (inventing Skolem elements) until nothing changes.
 *
 *  Elements live in a union-find; each class keeps at most one successor per outgoing arrow and merging two
 *  classes merges their successors, which is what keeps columns functional (congruence closure).
 *  Naming happens only after the fixpoint, so the output does not depend on the order merges happened in.
 */

#include <catmig/pi.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace catmig {

/// The canonical term of a Σ row: the base row `(c, r)` followed by a path in D.
struct SigmaTerm
{
    VertexId c;
    RowIndex r;
    Path path;
};

struct SigmaResult
{
    Instance instance;
    std::vector<std::vector<SigmaTerm>> terms;  // per D-vertex, per row
    std::vector<std::vector<RowIndex>> unit;    // per C-vertex, per row: its row in Σ at F(c)
};

namespace detail {

class Chase
{
    static constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

    const Graph &dg_;
    std::vector<VertexId> at_;
    std::vector<std::size_t> parent_;
    std::vector<std::vector<std::size_t>> succ_;  // indexed by position in dg_.outgoing(at)
    std::vector<std::pair<std::size_t, std::size_t>> pending_;
    std::size_t merges_ = 0;

    public:
    explicit Chase(const Graph &dg) : dg_(dg) { }

    std::size_t size() const { return at_.size(); }
    std::size_t merges() const { return merges_; }
    VertexId at(std::size_t e) const { return at_[e]; }

    std::size_t make(VertexId v)
    {
        at_.push_back(v);
        parent_.push_back(parent_.size());
        succ_.emplace_back(dg_.outgoing(v).size(), none);
        return at_.size() - 1;
    }

    std::size_t find(std::size_t e)
    {
        while (parent_[e] != e) e = parent_[e] = parent_[parent_[e]];
        return e;
    }

    std::size_t slot(VertexId v, ArrowId g) const
    {
        auto out = dg_.outgoing(v);
        return static_cast<std::size_t>(std::find(out.begin(), out.end(), g) - out.begin());
    }

    std::size_t successor(std::size_t e, std::size_t k)
    {
        std::size_t r = find(e);
        std::size_t s = succ_[r][k];
        return s == none ? none : find(s);
    }

    std::size_t step(std::size_t e, ArrowId g)
    {
        std::size_t r = find(e);
        std::size_t k = slot(at_[r], g);
        if (succ_[r][k] == none) {
            std::size_t n = make(dg_.target(g));
            succ_[r][k] = n;
        }
        return find(succ_[r][k]);
    }

    std::size_t walk(std::size_t e, const Path &p)
    {
        for (ArrowId g : p.arrows) e = step(e, g);
        return find(e);
    }

    void set_successor(std::size_t e, ArrowId g, std::size_t value)
    {
        std::size_t r = find(e);
        std::size_t k = slot(at_[r], g);
        if (succ_[r][k] == none) succ_[r][k] = value;
        else unite(succ_[r][k], value);
    }

    void unite(std::size_t a, std::size_t b)
    {
        pending_.push_back({a, b});
        while (not pending_.empty()) {
            auto [x, y] = pending_.back();
            pending_.pop_back();
            std::size_t rx = find(x), ry = find(y);
            if (rx == ry) continue;
            if (ry < rx) std::swap(rx, ry);
            parent_[ry] = rx;
            ++merges_;
            for (std::size_t k = 0; k < succ_[ry].size(); ++k) {
                if (succ_[ry][k] == none) continue;
                if (succ_[rx][k] == none) succ_[rx][k] = succ_[ry][k];
                else pending_.push_back({succ_[rx][k], succ_[ry][k]});
            }
        }
    }

    std::vector<std::size_t> roots()
    {
        std::vector<std::size_t> out;
        for (std::size_t e = 0; e < at_.size(); ++e)
            if (find(e) == e) out.push_back(e);
        return out;
    }
};

}

inline SigmaResult sigma_detailed(const Translation &F, const Instance &I, const MigrationOptions &opts = {},
                                  MigrationLog *log = nullptr)
{
    require_on(I, F.source(), "sigma");
    require_endpoints(F);
    const Graph &cg = F.source().graph();
    const Graph &dg = F.target().graph();
    const Schema &D = F.target();
    detail::Chase chase(dg);

    std::vector<std::vector<std::size_t>> seed(cg.vertex_count());
    for (std::size_t c = 0; c < cg.vertex_count(); ++c)
        for (RowIndex r = 0; r < I.row_count(vertex_id(c)); ++r)
            seed[c].push_back(chase.make(F(vertex_id(c))));

    for (std::size_t ai = 0; ai < cg.arrow_count(); ++ai) {
        ArrowId a = arrow_id(ai);
        const Path &p = F(a);
        std::size_t c = index(cg.source(a)), c2 = index(cg.target(a));
        for (RowIndex r = 0; r < I.row_count(vertex_id(c)); ++r) {
            std::size_t goal = seed[c2][I.value(a, r)];
            if (p.is_trivial()) {
                chase.unite(seed[c][r], goal);
                continue;
            }
            std::size_t e = seed[c][r];
            for (std::size_t i = 0; i + 1 < p.arrows.size(); ++i) e = chase.step(e, p.arrows[i]);
            chase.set_successor(e, p.arrows.back(), goal);
        }
    }

    std::vector<std::size_t> live_before(dg.vertex_count(), 0);
    for (;;) {
        std::size_t created = chase.size(), merged = chase.merges();
        for (const auto &eq : D.equations())
            for (std::size_t x : chase.roots())
                if (chase.at(x) == eq.lhs.source and chase.find(x) == x)
                    chase.unite(chase.walk(x, eq.lhs), chase.walk(x, eq.rhs));
        for (std::size_t x : chase.roots())
            for (ArrowId g : dg.outgoing(chase.at(x))) chase.step(x, g);

        auto roots = chase.roots();
        std::vector<std::size_t> live(dg.vertex_count(), 0);
        for (auto x : roots) ++live[index(chase.at(x))];
        if (log) log->element_counts.push_back(roots.size());
        if (roots.size() > opts.saturation_bound) {
            std::size_t worst = 0;
            long best = std::numeric_limits<long>::min();
            for (std::size_t v = 0; v < live.size(); ++v) {
                long grew = static_cast<long>(live[v]) - static_cast<long>(live_before[v]);
                if (grew > best) best = grew, worst = v;
            }
            const std::string &name = dg.name(vertex_id(worst));
            throw BoundError(name, "left pushforward did not saturate within " + std::to_string(opts.saturation_bound) +
                                       " elements; table '" + name + "' keeps growing");
        }
        live_before = live;
        if (chase.size() == created and chase.merges() == merged) break;
    }

    // Naming.  Classes containing a seed take the smallest seed's row-id; the rest are named breadth first as
    // parent.arrow, keeping the shortest and then lexicographically least candidate.
    auto roots = chase.roots();
    std::map<std::size_t, SigmaTerm> term;
    std::map<std::size_t, std::string> name;
    std::vector<std::size_t> level;
    for (std::size_t c = 0; c < cg.vertex_count(); ++c)
        for (RowIndex r = 0; r < seed[c].size(); ++r) {
            std::size_t x = chase.find(seed[c][r]);
            if (term.contains(x)) continue;
            term[x] = SigmaTerm{vertex_id(c), r, Path(F(vertex_id(c)))};
            level.push_back(x);
        }
    {
        std::map<std::pair<VertexId, std::string>, std::size_t> uses;
        for (auto x : level) ++uses[{chase.at(x), I.row(term[x].c, term[x].r)}];
        for (auto x : level) {
            const std::string &raw = I.row(term[x].c, term[x].r);
            name[x] = uses[{chase.at(x), raw}] > 1 ? cg.name(term[x].c) + ":" + raw : raw;
        }
    }
    std::vector<std::size_t> order = level;
    while (not level.empty()) {
        std::map<std::size_t, std::pair<std::string, SigmaTerm>> best;
        for (auto x : level) {
            auto out = dg.outgoing(chase.at(x));
            for (std::size_t k = 0; k < out.size(); ++k) {
                std::size_t y = chase.successor(x, k);
                if (term.contains(y)) continue;
                std::string candidate = name[x] + "." + dg.name(out[k]);
                auto it = best.find(y);
                if (it == best.end() or candidate < it->second.first) {
                    SigmaTerm t = term[x];
                    t.path.arrows.push_back(out[k]);
                    best[y] = {std::move(candidate), std::move(t)};
                }
            }
        }
        std::vector<std::size_t> next;
        for (auto &[y, nt] : best) {
            name[y] = nt.first;
            term[y] = nt.second;
            next.push_back(y);
        }
        std::sort(next.begin(), next.end(), [&](auto a, auto b) { return name[a] < name[b]; });
        order.insert(order.end(), next.begin(), next.end());
        level = std::move(next);
    }

    SigmaResult res;
    res.terms.resize(dg.vertex_count());
    InstanceBuilder b(F.target_ptr());
    std::map<std::size_t, RowIndex> row_of;
    std::map<std::pair<VertexId, std::string>, std::size_t> taken;
    for (auto x : order) {
        VertexId v = chase.at(x);
        std::string id = name[x];
        if (std::size_t n = taken[{v, id}]++; n > 0) id += "#" + std::to_string(n);
        row_of[x] = b.add_row(v, id);
        res.terms[index(v)].push_back(term[x]);
    }
    for (auto x : order) {
        auto out = dg.outgoing(chase.at(x));
        for (std::size_t k = 0; k < out.size(); ++k) b.set(out[k], row_of[x], row_of.at(chase.successor(x, k)));
    }
    res.unit.resize(cg.vertex_count());
    for (std::size_t c = 0; c < cg.vertex_count(); ++c)
        for (auto e : seed[c]) res.unit[c].push_back(row_of.at(chase.find(e)));
    res.instance = std::move(b).build();
    return res;
}

inline Instance sigma(const Translation &F, const Instance &I, const MigrationOptions &opts = {}, MigrationLog *log = nullptr)
{
    return sigma_detailed(F, I, opts, log).instance;
}

/// `Σ_F m` for `m: I -> I'`: a row named by term `(c, r, p)` goes to `p` evaluated from the image of `m(r)`.
inline InstanceMorphism sigma_on_morphism(const SigmaResult &source, const SigmaResult &target, const InstanceMorphism &m)
{
    const Instance &out = target.instance;
    std::vector<std::vector<RowIndex>> comps(source.terms.size());
    for (std::size_t d = 0; d < source.terms.size(); ++d)
        for (const auto &t : source.terms[d])
            comps[d].push_back(evaluate_path(out, t.path, target.unit[index(t.c)][m(t.c, t.r)]));
    return InstanceMorphism(std::make_shared<const Instance>(source.instance), std::make_shared<const Instance>(out),
                            std::move(comps));
}

inline InstanceMorphism sigma_on_morphism(const Translation &F, const InstanceMorphism &m, const MigrationOptions &opts = {})
{
    return sigma_on_morphism(sigma_detailed(F, m.source(), opts), sigma_detailed(F, m.target(), opts), m);
}

}
