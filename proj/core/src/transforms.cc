#include <cycdec/transforms.hh>

#include <algorithm>
#include <climits>
#include <functional>
#include <numeric>
#include <set>
#include <tuple>
#include <string>
#include <unordered_set>

using std::optional;
using std::string;
using std::to_string;
using std::vector;

namespace cycdec
{
    namespace
    {
        // Multiplicity changes a transposition (a b) makes to the a-edges
        // and b-edges of one part: delta[x] = mu(bx) - mu(ax).
        auto part_delta(const vector<Edge> & edges, Vertex a, Vertex b, int n) -> vector<int>
        {
            vector<int> d(n, 0);
            for (auto [u, v] : edges) {
                if (u == a && v != b)
                    --d[v];
                else if (v == a && u != b)
                    --d[u];
                else if (u == b && v != a)
                    ++d[v];
                else if (v == b && u != a)
                    ++d[u];
            }
            return d;
        }

        auto transposed(Vertex v, Vertex a, Vertex b) -> Vertex
        {
            return v == a ? b : v == b ? a : v;
        }

        struct SwitchParts
        {
            vector<int> index;          // into cycles; cycles.size() is the matching
            vector<vector<int>> delta;
        };

        auto collect_parts(const Packing & p, Vertex a, Vertex b) -> SwitchParts
        {
            SwitchParts s;
            int count = static_cast<int>(p.cycles.size());
            for (int i = 0 ; i <= count ; ++i) {
                vector<Edge> edges;
                if (i < count) {
                    const auto & c = p.cycles[i];
                    if (! c.contains(a) && ! c.contains(b))
                        continue;
                    edges = c.edges();
                }
                else if (p.matching)
                    edges = *p.matching;
                else
                    continue;
                auto d = part_delta(edges, a, b, p.n);
                if (std::any_of(d.begin(), d.end(), [] (int x) { return x != 0; })) {
                    s.index.push_back(i);
                    s.delta.push_back(std::move(d));
                }
            }
            return s;
        }

        auto apply_transposition(const Packing & p, const vector<int> & parts, Vertex a, Vertex b) -> Packing
        {
            Packing q = p;
            int count = static_cast<int>(p.cycles.size());
            for (int i : parts) {
                if (i < count) {
                    vector<Vertex> vs(p.cycles[i].vertices().begin(), p.cycles[i].vertices().end());
                    for (auto & v : vs)
                        v = transposed(v, a, b);
                    q.cycles[i] = Cycle(std::move(vs));
                }
                else
                    for (auto & [u, v] : *q.matching) {
                        u = transposed(u, a, b);
                        v = transposed(v, a, b);
                    }
            }
            return q;
        }

        // Exact-cover style search for a subset of parts whose deltas sum to
        // the target vector. Branches on the most constrained coordinate.
        class SubsetSearch
        {
            public:
                SubsetSearch(const SwitchParts & parts, vector<int> target, std::uint64_t max_nodes) :
                    _parts(parts),
                    _residual(std::move(target)),
                    _chosen(parts.index.size(), 0),
                    _max_nodes(max_nodes)
                {
                    for (auto & r : _residual)
                        r = -r;
                }

                auto run() -> optional<vector<int>>
                {
                    if (search()) {
                        vector<int> out;
                        for (std::size_t i = 0 ; i < _chosen.size() ; ++i)
                            if (_chosen[i])
                                out.push_back(_parts.index[i]);
                        return out;
                    }
                    return std::nullopt;
                }

                auto exhausted() const -> bool { return _exhausted; }

            private:
                auto search() -> bool
                {
                    if (++_nodes > _max_nodes) {
                        _exhausted = true;
                        return false;
                    }
                    int best = -1;
                    std::size_t best_count = SIZE_MAX;
                    for (std::size_t x = 0 ; x < _residual.size() ; ++x) {
                        if (_residual[x] == 0)
                            continue;
                        std::size_t count = 0;
                        for (std::size_t i = 0 ; i < _chosen.size() ; ++i)
                            if (! _chosen[i] && _parts.delta[i][x] * _residual[x] < 0)
                                ++count;
                        if (count < best_count) {
                            best_count = count;
                            best = static_cast<int>(x);
                        }
                    }
                    if (best == -1)
                        return true;
                    if (best_count == 0)
                        return false;

                    for (std::size_t i = 0 ; i < _chosen.size() ; ++i) {
                        if (_chosen[i] || _parts.delta[i][best] * _residual[best] >= 0)
                            continue;
                        _chosen[i] = 1;
                        if (_seen.insert(_chosen).second) {
                            add(i, 1);
                            if (search())
                                return true;
                            add(i, -1);
                        }
                        _chosen[i] = 0;
                        if (_exhausted)
                            return false;
                    }
                    return false;
                }

                auto add(std::size_t i, int sign) -> void
                {
                    for (std::size_t x = 0 ; x < _residual.size() ; ++x)
                        _residual[x] += sign * _parts.delta[i][x];
                }

                const SwitchParts & _parts;
                vector<int> _residual;
                string _chosen;
                std::unordered_set<string> _seen;
                std::uint64_t _nodes = 0, _max_nodes;
                bool _exhausted = false;
        };

        auto switch_target(int n, Vertex c, SwitchMode mode, Vertex t) -> vector<int>
        {
            vector<int> target(n, 0);
            target[c] += 1;
            target[t] += mode == SwitchMode::PoleShift ? 1 : -1;
            return target;
        }

        // Whether the contract permits this outcome given the current leave.
        auto outcome_possible(const Multigraph & l, Vertex a, Vertex b, Vertex c, SwitchMode mode, Vertex t,
                bool allow_origin) -> bool
        {
            if (t == a || t == b)
                return false;
            if (mode == SwitchMode::PoleShift) {
                if (t == c)
                    return allow_origin && l.mult(a, c) >= 2;
                return l.mult(a, t) >= 1;
            }
            return t != c && l.mult(b, t) >= 1;
        }

        auto union_of(const Packing & p, const vector<int> & indices) -> Multigraph
        {
            Multigraph g(p.n);
            for (int i : indices)
                p.cycles[i].add_to(g);
            return g;
        }

        auto without(const Packing & p, vector<int> indices) -> Packing
        {
            std::sort(indices.begin(), indices.end());
            Packing q = p;
            q.cycles.clear();
            for (int i = 0, k = 0 ; i < static_cast<int>(p.cycles.size()) ; ++i) {
                if (k < static_cast<int>(indices.size()) && indices[k] == i) {
                    ++k;
                    continue;
                }
                q.cycles.push_back(p.cycles[i]);
            }
            return q;
        }

        auto with(Packing p, const vector<Cycle> & extra) -> Packing
        {
            for (const auto & c : extra)
                p.cycles.push_back(c);
            return p;
        }

        // Indices in d of the given cycles (canonical comparison, each index used once).
        auto locate(const Packing & d, const vector<Cycle> & targets) -> vector<int>
        {
            vector<int> idx;
            for (const auto & t : targets) {
                auto k = t.canonical();
                int found = -1;
                for (int i = 0 ; i < static_cast<int>(d.cycles.size()) && found == -1 ; ++i)
                    if (d.cycles[i].canonical() == k && std::find(idx.begin(), idx.end(), i) == idx.end())
                        found = i;
                if (found == -1)
                    throw std::logic_error("locate: cycle missing from packing");
                idx.push_back(found);
            }
            return idx;
        }

        auto leave_or_empty(const Packing & p) -> optional<Multigraph>
        {
            try {
                return leave(p);
            }
            catch (const MultiplicityOverflow &) {
                return std::nullopt;
            }
        }

        auto require_certificate(const Certificate & d, const char * what) -> void
        {
            auto v = verify(d);
            if (! v.accepted)
                throw PreconditionError(string(what) + ": input is not a valid certificate: " + v.detail);
        }

        auto finish(Packing p, const LengthList & expected, const char * what) -> Certificate
        {
            auto cert = make_certificate(std::move(p));
            auto v = verify(cert);
            if (! v.accepted)
                throw TransformError(string(what) + ": produced an invalid decomposition: " + v.detail);
            if (! (cert.claimed == expected))
                throw TransformError(string(what) + ": produced " + cert.claimed.to_string() + ", expected " + expected.to_string());
            return cert;
        }

        auto find_switch(const Packing & p, const SwitchParts & parts, Vertex a, Vertex b, Vertex c,
                SwitchMode mode, Vertex t, const SwitchOptions & options, const Multigraph & l) -> optional<Packing>
        {
            SubsetSearch search(parts, switch_target(p.n, c, mode, t), options.max_nodes);
            auto expected = expected_switch_leave(l, a, b, c, mode, t);
            if (auto chosen = search.run()) {
                auto q = apply_transposition(p, *chosen, a, b);
                auto lq = leave_or_empty(q);
                if (lq && *lq == expected)
                    return q;
                throw std::logic_error("switch produced a leave outside the contract");
            }
            if (! search.exhausted())
                return std::nullopt;

            // The subset search gave up: re-decompose the cycles at a and b directly.
            vector<int> affected;
            for (int i = 0 ; i < static_cast<int>(p.cycles.size()) ; ++i)
                if (p.cycles[i].contains(a) || p.cycles[i].contains(b))
                    affected.push_back(i);
            Multigraph target = union_of(p, affected);
            target += l;
            for (Vertex u = 0 ; u < p.n ; ++u)
                for (Vertex v = u + 1 ; v < p.n ; ++v)
                    if (target.mult(u, v) < expected.mult(u, v))
                        return std::nullopt;
            target -= expected;
            Packing rest = without(p, affected);
            vector<int> lens;
            for (int i : affected)
                lens.push_back(p.cycles[i].length());
            LengthList lengths(std::move(lens));
            auto r = decompose_union_into_lengths(target, lengths, options.fallback_budget);
            if (r.status != SearchStatus::Found)
                return std::nullopt;
            return with(rest, r.cycles);
        }
    }

    auto mode_name(SwitchMode m) -> const char *
    {
        return m == SwitchMode::PoleShift ? "pole-shift" : "cross";
    }

    auto expected_switch_leave(const Multigraph & l, Vertex a, Vertex b, Vertex c, SwitchMode mode, Vertex t) -> Multigraph
    {
        Multigraph e = l;
        e.remove_edge(a, c);
        e.add_edge(b, c);
        if (mode == SwitchMode::PoleShift) {
            e.remove_edge(a, t);
            e.add_edge(b, t);
        }
        else {
            e.remove_edge(b, t);
            e.add_edge(a, t);
        }
        return e;
    }

    auto perform_switch(const Packing & p, Vertex a, Vertex b, Vertex c, const SwitchOptions & options) -> SwitchOutcome
    {
        int n = p.n;
        if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n)
            throw PreconditionError("switch: vertex out of range");
        if (a == b)
            throw PreconditionError("switch: a = b");
        if (c == a || c == b)
            throw PreconditionError("switch: origin coincides with a pole");
        Multigraph l = leave(p);
        if (l.mult(a, c) == 0)
            throw PreconditionError("switch: edge ac is not in the leave");

        auto parts = collect_parts(p, a, b);
        for (Vertex t = 0 ; t < n ; ++t)
            for (auto mode : { SwitchMode::PoleShift, SwitchMode::Cross }) {
                if (! outcome_possible(l, a, b, c, mode, t, options.allow_origin_terminus))
                    continue;
                if (options.accept && ! options.accept(mode, t))
                    continue;
                if (auto q = find_switch(p, parts, a, b, c, mode, t, options, l))
                    return SwitchOutcome{ std::move(*q), t, mode };
            }
        throw TransformError("switch: no terminus reachable for (" + to_string(a) + "," + to_string(b)
                + ") with origin " + to_string(c));
    }

    auto local_repack(const Packing & p, const vector<int> & chosen, const LengthList & target,
            const SearchBudget & budget) -> optional<Packing>
    {
        Multigraph u = union_of(p, chosen);
        if (u.edge_count() != target.sum())
            return std::nullopt;

        // Stage A: the chosen cycles alone.
        {
            auto r = decompose_union_into_lengths(u, target, budget);
            if (r.status == SearchStatus::Found)
                return with(without(p, chosen), r.cycles);
        }

        // Stage B: absorb one or two neighbouring cycles.
        vector<int> others;
        for (int i = 0 ; i < static_cast<int>(p.cycles.size()) ; ++i)
            if (std::find(chosen.begin(), chosen.end(), i) == chosen.end())
                others.push_back(i);
        auto overlap = [&] (int i) {
            int s = 0;
            for (Vertex v : p.cycles[i].vertices())
                s += u.degree(v) > 0;
            return s;
        };
        std::stable_sort(others.begin(), others.end(), [&] (int x, int y) { return overlap(x) > overlap(y); });
        int reach = std::min<int>(others.size(), 8);
        for (int k = 1 ; k <= 2 ; ++k)
            for (int i = 0 ; i < reach ; ++i)
                for (int j = (k == 1 ? i : i + 1) ; j < (k == 1 ? i + 1 : reach) ; ++j) {
                    vector<int> extra{ others[i] };
                    if (k == 2)
                        extra.push_back(others[j]);
                    if (overlap(others[i]) < 2)
                        continue;
                    vector<int> all = chosen;
                    all.insert(all.end(), extra.begin(), extra.end());
                    vector<int> lens(target.values().begin(), target.values().end());
                    for (int e : extra)
                        lens.push_back(p.cycles[e].length());
                    auto r = decompose_union_into_lengths(union_of(p, all), LengthList(lens), budget);
                    if (r.status == SearchStatus::Found)
                        return with(without(p, all), r.cycles);
                }

        // Stage C: one switch on the remaining packing, then split its leave.
        Packing rest = without(p, chosen);
        Multigraph l0 = leave(rest);
        SwitchOptions options;
        options.allow_origin_terminus = true;
        options.max_nodes = 20'000;
        options.fallback_budget = SearchBudget::nodes(2'000);
        auto parts_cache = [&] (Vertex a, Vertex b) { return collect_parts(rest, a, b); };
        for (Vertex a = 0 ; a < p.n ; ++a) {
            if (u.degree(a) == 0)
                continue;
            for (Vertex c : l0.neighbours(a))
                for (Vertex b = 0 ; b < p.n ; ++b) {
                    if (b == a || b == c)
                        continue;
                    auto parts = parts_cache(a, b);
                    for (Vertex t = 0 ; t < p.n ; ++t)
                        for (auto mode : { SwitchMode::PoleShift, SwitchMode::Cross }) {
                            if (! outcome_possible(l0, a, b, c, mode, t, true))
                                continue;
                            auto l1 = expected_switch_leave(l0, a, b, c, mode, t);
                            auto r = decompose_union_into_lengths(l1, target, budget);
                            if (r.status != SearchStatus::Found)
                                continue;
                            if (auto q = find_switch(rest, parts, a, b, c, mode, t, options, l0))
                                return with(std::move(*q), r.cycles);
                        }
                }
        }
        return std::nullopt;
    }

    namespace
    {
        auto equalise_pair(const Certificate & d, int i, int j, int m1p, int m2p) -> optional<Certificate>
        {
            LengthList target{ m1p, m2p };
            auto expected = d.claimed - LengthList{ d.packing.cycles[i].length(), d.packing.cycles[j].length() } + target;
            if (auto q = local_repack(d.packing, { i, j }, target))
                return finish(std::move(*q), expected, "equalise");
            return std::nullopt;
        }
    }

    auto equalise(const Certificate & d, int m1, int m2, int m1p, int m2p) -> Certificate
    {
        if (! (m1 <= m1p && m1p <= m2p && m2p <= m2 && m1p + m2p == m1 + m2))
            throw PreconditionError("equalise: need m1 <= m1' <= m2' <= m2 and equal sums");
        require_certificate(d, "equalise");
        if (m1p == m1)
            return make_certificate(d.packing);

        const auto & cs = d.packing.cycles;
        vector<std::pair<int, int>> pairs;
        for (int i = 0 ; i < static_cast<int>(cs.size()) ; ++i)
            for (int j = 0 ; j < static_cast<int>(cs.size()) ; ++j)
                if (i != j && cs[i].length() == m1 && cs[j].length() == m2 && (m1 != m2 || i < j)
                        && cs[i].shared_vertices(cs[j]) >= 2)
                    pairs.emplace_back(i, j);
        if (pairs.empty())
            throw TransformError("equalise: no " + to_string(m1) + "-cycle and " + to_string(m2)
                    + "-cycle share two vertices");
        std::stable_sort(pairs.begin(), pairs.end(), [&] (auto x, auto y) {
            return cs[x.first].shared_vertices(cs[x.second]) > cs[y.first].shared_vertices(cs[y.second]);
        });
        for (auto [i, j] : pairs)
            if (auto r = equalise_pair(d, i, j, m1p, m2p))
                return *r;
        throw TransformError("equalise: every qualifying pair resisted repacking");
    }

    auto join(const Certificate & d, int h, int m, int mp) -> Certificate
    {
        int n = d.packing.n;
        if (h < m + mp || m + mp + h > n + 1)
            throw PreconditionError("join: need h >= m+m' and m+m'+h <= n+1");
        require_certificate(d, "join");
        const auto & cs = d.packing.cycles;
        auto of = [&] (int len) {
            vector<int> out;
            for (int i = 0 ; i < static_cast<int>(cs.size()) ; ++i)
                if (cs[i].length() == len)
                    out.push_back(i);
            return out;
        };
        auto hs = of(h), ms = of(m), mps = of(mp);
        auto expected = d.claimed - LengthList{ h, m, mp } + LengthList{ h, m + mp };

        struct Triple { int a, b, c, score; };
        vector<Triple> triples;
        for (int x : hs)
            for (int y : ms)
                for (int z : mps) {
                    if (x == y || y == z || x == z || (m == mp && z < y))
                        continue;
                    int score = cs[x].shared_vertices(cs[y]) + cs[x].shared_vertices(cs[z]) + cs[y].shared_vertices(cs[z]);
                    triples.push_back({ x, y, z, score });
                }
        if (triples.empty())
            throw PreconditionError("join: input does not contain (h,m,m')");
        std::stable_sort(triples.begin(), triples.end(), [] (auto x, auto y) { return x.score > y.score; });
        for (std::size_t i = 0 ; i < std::min<std::size_t>(triples.size(), 256) && triples[i].score >= 3 ; ++i) {
            const auto & t = triples[i];
            auto r = decompose_union_into_lengths(union_of(d.packing, { t.a, t.b, t.c }), LengthList{ h, m + mp },
                    SearchBudget::nodes(5'000));
            if (r.status == SearchStatus::Found)
                return finish(with(without(d.packing, { t.a, t.b, t.c }), r.cycles), expected, "join");
        }
        if (triples.size() > 24)
            triples.resize(24);
        for (const auto & t : triples)
            if (auto q = local_repack(d.packing, { t.a, t.b, t.c }, LengthList{ h, m + mp }))
                return finish(std::move(*q), expected, "join");

        // Move up to two 2-cycles, (a,b) to (x,b) by an (a,x)-switch with origin b, then split directly.
        auto direct = [&] (const Packing & q) -> optional<Packing> {
            const auto & qs = q.cycles;
            for (int u = 0 ; u < static_cast<int>(qs.size()) ; ++u)
                for (int v = 0 ; v < static_cast<int>(qs.size()) ; ++v)
                    for (int w = v + 1 ; w < static_cast<int>(qs.size()) ; ++w) {
                        if (u == v || u == w || qs[u].length() != h)
                            continue;
                        if (! ((qs[v].length() == m && qs[w].length() == mp) || (qs[v].length() == mp && qs[w].length() == m)))
                            continue;
                        if (qs[u].shared_vertices(qs[v]) + qs[u].shared_vertices(qs[w]) + qs[v].shared_vertices(qs[w]) < 3)
                            continue;
                        auto r = decompose_union_into_lengths(union_of(q, { u, v, w }), LengthList{ h, m + mp },
                                SearchBudget::nodes(20'000));
                        if (r.status == SearchStatus::Found)
                            return with(without(q, { u, v, w }), r.cycles);
                    }
            return std::nullopt;
        };
        std::function<optional<Packing> (const Packing &, int)> relocate = [&] (const Packing & q, int depth) -> optional<Packing> {
            if (depth == 0)
                return std::nullopt;
            std::set<Cycle> moved;
            const auto & qs = q.cycles;
            for (int i = 0 ; i < static_cast<int>(qs.size()) ; ++i) {
                if (qs[i].length() != 2 || ! moved.insert(qs[i].canonical()).second)
                    continue;
                Packing rest = without(q, { i });
                for (auto [a, b] : { std::pair{ qs[i][0], qs[i][1] }, { qs[i][1], qs[i][0] } })
                    for (Vertex x = 0 ; x < n ; ++x) {
                        if (x == a || x == b)
                            continue;
                        SwitchOptions options;
                        options.accept = [&] (SwitchMode mode, Vertex t) { return mode == SwitchMode::PoleShift && t == b; };
                        Packing next;
                        try {
                            next = with(perform_switch(rest, a, x, b, options).packing, { Cycle{ x, b } });
                        }
                        catch (const TransformError &) {
                            continue;
                        }
                        if (auto r = direct(next))
                            return r;
                        if (auto r = relocate(next, depth - 1))
                            return r;
                    }
            }
            return std::nullopt;
        };
        if (m == 2 || mp == 2)
            if (auto r = relocate(d.packing, 2))
                return finish(std::move(*r), expected, "join");
        throw TransformError("join: no triple could be repacked");
    }

    auto adding3s(const Packing & p, int m) -> Packing
    {
        auto l = leave(p);
        auto f = detect_flower(l);
        if (! f)
            throw PreconditionError("adding3s: leave is not a flower");
        Vertex x = f->centre;
        int ai = -1, bi = -1;
        for (int i = 0 ; i < static_cast<int>(f->petals.size()) ; ++i) {
            int len = f->petals[i].length();
            if (len == 2 && bi == -1)
                bi = i;
            else if (len >= 3 && (m == 0 ? (ai == -1 || len > f->petals[ai].length()) : (len == m && ai == -1)))
                ai = i;
        }
        if (ai == -1 || bi == -1 || f->petals.size() < 2)
            throw PreconditionError("adding3s: leave is not an (M',m,2)-flower");
        m = f->petals[ai].length();
        auto expected_petals = f->petal_lengths() - LengthList{ m, 2 } + LengthList{ m - 1 };

        Packing out;
        const Cycle & a = f->petals[ai];
        if (m == 3)
            out = with(p, { a });
        else {
            // A = (x, w, v, u, ...): the path [u,v,w,x] ends at the centre.
            int pos = a.position(x);
            int len = a.length();
            Vertex w = a[(pos + 1) % len], v = a[(pos + 2) % len], u = a[(pos + 3) % len];
            Vertex y = f->petals[bi][0] == x ? f->petals[bi][1] : f->petals[bi][0];
            SwitchOptions options;
            options.allow_origin_terminus = false;
            auto s = perform_switch(p, v, y, w, options);
            if (! ((s.mode == SwitchMode::PoleShift && s.terminus == u) || (s.mode == SwitchMode::Cross && s.terminus == x)))
                throw TransformError("adding3s: switch ended at an unexpected terminus");
            out = with(std::move(s.packing), { Cycle{ w, x, y } });
        }
        auto l2 = leave(out);
        if (expected_petals.size() == 0 ? ! l2.empty() : ! [&] {
                auto f2 = detect_flower(l2);
                return f2 && f2->petal_lengths() == expected_petals;
            }())
            throw TransformError("adding3s: resulting leave is not the expected flower");
        return out.canonical();
    }

    namespace
    {
        auto equalise2_pair(const Certificate & d, int ci, int bi) -> Certificate
        {
            const auto & cs = d.packing.cycles;
            int m = cs[ci].length();
            auto expected = d.claimed - LengthList{ m, 2 } + LengthList{ m - 1, 3 };
            if (m == 3)
                return make_certificate(d.packing);
            if (cs[ci].shared_vertices(cs[bi]) >= 2) {
                if (auto r = equalise_pair(d, bi, ci, 3, m - 1))
                    return *r;
                throw TransformError("equalise2: repacking the m-cycle and 2-cycle failed");
            }
            auto q = adding3s(without(d.packing, { ci, bi }), m);
            auto l = leave(q);
            q.cycles.push_back(cycle_from_graph(l));
            return finish(std::move(q), expected, "equalise2");
        }
    }

    auto equalise2(const Certificate & d, int m) -> Certificate
    {
        if (m < 3)
            throw PreconditionError("equalise2: m must be at least 3");
        require_certificate(d, "equalise2");
        const auto & cs = d.packing.cycles;
        int best_c = -1, best_b = -1, best = 0;
        for (int i = 0 ; i < static_cast<int>(cs.size()) ; ++i)
            for (int j = 0 ; j < static_cast<int>(cs.size()) ; ++j)
                if (cs[i].length() == m && cs[j].length() == 2 && i != j) {
                    int s = cs[i].shared_vertices(cs[j]);
                    if (s > best) {
                        best = s;
                        best_c = i;
                        best_b = j;
                    }
                }
        if (best == 0)
            throw TransformError("equalise2: no " + to_string(m) + "-cycle meets a 2-cycle");
        return equalise2_pair(d, best_c, best_b);
    }

    auto almostall2s(const Certificate & d, int m, int m1p, int m2p) -> Certificate
    {
        int lambda = d.packing.lambda, n = d.packing.n;
        if (lambda % 2 == 0 || ! (2 <= m1p && m1p <= m2p && m2p <= m && m1p + m2p == m + 2))
            throw PreconditionError("almostall2s: need lambda odd, 2 <= m1' <= m2' <= m, m1'+m2' = m+2");
        require_certificate(d, "almostall2s");
        auto rest = d.claimed - LengthList{ m, 2 };
        if (2L * rest.nu(2) <= (lambda - 1) * (binom2(n) - binom2(m)))
            throw PreconditionError("almostall2s: too few 2-cycles");
        const auto & cs = d.packing.cycles;
        for (int i = 0 ; i < static_cast<int>(cs.size()) ; ++i) {
            if (cs[i].length() != m)
                continue;
            for (int j = 0 ; j < static_cast<int>(cs.size()) ; ++j)
                if (cs[j].length() == 2 && cs[i].shared_vertices(cs[j]) == 2)
                    if (auto r = equalise_pair(d, j, i, m1p, m2p))
                        return *r;
        }
        throw TransformError("almostall2s: no m-cycle carries a 2-cycle on two of its vertices");
    }

    auto addtwo3s(const Certificate & d, int i, int j, int k) -> Certificate
    {
        if (d.packing.n < 5)
            throw PreconditionError("addtwo3s: need n >= 5");
        require_certificate(d, "addtwo3s");
        const auto & cs = d.packing.cycles;
        if (cs[i].length() != 2 || cs[j].length() != 2 || cs[k].length() != 2 || cs[i].shared_vertices(cs[j]) < 1)
            throw PreconditionError("addtwo3s: need three 2-cycles, the first two sharing a vertex");
        auto expected = d.claimed - LengthList{ 2, 2, 2 } + LengthList{ 3, 3 };
        Vertex x = cs[i].contains(cs[j][0]) ? cs[j][0] : cs[j][1];
        Vertex y = cs[i][0] == x ? cs[i][1] : cs[i][0];
        Vertex z = cs[j][0] == x ? cs[j][1] : cs[j][0];
        Vertex p = cs[k][0], q = cs[k][1];

        Packing rest = without(d.packing, { i, j, k });
        auto split = [&] (const Packing & packing) -> optional<Certificate> {
            auto r = decompose_union_into_lengths(leave(packing), LengthList{ 3, 3 }, SearchBudget::nodes(10'000));
            if (r.status == SearchStatus::Found)
                return finish(with(packing, r.cycles), expected, "addtwo3s");
            // A (4,2)-flower leave: one more 3-cycle leaves a triangle.
            auto f = detect_flower(leave(packing));
            if (! f || ! (f->petal_lengths() == LengthList{ 4, 2 }))
                return std::nullopt;
            auto q = adding3s(packing, 4);
            return finish(with(q, { cycle_from_graph(leave(q)) }), expected, "addtwo3s");
        };
        auto try_switch = [&] (Vertex a, Vertex b, Vertex c) -> optional<Certificate> {
            SwitchOptions options;
            options.allow_origin_terminus = true;
            try {
                auto s = perform_switch(rest, a, b, c, options);
                return split(s.packing);
            }
            catch (const TransformError &) {
                return std::nullopt;
            }
        };

        if (auto r = split(rest))
            return *r;
        // W = (y,q) or (z,q) after naming: normalise so W meets y.
        if (p == z || q == z) {
            std::swap(y, z);
        }
        if (p == y || q == y) {
            Vertex o = p == y ? q : p;
            if (auto r = try_switch(o, z, y))
                return *r;
        }
        else if (p == x || q == x) {
            Vertex o = p == x ? q : p;
            SwitchOptions options;
            options.accept = [&] (SwitchMode, Vertex t) { return t != o; };
            try {
                auto s = perform_switch(rest, x, z, o, options);
                if (auto r = split(s.packing))
                    return *r;
            }
            catch (const TransformError &) {
            }
        }
        else {
            // W disjoint from X and Y: move W next to y, then split or recurse.
            for (auto [a, b, c] : { std::tuple{ p, y, q }, { q, y, p }, { p, z, q }, { q, z, p } })
                if (auto r = try_switch(a, b, c))
                    return *r;
        }
        if (auto q2 = local_repack(d.packing, { i, j, k }, LengthList{ 3, 3 }))
            return finish(std::move(*q2), expected, "addtwo3s");
        throw TransformError("addtwo3s: no repacking found");
    }

    auto two3s(const Certificate & d) -> Certificate
    {
        int n = d.packing.n;
        if (n < 5)
            throw PreconditionError("two3s: need n >= 5");
        if (d.claimed.nu(2) < 3 || 2L * (d.claimed.nu(2) - 3) < n - 5)
            throw PreconditionError("two3s: need (M,2,2,2) with 2 nu_2(M) >= n-5");
        require_certificate(d, "two3s");
        const auto & cs = d.packing.cycles;
        vector<int> twos;
        for (int i = 0 ; i < static_cast<int>(cs.size()) ; ++i)
            if (cs[i].length() == 2)
                twos.push_back(i);
        // Distinct (X, Y, W) shapes only; identical 2-cycles give identical attempts.
        std::set<vector<Cycle>> tried;
        int attempts = 0;
        for (int shared : { 1, 2 })
            for (int i : twos)
                for (int j : twos) {
                    if (i >= j || cs[i].shared_vertices(cs[j]) != shared)
                        continue;
                    // Prefer a third 2-cycle that closes a triangle, then any adjacent one.
                    vector<int> thirds;
                    for (int k : twos)
                        if (k != i && k != j)
                            thirds.push_back(k);
                    std::stable_sort(thirds.begin(), thirds.end(), [&] (int a, int b) {
                        auto s = [&] (int k) { return cs[k].shared_vertices(cs[i]) + cs[k].shared_vertices(cs[j]); };
                        return s(a) > s(b);
                    });
                    for (int k : thirds) {
                        if (! tried.insert({ cs[i], cs[j], cs[k] }).second)
                            continue;
                        if (++attempts > 40)
                            throw TransformError("two3s: attempt limit reached");
                        try {
                            return addtwo3s(d, i, j, k);
                        }
                        catch (const TransformError &) {
                        }
                    }
                }
        throw TransformError("two3s: no pair of 2-cycles sharing a vertex could be converted");
    }

    namespace
    {
        // Decomposition of l into lengths where the 4-cycle and 2-cycle share a vertex.
        auto split_342(const Multigraph & l) -> optional<vector<Cycle>>
        {
            auto r = decompose_union_into_lengths(l, LengthList{ 4, 3, 2 }, SearchBudget::nodes(20'000),
                    [] (std::span<const Cycle> cs) {
                        const Cycle * four = nullptr;
                        const Cycle * two = nullptr;
                        for (const auto & c : cs) {
                            if (c.length() == 4)
                                four = &c;
                            if (c.length() == 2)
                                two = &c;
                        }
                        return four && two && four->shared_vertices(*two) >= 1;
                    });
            if (r.status != SearchStatus::Found)
                return std::nullopt;
            return r.cycles;
        }

        auto finish_342(const Packing & packing, const vector<Cycle> & cycles, const LengthList & expected) -> Certificate
        {
            auto d = make_certificate(with(packing, cycles));
            vector<Cycle> pair;
            for (int len : { 4, 2 })
                for (const auto & c : cycles)
                    if (c.length() == len)
                        pair.push_back(c);
            auto idx = locate(d.packing, pair);
            int fi = idx[0], ti = idx[1];
            return finish(equalise2_pair(d, fi, ti).packing, expected, "225_333");
        }
    }

    auto flip_225_to_333(const Certificate & d) -> Certificate
    {
        if (d.packing.lambda != 2)
            throw PreconditionError("225_333: host must be 2K_n");
        require_certificate(d, "225_333");
        const auto & cs = d.packing.cycles;
        auto expected = d.claimed - LengthList{ 5, 2, 2 } + LengthList{ 3, 3, 3 };
        bool found = false;
        for (int ci = 0 ; ci < static_cast<int>(cs.size()) ; ++ci) {
            if (cs[ci].length() != 5)
                continue;
            const Cycle & c = cs[ci];
            for (int i1 = 0 ; i1 < static_cast<int>(cs.size()) ; ++i1)
                for (int i2 = 0 ; i2 < static_cast<int>(cs.size()) ; ++i2) {
                    if (i1 == i2 || cs[i1].length() != 2 || cs[i2].length() != 2 || cs[i1].shared_vertices(cs[i2]) != 0)
                        continue;
                    for (int e = 0 ; e < 5 ; ++e) {
                        Vertex u = c[e], v = c[(e + 1) % 5];
                        if (! cs[i1].contains(u) || ! cs[i2].contains(v))
                            continue;
                        found = true;
                        Packing rest = without(d.packing, { ci, i1, i2 });
                        if (auto split = split_342(leave(rest)))
                            return finish_342(rest, *split, expected);

                        // y is opposite the edge uv whichever way C is read, so the
                        // mirrored attempt swaps only the roles of (u,u') and (v,v').
                        Vertex y = c[(e + 3) % 5];
                        Vertex up = cs[i1][0] == u ? cs[i1][1] : cs[i1][0];
                        Vertex vp = cs[i2][0] == v ? cs[i2][1] : cs[i2][0];
                        SwitchOptions options;
                        options.allow_origin_terminus = true;
                        for (auto [a, origin] : { std::pair{ up, u }, std::pair{ vp, v } }) {
                            if (c.contains(a))
                                continue;
                            try {
                                auto s = perform_switch(rest, a, y, origin, options);
                                if (auto split = split_342(leave(s.packing)))
                                    return finish_342(s.packing, *split, expected);
                            }
                            catch (const TransformError &) {
                            }
                        }
                    }
                }
        }
        if (! found)
            throw TransformError("225_333: no 5-cycle edge joins two disjoint 2-cycles");
        throw TransformError("225_333: pattern found but no repacking worked");
    }

    namespace
    {
        struct FlowerShape
        {
            Vertex centre;
            vector<Vertex> petals;      // partner vertex of each 2-cycle
            Cycle cycle;
        };

        // Decompose l into a (2^k)-flower and a cycle of the given length,
        // centred at a vertex of degree centre_degree when that is positive.
        auto find_shape(const Multigraph & l, int petals, int cycle_length, int centre_degree) -> optional<FlowerShape>
        {
            vector<int> lens(petals, 2);
            lens.push_back(cycle_length);
            optional<FlowerShape> out;
            for (Vertex v = 0 ; v < l.order() && ! out ; ++v) {
                if (l.degree(v) < 2 * petals || (centre_degree > 0 && l.degree(v) != centre_degree))
                    continue;
                auto r = decompose_union_into_lengths(l, LengthList(lens), SearchBudget::nodes(20'000),
                        [&] (std::span<const Cycle> cs) {
                            int away = 0;
                            for (const auto & c : cs)
                                if (c.length() == 2 && ! c.contains(v))
                                    ++away;
                            return away <= (cycle_length == 2 ? 1 : 0);
                        });
                if (r.status != SearchStatus::Found)
                    continue;
                FlowerShape s{ v, {}, {} };
                for (const auto & c : r.cycles) {
                    if (c.length() == 2 && c.contains(v) && static_cast<int>(s.petals.size()) < petals)
                        s.petals.push_back(c[0] == v ? c[1] : c[0]);
                    else
                        s.cycle = c;
                }
                out = s;
            }
            return out;
        }

        auto shape_i(const Multigraph & l, int h) -> optional<FlowerShape>
        {
            return find_shape(l, h - 1, h + 2, 2 * h);
        }

        auto shape_ii(const Multigraph & l, int h) -> optional<FlowerShape>
        {
            return find_shape(l, h, h, 0);
        }

        auto path_from(const Cycle & c, Vertex start, int direction, int steps) -> vector<Vertex>
        {
            int len = c.length(), pos = c.position(start);
            vector<Vertex> out;
            for (int s = 0 ; s <= steps ; ++s)
                out.push_back(c[((pos + direction * s) % len + len) % len]);
            return out;
        }

        auto switch_exact(const Packing & p, Vertex a, Vertex b, Vertex c) -> SwitchOutcome
        {
            SwitchOptions options;
            options.allow_origin_terminus = false;
            return perform_switch(p, a, b, c, options);
        }
    }

    auto reduce_flower(const Packing & input, int h, FlowerShapeTrace * trace) -> Packing
    {
        if (h < 2)
            throw PreconditionError("reduce_flower: h must be at least 2");
        if (input.lambda != 2 || input.n < 5)
            throw PreconditionError("reduce_flower: host must be 2K_n with n >= 5");
        Packing p = input;
        auto l = leave(p);
        if (l.edge_count() != 3 * h)
            throw PreconditionError("reduce_flower: leave size is not 3h");
        auto si = shape_i(l, h);
        auto sii = si ? std::nullopt : shape_ii(l, h);
        if (! si && ! sii)
            throw PreconditionError("reduce_flower: leave has neither flower shape");

        bool record = true;
        while (true) {
            if (trace && record) {
                trace->levels.push_back(h);
                trace->shapes.push_back(si ? 'a' : 'b');
            }
            if (h == 2) {
                if (si) {
                    vector<Cycle> pair{ si->cycle, Cycle{ si->centre, si->petals[0] } };
                    auto d = make_certificate(with(p, pair));
                    auto idx = locate(d.packing, pair);
                    return equalise2_pair(d, idx[0], idx[1]).packing;
                }
                vector<Cycle> twos{ Cycle{ sii->centre, sii->petals[0] }, Cycle{ sii->centre, sii->petals[1] }, sii->cycle };
                auto d = make_certificate(with(p, twos));
                auto idx = locate(d.packing, twos);
                return addtwo3s(d, idx[0], idx[1], idx[2]).packing;
            }

            Packing next;
            bool reduced = true;
            if (si) {
                Vertex v = si->centre;
                const Cycle & c = si->cycle;
                vector<Vertex> fv(si->petals.begin(), si->petals.end());
                fv.push_back(v);
                auto in_f = [&] (Vertex q) { return std::find(fv.begin(), fv.end(), q) != fv.end(); };
                auto in_x = [&] (Vertex q) { return in_f(q) && c.contains(q); };
                auto path = path_from(c, v, 1, 3);
                Vertex w = path[1], x = path[2];
                if (in_x(x))
                    next = with(p, { Cycle{ v, w, x } });
                else {
                    Vertex z = -1;
                    for (Vertex q : si->petals)
                        if (! in_x(q)) {
                            z = q;
                            break;
                        }
                    if (z == -1)
                        throw TransformError("reduce_flower: no petal vertex off the cycle");
                    auto s = switch_exact(p, x, z, w);
                    next = with(std::move(s.packing), { Cycle{ z, v, w } });
                }
            }
            else {
                Vertex v = sii->centre;
                const Cycle & c = sii->cycle;
                auto in_f = [&] (Vertex q) {
                    return q == v || std::find(sii->petals.begin(), sii->petals.end(), q) != sii->petals.end();
                };
                vector<Vertex> xs;
                for (Vertex q : c.vertices())
                    if (in_f(q))
                        xs.push_back(q);
                bool v_on = c.contains(v);
                if (h == 3)
                    next = with(p, { c });
                else if (! xs.empty() && ! v_on) {
                    // Subcase 2a.
                    Vertex w = xs[0];
                    auto path = path_from(c, w, 1, 2);
                    Vertex x = path[1];
                    if (in_f(x))
                        next = with(p, { Cycle{ v, w, x } });
                    else {
                        Vertex u = -1;
                        for (Vertex q : sii->petals)
                            if (! c.contains(q)) {
                                u = q;
                                break;
                            }
                        auto s = switch_exact(p, x, u, w);
                        next = with(std::move(s.packing), { Cycle{ u, v, w } });
                    }
                }
                else if (v_on) {
                    // Subcase 2b: walk away from v, preferring a first step outside the flower.
                    int dir = in_f(path_from(c, v, 1, 1)[1]) ? -1 : 1;
                    auto path = path_from(c, v, dir, 3);
                    Vertex w = path[1], x = path[2];
                    if (in_f(x))
                        next = with(p, { Cycle{ v, w, x } });
                    else {
                        Vertex u = -1;
                        for (Vertex q : sii->petals)
                            if (! c.contains(q)) {
                                u = q;
                                break;
                            }
                        auto s = switch_exact(p, x, u, w);
                        next = with(std::move(s.packing), { Cycle{ u, v, w } });
                    }
                }
                else {
                    // Subcase 2c: bring the flower onto the cycle without adding a triangle.
                    Vertex u = sii->petals[0];
                    Vertex w = c[0], x = c[1];
                    auto s = switch_exact(p, x, u, w);
                    next = std::move(s.packing);
                    reduced = false;
                }
            }

            auto nl = leave(next);
            int nh = reduced ? h - 1 : h;
            if (nl.edge_count() != 3 * nh)
                throw TransformError("reduce_flower: leave size did not drop by 3");
            auto ni = shape_i(nl, nh);
            auto nii = ni ? std::nullopt : shape_ii(nl, nh);
            if (! ni && ! nii)
                throw TransformError("reduce_flower: new leave has neither shape (a) nor (b)");
            p = std::move(next);
            record = reduced;
            h = nh;
            si = ni;
            sii = nii;
        }
    }
}
