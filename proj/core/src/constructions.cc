#include <cycdec/constructions.hh>
#include <cycdec/transforms.hh>

#include <algorithm>
#include <functional>
#include <numeric>

using std::optional;
using std::string;
using std::to_string;
using std::vector;

namespace cycdec
{
    namespace
    {
        [[noreturn]] auto fail(const string & what) -> void
        {
            throw ConstructionError(what);
        }

        auto path_graph(const vector<Vertex> & path, int order) -> Multigraph
        {
            Multigraph g(order);
            for (std::size_t i = 0 ; i + 1 < path.size() ; ++i)
                g.add_edge(path[i], path[i + 1]);
            return g;
        }

        auto union_graph(const vector<Cycle> & cycles, int order) -> Multigraph
        {
            Multigraph g(order);
            for (const auto & c : cycles)
                c.add_to(g);
            return g;
        }

        auto simple_path(const vector<Vertex> & path) -> bool
        {
            vector<Vertex> s = path;
            std::sort(s.begin(), s.end());
            return path.size() >= 2 && std::adjacent_find(s.begin(), s.end()) == s.end();
        }

        auto pv(int i) -> Vertex { return prism_vertex(i, false); }
        auto pp(int i) -> Vertex { return prism_vertex(i, true); }

        // Split l into two paths from s to e, each through all of 0..e.
        auto two_spanning_paths(Multigraph l, Vertex s, Vertex e) -> optional<vector<vector<Vertex>>>
        {
            int want = e + 1;
            vector<Vertex> path{ s };
            vector<bool> on(l.order(), false);
            on[s] = true;
            optional<vector<vector<Vertex>>> found;

            auto rest_is_path = [&] (const Multigraph & r) -> optional<vector<Vertex>> {
                vector<Vertex> q{ s };
                Multigraph g = r;
                Vertex cur = s;
                while (cur != e) {
                    Vertex next = -1;
                    for (Vertex w = 0 ; w < g.order() ; ++w)
                        if (g.mult(cur, w) > 0) {
                            next = w;
                            break;
                        }
                    if (next == -1)
                        return std::nullopt;
                    g.remove_edge(cur, next);
                    q.push_back(next);
                    cur = next;
                }
                if (! g.empty() || static_cast<int>(q.size()) != want || ! simple_path(q))
                    return std::nullopt;
                return q;
            };

            std::function<void (Vertex)> dfs = [&] (Vertex cur) {
                if (found)
                    return;
                if (cur == e) {
                    if (static_cast<int>(path.size()) == want)
                        if (auto q = rest_is_path(l))
                            found = vector<vector<Vertex>>{ path, *q };
                    return;
                }
                for (Vertex w = 0 ; w < l.order() && ! found ; ++w)
                    if (! on[w] && l.mult(cur, w) > 0) {
                        l.remove_edge(cur, w);
                        on[w] = true;
                        path.push_back(w);
                        dfs(w);
                        path.pop_back();
                        on[w] = false;
                        l.add_edge(cur, w);
                    }
            };
            dfs(s);
            return found;
        }

        auto complete_path_style(int k, vector<Cycle> cycles) -> JPathDecomposition
        {
            JPathDecomposition d;
            d.host = JHost::Path;
            d.n = k;
            d.cycles = std::move(cycles);
            auto l = j_host_graph(JHost::Path, k) - union_graph(d.cycles, k + 2);
            auto paths = two_spanning_paths(l, 0, k);
            if (! paths)
                fail("path-style leave for k = " + to_string(k) + " does not split into two paths");
            d.paths = std::move(*paths);
            check_j(d);
            return d;
        }

        // Vertices of V_0 and V_{n/2}.
        auto end_class(Vertex v, int n) -> int
        {
            int i = v / 2;
            return i == 0 ? 0 : i == n / 2 ? 1 : -1;
        }

        // Join paths sharing an end vertex until no two do.
        auto merge_paths(vector<vector<Vertex>> paths) -> vector<vector<Vertex>>
        {
            for (bool merged = true ; merged ; ) {
                merged = false;
                for (std::size_t i = 0 ; i < paths.size() && ! merged ; ++i)
                    for (std::size_t j = i + 1 ; j < paths.size() && ! merged ; ++j) {
                        auto a = paths[i], b = paths[j];
                        if (a.front() == b.front() || a.front() == b.back())
                            std::reverse(a.begin(), a.end());
                        if (a.back() == b.back())
                            std::reverse(b.begin(), b.end());
                        if (a.back() != b.front())
                            continue;
                        a.insert(a.end(), b.begin() + 1, b.end());
                        paths[i] = std::move(a);
                        paths.erase(paths.begin() + j);
                        merged = true;
                    }
            }
            return paths;
        }

        auto prism_part(int n, vector<Cycle> cycles, vector<vector<Vertex>> paths) -> JPathDecomposition
        {
            JPathDecomposition d;
            d.host = JHost::Prism;
            d.n = n;
            d.cycles = std::move(cycles);
            d.paths = std::move(paths);
            d.plus = std::all_of(d.paths.begin(), d.paths.end(), [&] (const auto & p) {
                int a = end_class(p.front(), n), b = end_class(p.back(), n);
                return a != -1 && b != -1 && a != b;
            });
            check_j(d);
            return d;
        }

        auto range(int from, int to) -> vector<int>
        {
            vector<int> r;
            for (int i = from ; i <= to ; ++i)
                r.push_back(i);
            return r;
        }

        auto descending(int from, int to) -> vector<int>
        {
            vector<int> r;
            for (int i = from ; i >= to ; --i)
                r.push_back(i);
            return r;
        }

        auto circ12(int n) -> Multigraph
        {
            vector<int> d{ 1, 2 };
            return circulant(n, d);
        }

        auto circ12_single_ordered(int n, const vector<int> & lengths) -> vector<Cycle>
        {
            if (n < 5)
                fail("circ12_single: n must be at least 5");
            if (std::accumulate(lengths.begin(), lengths.end(), 0) != n)
                fail("circ12_single: lengths must sum to n");
            vector<Cycle> out;
            int s = 0;
            for (int m : lengths) {
                if (m < 3 || m > n)
                    fail("circ12_single: lengths must lie in [3, n]");
                vector<Vertex> seq;
                for (int o = 0 ; o < m ; o += 2)
                    seq.push_back(s + o);
                for (int o = (m % 2 == 1 ? m - 2 : m - 1) ; o >= 1 ; o -= 2)
                    seq.push_back(s + o);
                out.emplace_back(std::move(seq));
                s += m;
            }
            auto l = circ12(n) - union_graph(out, n);
            Cycle h;
            try {
                h = cycle_from_graph(l);
            }
            catch (const std::logic_error &) {
                fail("circ12_single: leave is not a cycle");
            }
            if (h.length() != n)
                fail("circ12_single: leave is not an n-cycle");
            out.push_back(h);
            return out;
        }

        auto check_system(const Multigraph & host, const vector<Cycle> & cycles, const LengthList & expected,
                const char * what) -> void
        {
            for (const auto & c : cycles)
                if (! c.valid(host.order()))
                    fail(string(what) + ": invalid cycle " + c.to_string());
            if (! (union_graph(cycles, host.order()) == host))
                fail(string(what) + ": cycles do not decompose the host");
            vector<int> ls;
            for (const auto & c : cycles)
                ls.push_back(c.length());
            if (! (LengthList(ls) == expected))
                fail(string(what) + ": produced " + LengthList(ls).to_string() + " instead of " + expected.to_string());
        }

        // Greedy partition of a list into single even entries and pairs of odd entries.
        auto even_odd_parts(const LengthList & m) -> vector<vector<int>>
        {
            vector<vector<int>> parts;
            vector<int> odds;
            for (int v : m.values())
                if (v % 2 == 0)
                    parts.push_back({ v });
                else
                    odds.push_back(v);
            if (odds.size() % 2 != 0)
                fail("partition: odd number of odd entries");
            for (std::size_t i = 0 ; i < odds.size() ; i += 2)
                parts.push_back({ odds[i], odds[i + 1] });
            return parts;
        }

        auto index_of_length(const Packing & p, int len, int skip = -1) -> int
        {
            for (int i = 0 ; i < static_cast<int>(p.cycles.size()) ; ++i)
                if (i != skip && p.cycles[i].length() == len)
                    return i;
            return -1;
        }

        auto partner_map(const Matching & m, int n) -> vector<Vertex>
        {
            vector<Vertex> partner(n, -1);
            for (auto [a, b] : m) {
                partner[a] = b;
                partner[b] = a;
            }
            return partner;
        }
    }

    auto prism_vertex(int i, bool primed) -> Vertex
    {
        return 2 * i + (primed ? 1 : 0);
    }

    auto JPathDecomposition::lengths() const -> LengthList
    {
        vector<int> v;
        for (const auto & c : cycles)
            v.push_back(c.length());
        return LengthList(std::move(v));
    }

    auto JPathDecomposition::implicit_matching() const -> vector<Edge>
    {
        if (host != JHost::Prism)
            return {};
        auto u = union_graph(cycles, order());
        for (const auto & p : paths)
            u += path_graph(p, order());
        auto j = j_host_graph(host, n);
        if (! j.is_subgraph_of(u))
            fail("prism decomposition does not cover J_n");
        auto rest = u - j;
        vector<Edge> out;
        for (auto [a, b] : rest.edges())
            for (int k = 0 ; k < rest.mult(a, b) ; ++k)
                out.emplace_back(a, b);
        return out;
    }

    auto j_host_graph(JHost host, int n) -> Multigraph
    {
        if (n < 1 || (host == JHost::Prism && n % 2 != 0))
            fail("J-graph parameter out of range");
        Multigraph g(n + 2);
        if (host == JHost::Path)
            for (int i = 0 ; i < n ; ++i) {
                g.add_edge(i, i + 1, 2);
                g.add_edge(i, i + 2, 2);
            }
        else
            for (int i = 0 ; i < n / 2 ; ++i) {
                g.add_edge(pv(i), pv(i + 1));
                g.add_edge(pv(i), pp(i));
                g.add_edge(pp(i), pp(i + 1));
            }
        return g;
    }

    auto check_j(const JPathDecomposition & d) -> void
    {
        int order = d.order();
        for (const auto & c : d.cycles)
            if (! c.valid(order))
                fail("J decomposition: invalid cycle " + c.to_string());
        if (d.paths.size() != 2)
            fail("J decomposition: needs exactly two paths");
        for (const auto & p : d.paths)
            if (! simple_path(p))
                fail("J decomposition: a path repeats a vertex");

        if (d.host == JHost::Path) {
            auto u = union_graph(d.cycles, order);
            for (const auto & p : d.paths) {
                if (p.front() != 0 || p.back() != d.n || static_cast<int>(p.size()) != d.n + 1)
                    fail("J decomposition: path does not run 0 -> n through 0..n");
                u += path_graph(p, order);
            }
            if (! (u == j_host_graph(JHost::Path, d.n)))
                fail("J decomposition: parts do not decompose 2J_n");
            return;
        }

        for (const auto & c : d.cycles)
            for (Vertex v : c.vertices())
                if (v / 2 == d.n / 2)
                    fail("J decomposition: cycle meets V_{n/2}");
        vector<int> seen(order, 0);
        long edges = 0;
        bool plus = true;
        for (const auto & p : d.paths) {
            for (Vertex v : p)
                if (seen[v]++)
                    fail("J decomposition: paths are not vertex disjoint");
            int a = end_class(p.front(), d.n), b = end_class(p.back(), d.n);
            if (a == -1 || b == -1)
                fail("J decomposition: path end outside V_0 and V_{n/2}");
            plus = plus && a != b;
            edges += static_cast<long>(p.size()) - 1;
        }
        if (edges != d.n)
            fail("J decomposition: paths have " + to_string(edges) + " edges, not n");
        if (plus != d.plus)
            fail("J decomposition: end label does not match the paths");
        Multigraph i(order);
        for (auto [a, b] : d.implicit_matching())
            i.add_edge(a, b);
        for (Vertex v = 0 ; v < order ; ++v)
            if (i.degree(v) != (v / 2 < d.n / 2 ? 1 : 0))
                fail("J decomposition: implicit I is not 1-regular on V_0..V_{n/2-1}");
    }

    auto j_path_odd(int k) -> JPathDecomposition
    {
        if (k < 1 || k % 2 == 0)
            fail("j_path_odd: k must be odd and positive");
        if (k == 1)
            return complete_path_style(1, { Cycle{ 0, 2 } });
        vector<Vertex> a;
        for (int i = 0 ; i <= k - 1 ; i += 2)
            a.push_back(i);
        for (int i = k ; i >= 1 ; i -= 2)
            a.push_back(i);
        vector<Cycle> cycles{ Cycle(a), Cycle{ k - 1, k + 1 } };
        for (int i = 2 ; i <= k - 3 ; i += 2)
            cycles.push_back(Cycle{ i, i + 1 });
        return complete_path_style(k, std::move(cycles));
    }

    auto j_path_two_odds(int k1, int k2) -> JPathDecomposition
    {
        if (k1 < 1 || k2 < 1)
            fail("j_path_two_odds: k1 and k2 must be positive");
        int k = 2 * k1 + 2 * k2;
        vector<Vertex> a1, a2;
        for (int i = 0 ; i <= 2 * k1 ; i += 2)
            a1.push_back(i);
        for (int i = 2 * k1 - 1 ; i >= 1 ; i -= 2)
            a1.push_back(i);
        for (int i = 2 * k1 ; i <= k ; i += 2)
            a2.push_back(i);
        for (int i = k - 1 ; i >= 2 * k1 + 1 ; i -= 2)
            a2.push_back(i);
        vector<Cycle> cycles{ Cycle(a1), Cycle(a2), Cycle{ k - 1, k + 1 } };
        for (int i = 2 ; i <= 2 * k1 - 2 ; i += 2)
            cycles.push_back(Cycle{ i, i + 1 });
        for (int i = 2 * k1 + 1 ; i <= k - 3 ; i += 2)
            cycles.push_back(Cycle{ i, i + 1 });
        return complete_path_style(k, std::move(cycles));
    }

    auto j_prism_even_star(int k) -> JPathDecomposition
    {
        if (k < 2)
            fail("j_prism_even_star: k must be at least 2");
        vector<Vertex> a;
        if (k == 2)
            a = { pv(0), pv(1), pp(0), pp(1) };
        else {
            a = { pp(1), pp(0), pv(0), pv(1) };
            for (int j = 2 ; j <= k - 1 ; ++j) {
                a.push_back(pp(j));
                a.push_back(pv(j));
            }
        }
        vector<Vertex> p2;
        for (int j : descending(k, 1))
            p2.push_back(pv(j));
        for (int j : range(1, k))
            p2.push_back(pp(j));
        return prism_part(2 * k, { Cycle(a) }, { { pv(0), pp(0) }, p2 });
    }

    auto j_prism_two_odds_star(int k1, int k2) -> JPathDecomposition
    {
        if (k1 < 2 || k2 < 1)
            fail("j_prism_two_odds_star: needs k1 >= 2 and k2 >= 1");
        int k = k1 + k2 + 1;
        vector<Vertex> a1{ pp(1), pp(0), pv(0), pv(1) };
        for (int j = 2 ; j <= k1 - 1 ; ++j) {
            a1.push_back(pp(j));
            a1.push_back(pv(j));
        }
        a1.push_back(pv(k1));
        vector<Vertex> a2{ pp(k1) };
        for (int j = k1 + 1 ; j <= k - 1 ; ++j) {
            a2.push_back(pp(j));
            a2.push_back(pv(j));
        }
        vector<Vertex> p2;
        for (int j : descending(k, k1))
            p2.push_back(pv(j));
        for (int j : descending(k1, 1))
            p2.push_back(pp(j));
        for (int j : range(1, k1 - 1))
            p2.push_back(pv(j));
        for (int j : range(k1 + 1, k))
            p2.push_back(pp(j));
        return prism_part(2 * k, { Cycle(a1), Cycle(a2) }, { { pv(0), pp(0) }, p2 });
    }

    auto j_prism_small_star(int n) -> JPathDecomposition
    {
        auto path = [] (std::initializer_list<std::pair<int, bool>> vs) {
            vector<Vertex> p;
            for (auto [i, primed] : vs)
                p.push_back(prism_vertex(i, primed));
            return p;
        };
        auto cyc = [&] (std::initializer_list<std::pair<int, bool>> vs) { return Cycle(path(vs)); };
        const bool u = false, p = true;
        switch (n) {
            case 4:
                return prism_part(4, { cyc({ { 0, u }, { 1, u } }), cyc({ { 0, p }, { 1, p } }) },
                        { path({ { 0, u }, { 0, p } }), path({ { 2, u }, { 1, u }, { 1, p }, { 2, p } }) });
            case 8:
                return prism_part(8, { cyc({ { 0, u }, { 1, u } }), cyc({ { 0, p }, { 1, p }, { 2, p } }),
                            cyc({ { 2, u }, { 3, u }, { 3, p } }) },
                        { path({ { 0, u }, { 0, p } }),
                            path({ { 4, u }, { 3, u }, { 1, p }, { 1, u }, { 2, u }, { 2, p }, { 3, p }, { 4, p } }) });
            case 12:
                return prism_part(12, { cyc({ { 0, u }, { 1, u }, { 2, u } }), cyc({ { 0, p }, { 1, p }, { 2, p } }),
                            cyc({ { 3, u }, { 3, p }, { 4, p } }), cyc({ { 4, u }, { 5, u }, { 5, p } }) },
                        { path({ { 0, u }, { 0, p } }),
                            path({ { 6, u }, { 5, u }, { 1, p }, { 1, u }, { 3, p }, { 2, p }, { 2, u }, { 3, u },
                                { 4, u }, { 4, p }, { 5, p }, { 6, p } }) });
            default:
                fail("j_prism_small_star: n must be 4, 8 or 12");
        }
    }

    auto j_prism_even_plus(int k) -> JPathDecomposition
    {
        if (k < 1)
            fail("j_prism_even_plus: k must be positive");
        vector<Vertex> a;
        if (k == 1)
            a = { pv(0), pp(0) };
        else
            for (int j = 0 ; j <= k - 1 ; ++j) {
                a.push_back(pp(j));
                a.push_back(pv(j));
            }
        vector<Vertex> p1, p2;
        for (int j : range(0, k)) {
            p1.push_back(pv(j));
            p2.push_back(pp(j));
        }
        return prism_part(2 * k, { Cycle(a) }, { p1, p2 });
    }

    auto j_prism_two_odds_plus(int k1, int k2) -> JPathDecomposition
    {
        if (k1 < 1 || k2 < 1)
            fail("j_prism_two_odds_plus: needs k1, k2 >= 1");
        int k = k1 + k2 + 1;
        vector<Vertex> a1;
        for (int j = 0 ; j <= k1 - 1 ; ++j) {
            a1.push_back(pp(j));
            a1.push_back(pv(j));
        }
        a1.push_back(pv(k1));
        vector<Vertex> a2{ pp(k1) };
        for (int j = k1 + 1 ; j <= k - 1 ; ++j) {
            a2.push_back(pp(j));
            a2.push_back(pv(j));
        }
        vector<Vertex> p1, p2;
        for (int j : range(0, k1 - 1))
            p1.push_back(pv(j));
        for (int j : range(k1 + 1, k))
            p1.push_back(pp(j));
        for (int j : range(0, k1))
            p2.push_back(pp(j));
        for (int j : range(k1, k))
            p2.push_back(pv(j));
        return prism_part(2 * k, { Cycle(a1), Cycle(a2) }, { p1, p2 });
    }

    auto concatenate_j(const vector<JPathDecomposition> & parts) -> JPathDecomposition
    {
        if (parts.empty())
            fail("concatenate_j: no parts");
        JHost host = parts.front().host;
        int total = 0;
        for (std::size_t i = 0 ; i < parts.size() ; ++i) {
            if (parts[i].host != host)
                fail("concatenate_j: mixed host styles");
            if (host == JHost::Prism && i + 1 < parts.size() && ! parts[i].plus)
                fail("concatenate_j: only the last prism part may be labelled *");
            total += parts[i].n;
        }

        JPathDecomposition out;
        out.host = host;
        out.n = total;
        out.plus = host == JHost::Prism && parts.back().plus;
        int offset = 0;
        vector<vector<Vertex>> pieces;
        for (const auto & part : parts) {
            check_j(part);
            vector<Vertex> map(part.order());
            std::iota(map.begin(), map.end(), offset);
            for (const auto & c : part.cycles)
                out.cycles.push_back(c.relabelled(map));
            for (std::size_t j = 0 ; j < part.paths.size() ; ++j) {
                vector<Vertex> p;
                for (Vertex v : part.paths[j])
                    p.push_back(v + offset);
                if (host == JHost::Path) {
                    if (out.paths.size() <= j)
                        out.paths.push_back(p);
                    else
                        out.paths[j].insert(out.paths[j].end(), p.begin() + 1, p.end());
                }
                else
                    pieces.push_back(std::move(p));
            }
            offset += part.n;
        }
        if (host == JHost::Prism)
            out.paths = merge_paths(std::move(pieces));
        check_j(out);
        return out;
    }

    auto circ12_close(const JPathDecomposition & d) -> vector<Cycle>
    {
        if (d.host != JHost::Path)
            fail("circ12_close: needs a path-style decomposition");
        int n = d.n;
        if (n < 5)
            fail("circ12_close: n must be at least 5");
        check_j(d);
        for (const auto & c : d.cycles)
            for (int i : { 0, 1 })
                if (c.contains(i) && c.contains(i + n))
                    fail("circ12_close: a cycle contains both " + to_string(i) + " and " + to_string(i + n));
        vector<Vertex> map(n + 2);
        std::iota(map.begin(), map.end(), 0);
        map[n] = 0;
        map[n + 1] = 1;
        vector<Cycle> out;
        for (const auto & c : d.cycles)
            out.push_back(c.relabelled(map));
        for (const auto & p : d.paths)
            out.emplace_back(vector<Vertex>(p.begin(), p.end() - 1));
        vector<int> ls;
        for (const auto & c : out)
            ls.push_back(c.length());
        auto twice = circ12(n);
        twice += circ12(n);
        check_system(twice, out, LengthList(ls), "circ12_close");
        return out;
    }

    auto circ12_single(int n, const LengthList & m) -> vector<Cycle>
    {
        return circ12_single_ordered(n, vector<int>(m.values().begin(), m.values().end()));
    }

    auto circ12_two_hams(int n, const LengthList & m) -> vector<Cycle>
    {
        int t = m.size();
        if (n < 5 || m.sum() != 2 * n || 2 * m.nu(2) < n || m.min() < 2 || m.max() > n)
            fail("circ12_two_hams: needs n >= 5, parts in [2,n], sum 2n and 2 nu_2 >= n");
        auto mp = m - LengthList::repeated(2, n - t);
        vector<JPathDecomposition> pieces;
        for (const auto & part : even_odd_parts(mp))
            if (part.size() == 1)
                pieces.push_back(j_path_odd(part[0] - 1));
            else
                pieces.push_back(j_path_two_odds((part[0] - 1) / 2, (part[1] - 1) / 2));
        auto out = circ12_close(concatenate_j(pieces));
        auto twice = circ12(n);
        twice += circ12(n);
        check_system(twice, out, m + LengthList{ n, n }, "circ12_two_hams");
        return out;
    }

    auto circ12_three_hams(int n, const LengthList & m) -> vector<Cycle>
    {
        if (n < 5 || m.sum() != n || m.min() < 2 || m.max() > n)
            fail("circ12_three_hams: needs n >= 5, parts in [2,n] and sum n");
        auto twice = circ12(n);
        twice += circ12(n);
        auto expected = m + LengthList{ n, n, n };
        int nu2 = m.nu(2);
        if (nu2 == 0) {
            auto out = circ12_single(n, m);
            auto hams = circ12_single(n, LengthList{ n });
            out.insert(out.end(), hams.begin(), hams.end());
            check_system(twice, out, expected, "circ12_three_hams");
            return out;
        }
        if (2 * nu2 == n)
            return circ12_two_hams(n, m + LengthList{ n });

        int mm = 2, h = (nu2 - 2) / 2;
        if (nu2 % 2 == 1) {
            h = (nu2 - 1) / 2;
            for (int v : m.values())
                if (v >= 3)
                    mm = v;
        }
        auto rest = m - LengthList{ mm } - LengthList::repeated(2, 2 * h + 1);
        vector<int> order(h, 4);
        order.push_back(mm + 2);
        order.insert(order.end(), rest.values().begin(), rest.values().end());
        auto dp = circ12_single_ordered(n, order);

        auto fallback = [&] {
            auto r = decompose_union_into_lengths(twice, expected, SearchBudget::nodes(5'000'000));
            if (r.status == SearchStatus::BudgetExhausted)
                throw BudgetExceeded("circ12_three_hams: search budget exhausted");
            if (r.status != SearchStatus::Found)
                fail("circ12_three_hams: prescribed 1-fold shape missing and search failed");
            return r.cycles;
        };
        for (int i = 0 ; i < h ; ++i)
            if (! same_cycle(dp[i], Cycle{ 4 * i, 4 * i + 1, 4 * i + 3, 4 * i + 2 }))
                return fallback();
        const Cycle & c = dp[h];
        int b = 4 * h;
        if (! c.has_edge(b, b + 2) || ! c.has_edge(b, b + 1) || ! c.has_edge(b + 1, b + 3))
            return fallback();

        vector<Vertex> cstar;
        for (Vertex v : c.vertices())
            if (v != b && v != b + 1)
                cstar.push_back(v);

        vector<Vertex> h1 = range(0, n - 1);
        if (n % 2 == 0)
            std::swap(h1[n - 2], h1[n - 1]);
        auto h2 = cycle_from_graph(circ12(n) - Cycle(h1).as_graph(n));
        if (h2.length() != n)
            fail("circ12_three_hams: complement of H1 is not an n-cycle");
        for (int i = 0 ; i <= 4 * h ; i += 4)
            std::swap(h1[i + 1], h1[i + 2]);

        vector<Cycle> out(dp.begin() + h + 1, dp.end());
        out.emplace_back(std::move(cstar));
        out.emplace_back(std::move(h1));
        out.push_back(h2);
        for (int i = 0 ; i <= 4 * h ; i += 2)
            out.push_back(Cycle{ i, i + 1 });
        check_system(twice, out, expected, "circ12_three_hams");
        return out;
    }

    auto twos_and_hams(int n, int a, int b, const SearchBudget & budget, HamiltonCache * cache) -> vector<Cycle>
    {
        if (a < 0 || b < 0 || 2L * a + 2L * n * b != static_cast<long>(n) * (n - 5) || 2 * b > std::max(0, n - 5))
            fail("twos_and_hams: needs 2a + 2nb = n(n-5) and b <= floor((n-5)/2)");
        if (n <= 5)
            return {};
        vector<int> dists = range(3, n / 2);
        auto host = circulant(n, dists);
        host += circulant(n, dists);
        vector<Cycle> out;
        if (b > 0) {
            auto hd = hamilton_decompose_circulant(n, dists, budget, cache);
            if (! hd || static_cast<int>(hd->cycles.size()) < b)
                throw BudgetExceeded("twos_and_hams: no Hamilton decomposition of the circulant within budget");
            for (int i = 0 ; i < b ; ++i) {
                out.push_back(hd->cycles[i]);
                out.push_back(hd->cycles[i]);
            }
        }
        auto l = host - union_graph(out, n);
        for (auto [u, v] : l.edges())
            if (l.mult(u, v) % 2 == 0)
                for (int k = 0 ; k < l.mult(u, v) / 2 ; ++k)
                    out.push_back(Cycle{ u, v });
        auto expected = LengthList::repeated(2, a) + LengthList::repeated(n, 2 * b);
        check_system(host, out, expected, "twos_and_hams");
        return out;
    }

    auto ham_and_matching(int n, const LengthList & m, const SearchBudget & budget) -> HamAndMatching
    {
        if (n < 6 || n % 2 != 0 || m.sum() != n || m.min() < 2)
            fail("ham_and_matching: needs even n >= 6, parts >= 2 and sum n");
        HamAndMatching out;
        vector<int> dists{ n / 2 - 1, n / 2 };
        if (m == LengthList{ 3, 3 }) {
            out.matching = { { 0, 1 }, { 2, 3 }, { 4, 5 } };
            Multigraph g = circulant(n, dists);
            for (auto [a, b] : out.matching)
                g.add_edge(a, b);
            auto r = decompose_union_into_lengths(g, LengthList{ 6, 3, 3 }, budget);
            if (r.status == SearchStatus::BudgetExhausted)
                throw BudgetExceeded("ham_and_matching: search budget exhausted");
            if (r.status != SearchStatus::Found)
                fail("ham_and_matching: no (3,3,6)-decomposition of K_6 - F");
            out.system = CycleSystem{ g, r.cycles };
            return out;
        }

        // Y: the part built with a * label.
        LengthList y;
        for (int v : m.values())
            if (v % 2 == 0 && v >= 4 && y.empty())
                y = LengthList{ v };
        if (y.empty()) {
            int big = 0, other = 0;
            for (int v : m.values())
                if (v % 2 == 1 && v >= 5 && big == 0)
                    big = v;
            if (big) {
                bool skipped = false;
                for (int v : m.values()) {
                    if (v == big && ! skipped) {
                        skipped = true;
                        continue;
                    }
                    if (v % 2 == 1 && other == 0)
                        other = v;
                }
                y = LengthList{ big, other };
            }
        }
        if (y.empty()) {
            if (m.nu(2) >= 2)
                y = LengthList{ 2, 2 };
            else if (m.nu(2) == 1 && m.nu(3) >= 2)
                y = LengthList{ 3, 3, 2 };
            else if (m.nu(3) >= 4)
                y = LengthList{ 3, 3, 3, 3 };
        }
        if (y.empty() || ! m.contains(y))
            fail("ham_and_matching: no admissible final part for " + m.to_string());

        JPathDecomposition last;
        if (y.size() == 1)
            last = j_prism_even_star(y.max() / 2);
        else if (y.size() == 2 && y.max() >= 5)
            last = j_prism_two_odds_star((y.max() - 1) / 2, (y.min() - 1) / 2);
        else
            last = j_prism_small_star(static_cast<int>(y.sum()));

        vector<JPathDecomposition> parts;
        auto x = m - y;
        if (! x.empty()) {
            for (const auto & part : even_odd_parts(x)) {
                if (part.size() == 1)
                    parts.push_back(j_prism_even_plus(part[0] / 2));
                else
                    parts.push_back(j_prism_two_odds_plus((part[0] - 1) / 2, (part[1] - 1) / 2));
            }
        }
        parts.push_back(last);
        auto jd = concatenate_j(parts);

        // Glue V_{n/2} onto V_0, then map i -> i(n/2-1), i' -> i(n/2-1) + n/2.
        int half = n / 2;
        vector<Vertex> map(n + 2);
        for (int i = 0 ; i <= half ; ++i) {
            int j = i, primed = 0;
            if (i == half) {
                j = 0;
                primed = (n % 4 == 0) ? 1 : 0;
            }
            int base = static_cast<int>((static_cast<long>(j) * (half - 1)) % n);
            map[pv(i)] = primed ? (base + half) % n : base;
            map[pp(i)] = primed ? base : (base + half) % n;
        }
        auto glue = [&] (const Multigraph & g) {
            Multigraph r(n);
            for (auto [a, b] : g.edges())
                if (a < b)
                    r.add_edge(map[a], map[b], g.mult(a, b));
            return r;
        };
        auto circ = circulant(n, dists);
        if (! (glue(j_host_graph(JHost::Prism, n)) == circ))
            fail("ham_and_matching: glued J_n is not the circulant");

        vector<Cycle> cycles;
        for (const auto & c : jd.cycles)
            cycles.push_back(c.relabelled(map));
        Multigraph hp(n + 2);
        for (const auto & p : jd.paths)
            hp += path_graph(p, n + 2);
        auto ham = cycle_from_graph(glue(hp));
        if (ham.length() != n)
            fail("ham_and_matching: glued paths are not an n-cycle");
        cycles.push_back(ham);

        Multigraph g = circ;
        for (auto [a, b] : jd.implicit_matching()) {
            out.matching.push_back({ std::min(map[a], map[b]), std::max(map[a], map[b]) });
            g.add_edge(map[a], map[b]);
        }
        Multigraph im(n);
        for (auto [a, b] : out.matching)
            im.add_edge(a, b);
        for (Vertex v = 0 ; v < n ; ++v)
            if (im.degree(v) != 1)
                fail("ham_and_matching: I is not a perfect matching");
        check_system(g, cycles, m + LengthList{ n }, "ham_and_matching");
        out.system = CycleSystem{ g, cycles };
        return out;
    }

    auto sum_list_to_many(int n, const LengthList & m) -> TwoWays
    {
        int total = static_cast<int>(m.sum());
        if (total < 3 || total > n || m.min() < 2)
            fail("sum_list_to_many: needs parts >= 2 and 3 <= sum M <= n");
        TwoWays out;
        out.graph = Multigraph(n);
        int t = m.size();
        if (t == 1) {
            Cycle c(range(0, total - 1)), h(range(0, n - 1));
            out.many = { c, h };
            out.one = { c, h };
            c.add_to(out.graph);
            h.add_to(out.graph);
            return out;
        }

        vector<Vertex> u(t), v(t), w(t);
        vector<vector<Vertex>> q(t);
        int base = 0;
        for (int i = 0 ; i < t ; ++i) {
            int mi = m.values()[i];
            u[i] = base;
            v[i] = base + 1;
            w[i] = base + mi - 1;
            q[i] = range(base + 1, base + mi - 1);
            base += mi;
        }
        Multigraph P(n), Q(n), R(n), X(n), Y(n);
        for (int i = 0 ; i < t ; ++i) {
            P.add_edge(u[i], v[i]);
            R.add_edge(w[i], u[i]);
            Q += path_graph(q[i], n);
            X.add_edge(u[i], v[(i + 1) % t]);
        }
        for (int i = 0 ; i + 2 < t ; ++i)
            Y.add_edge(w[i], u[i + 1]);
        Y.add_edge(w[t - 2], w[t - 1]);
        vector<Vertex> yt{ u[t - 1] };
        for (int i = total ; i < n ; ++i)
            yt.push_back(i);
        yt.push_back(u[0]);
        Y += path_graph(yt, n);

        auto as_cycle = [&] (const Multigraph & g, int len, const char * what) {
            Cycle c;
            try {
                c = cycle_from_graph(g);
            }
            catch (const std::logic_error &) {
                fail(string("sum_list_to_many: ") + what + " is not a cycle");
            }
            if (c.length() != len)
                fail(string("sum_list_to_many: ") + what + " has the wrong length");
            return c;
        };
        for (int i = 0 ; i < t ; ++i) {
            Multigraph ci(n);
            ci.add_edge(u[i], v[i]);
            ci.add_edge(w[i], u[i]);
            ci += path_graph(q[i], n);
            out.many.push_back(as_cycle(ci, m.values()[i], "C_i"));
        }
        out.many.push_back(as_cycle(Q + X + Y, n, "H"));
        out.one.push_back(as_cycle(Q + R + X, total, "C"));
        out.one.push_back(as_cycle(P + Q + Y, n, "H'"));
        out.graph = P + Q + Q + R + X + Y;
        if (out.graph.max_mult() > 2)
            fail("sum_list_to_many: graph is not inside 2K_n");
        check_system(out.graph, out.many, m + LengthList{ n }, "sum_list_to_many");
        check_system(out.graph, out.one, LengthList{ total, n }, "sum_list_to_many");
        return out;
    }

    auto align_cycle(const Packing & p, int from, const Cycle & to) -> Packing
    {
        const Cycle & c = p.cycles.at(from);
        if (c.length() != to.length())
            fail("align_cycle: length mismatch");
        vector<Vertex> map(p.n, -1);
        vector<bool> taken(p.n, false);
        for (int i = 0 ; i < c.length() ; ++i) {
            map[c[i]] = to[i];
            taken[to[i]] = true;
        }
        Vertex next = 0;
        for (Vertex x = 0 ; x < p.n ; ++x)
            if (map[x] == -1) {
                while (taken[next])
                    ++next;
                map[x] = next;
                taken[next] = true;
            }
        return apply_vertex_map(p, map);
    }

    auto three_lists(int n, const Certificate & d1, const Certificate & d2, const LengthList & m3) -> Certificate
    {
        if (n % 2 == 0)
            fail("three_lists: n must be odd");
        if (d1.claimed.nu(n) < 1)
            throw PreconditionError("three_lists: M1 needs an n-cycle");
        if (d1.packing.lambda != 1 || d2.packing.lambda != 1 || d1.packing.n != n || d2.packing.n != n)
            fail("three_lists: sub-certificates must decompose K_n");
        int mm = static_cast<int>(m3.sum());
        auto tw = sum_list_to_many(n, m3);
        int hi = index_of_length(d1.packing, n);
        int ci = index_of_length(d2.packing, mm);
        if (ci < 0)
            fail("three_lists: second certificate lacks a cycle of length sum M3");
        auto p1 = align_cycle(d1.packing, hi, tw.one[1]);
        auto p2 = align_cycle(d2.packing, ci, tw.one[0]);
        Packing out;
        out.lambda = 2;
        out.n = n;
        for (int i = 0 ; i < static_cast<int>(p1.cycles.size()) ; ++i)
            if (i != hi)
                out.cycles.push_back(p1.cycles[i]);
        for (int i = 0 ; i < static_cast<int>(p2.cycles.size()) ; ++i)
            if (i != ci)
                out.cycles.push_back(p2.cycles[i]);
        out.cycles.insert(out.cycles.end(), tw.many.begin(), tw.many.end());
        auto cert = make_certificate(std::move(out));
        auto expected = d1.claimed + (d2.claimed - LengthList{ mm }) + m3;
        if (auto v = verify(cert); ! v || ! (cert.claimed == expected))
            fail("three_lists: glued decomposition rejected: " + v.detail);
        return cert;
    }

    auto three_lists_one_factor(int n, const Certificate & d2, const LengthList & m3, OneFactorVariant variant,
            const SearchBudget & budget, HamiltonCache * cache) -> Certificate
    {
        if (n < 6 || n % 2 != 0)
            fail("three_lists_one_factor: n must be even and at least 6");
        if (m3.nu(n) < 1)
            throw PreconditionError("three_lists_one_factor: M3 needs an n-cycle");
        if (d2.packing.lambda != 1 || d2.packing.n != n || ! d2.packing.matching)
            fail("three_lists_one_factor: second certificate must decompose K_n minus a matching");
        if (variant == OneFactorVariant::SwapFour && (m3.nu(2) < 1 || d2.claimed.nu(4) < 1))
            throw PreconditionError("three_lists_one_factor: variant (i) needs a 2 in M3 and a 4 in M2");
        if (variant == OneFactorVariant::SwapFive && (m3.nu(2) < 2 || d2.claimed.nu(5) < 1))
            throw PreconditionError("three_lists_one_factor: variant (ii) needs two 2s in M3 and a 5 in M2");

        auto hd = hamilton_decompose_circulant(n, range(1, n / 2 - 2), budget, cache);
        if (! hd)
            throw BudgetExceeded("three_lists_one_factor: no Hamilton decomposition of K_n - <{n/2-1,n/2}>_n within budget");
        if (hd->matching)
            fail("three_lists_one_factor: unexpected 1-factor in the Hamilton decomposition");
        auto hm = ham_and_matching(n, m3 - LengthList{ n }, budget);

        // Relabel d2 so that its matching becomes I, steering chosen vertices onto 2-cycles.
        const auto & dm = *d2.packing.matching;
        auto partner = partner_map(dm, n);
        vector<Cycle> twos;
        for (const auto & c : hm.system.cycles)
            if (c.length() == 2)
                twos.push_back(c);
        vector<Vertex> map(n, -1);
        vector<bool> used_i(hm.matching.size(), false);
        auto pin = [&] (Vertex a, Vertex x, Vertex y) {
            for (std::size_t j = 0 ; j < hm.matching.size() ; ++j) {
                auto [p, q] = hm.matching[j];
                if (! used_i[j] && ((p == x && q == y) || (p == y && q == x))) {
                    used_i[j] = true;
                    map[a] = x;
                    map[partner[a]] = y;
                    return;
                }
            }
            fail("three_lists_one_factor: 2-cycle is not on a matching edge");
        };
        if (variant == OneFactorVariant::SwapFour) {
            const Cycle & c = d2.packing.cycles[index_of_length(d2.packing, 4)];
            pin(c[0], twos[0][0], twos[0][1]);
        }
        else if (variant == OneFactorVariant::SwapFive) {
            const Cycle & c = d2.packing.cycles[index_of_length(d2.packing, 5)];
            pin(c[0], twos[0][0], twos[0][1]);
            pin(c[1], twos[1][0], twos[1][1]);
        }
        std::size_t j = 0;
        for (auto [a, b] : dm) {
            if (map[a] != -1)
                continue;
            while (used_i[j])
                ++j;
            used_i[j] = true;
            map[a] = hm.matching[j].first;
            map[b] = hm.matching[j].second;
        }
        auto p2 = apply_vertex_map(d2.packing, map);

        Packing out;
        out.lambda = 2;
        out.n = n;
        out.cycles = hd->cycles;
        out.cycles.insert(out.cycles.end(), p2.cycles.begin(), p2.cycles.end());
        out.cycles.insert(out.cycles.end(), hm.system.cycles.begin(), hm.system.cycles.end());
        auto cert = make_certificate(std::move(out));
        auto base = LengthList::repeated(n, n / 2 - 2) + d2.claimed + m3;
        if (auto v = verify(cert); ! v || ! (cert.claimed == base))
            fail("three_lists_one_factor: glued decomposition rejected: " + v.detail);
        if (variant == OneFactorVariant::SwapFour)
            return equalise2(cert, 4);
        if (variant == OneFactorVariant::SwapFive)
            return flip_225_to_333(cert);
        return cert;
    }
}
