#include <cycdec/constructions.hh>
#include <cycdec/solver.hh>
#include <cycdec/transforms.hh>

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

using std::function;
using std::optional;
using std::string;
using std::to_string;
using std::vector;

namespace cycdec
{
    namespace
    {
        thread_local vector<string> * substitution_log = nullptr;

        auto key_of(int lambda, int n, const LengthList & m) -> std::tuple<int, int, vector<int>>
        {
            return { lambda, n, vector<int>(m.values().begin(), m.values().end()) };
        }

        auto describe(int lambda, int n, const LengthList & m) -> string
        {
            return "(" + to_string(lambda) + "," + to_string(n) + ",[" + m.to_string() + "])";
        }

        auto index_of_length(const Packing & p, int len) -> int
        {
            for (int i = 0 ; i < static_cast<int>(p.cycles.size()) ; ++i)
                if (p.cycles[i].length() == len)
                    return i;
            return -1;
        }

        auto all_pairs_twice(int n, int copies, vector<Cycle> & out) -> void
        {
            for (Vertex u = 0 ; u < n ; ++u)
                for (Vertex v = u + 1 ; v < n ; ++v)
                    for (int k = 0 ; k < copies ; ++k)
                        out.push_back(Cycle{ u, v });
        }

        auto checked(Packing p, const LengthList & expected, const string & what) -> Certificate
        {
            auto cert = make_certificate(std::move(p));
            auto v = verify(cert);
            if (! v)
                throw std::logic_error(what + ": certificate rejected: " + v.detail);
            if (! (cert.claimed == expected))
                throw std::logic_error(what + ": produced " + cert.claimed.to_string() + " instead of " + expected.to_string());
            return cert;
        }

        auto without_cycle(const Packing & p, int index) -> vector<Cycle>
        {
            vector<Cycle> out;
            for (int i = 0 ; i < static_cast<int>(p.cycles.size()) ; ++i)
                if (i != index)
                    out.push_back(p.cycles[i]);
            return out;
        }

        // The fan: an m1-cycle, plus a chordal polygon on it whose faces have the other lengths.
        auto fan_decomposition(const LengthList & mp) -> vector<Cycle>
        {
            int m1 = mp.max();
            vector<int> faces(mp.values().begin() + 1, mp.values().end());
            vector<Vertex> polygon(m1);
            std::iota(polygon.begin(), polygon.end(), 0);
            vector<Cycle> out{ Cycle(polygon) };
            int f = static_cast<int>(faces.size());
            Vertex end = 1;
            for (int j = 0 ; j < f ; ++j) {
                Vertex last = j == f - 1 ? m1 - 1 : end + faces[j] - 2;
                vector<Vertex> face{ 0 };
                for (Vertex v = end ; v <= last ; ++v)
                    face.push_back(v);
                if (static_cast<int>(face.size()) != faces[j] || last >= m1)
                    throw std::logic_error("exact bound: faces do not tile the polygon");
                out.emplace_back(std::move(face));
                end = last;
            }
            return out;
        }

        auto exact_bound_with(int lambda, int n, const LengthList & m,
                const function<Certificate (const LengthList &)> & one_fold) -> Certificate
        {
            auto which = equality_case(lambda, n, m);
            if (which == EqualityCase::None)
                throw PreconditionError("exact_bound_case: " + describe(lambda, n, m) + " is not an equality list");
            int nu = m.nu(2);
            auto mp = m - LengthList::repeated(2, nu);
            Packing p;
            p.lambda = lambda;
            p.n = n;
            Multigraph rest = complete_multigraph(lambda, n);
            if (which == EqualityCase::EvenMaxPlusCount) {
                if (! mp.empty()) {
                    if (mp.max() > n || mp.size() < 2)
                        throw std::logic_error("exact bound: unexpected list shape");
                    p.cycles = fan_decomposition(mp);
                }
            }
            else {
                auto base = one_fold(mp);
                p.cycles = base.packing.cycles;
                p.matching = base.packing.matching;
            }
            for (const auto & c : p.cycles)
                c.remove_from(rest);
            if (p.matching)
                for (auto [a, b] : *p.matching)
                    rest.remove_edge(a, b);
            if (! rest.all_mults_even())
                throw std::logic_error("exact bound: remainder has odd multiplicities");
            for (auto [u, v] : rest.edges())
                for (int k = 0 ; k < rest.mult(u, v) / 2 ; ++k)
                    p.cycles.push_back(Cycle{ u, v });
            return checked(std::move(p), m, "exact_bound_case");
        }

        auto trivial_small(int lambda, int n, const LengthList & m) -> Certificate
        {
            Packing p;
            p.lambda = lambda;
            p.n = n;
            if (n == 2) {
                for (int k = 0 ; k < lambda / 2 ; ++k)
                    p.cycles.push_back(Cycle{ 0, 1 });
                if (lambda % 2 == 1)
                    p.matching = Matching{ { 0, 1 } };
            }
            return checked(std::move(p), m, "small case");
        }

        auto base_table(int n, const LengthList & m) -> optional<Certificate>
        {
            vector<Cycle> cycles;
            if (n == 3 && m == LengthList{ 3, 3 })
                cycles = { Cycle{ 0, 1, 2 }, Cycle{ 0, 1, 2 } };
            else if (n == 3 && m == LengthList{ 2, 2, 2 })
                cycles = { Cycle{ 0, 1 }, Cycle{ 0, 2 }, Cycle{ 1, 2 } };
            else if (n == 4 && m == LengthList{ 4, 4, 4 })
                cycles = { Cycle{ 0, 1, 3, 2 }, Cycle{ 0, 2, 1, 3 }, Cycle{ 0, 1, 2, 3 } };
            else if (n == 4 && m == LengthList{ 4, 4, 2, 2 })
                cycles = { Cycle{ 0, 1, 2, 3 }, Cycle{ 0, 1, 2, 3 }, Cycle{ 0, 2 }, Cycle{ 1, 3 } };
            else if (n == 4 && m == LengthList::repeated(2, 6))
                all_pairs_twice(4, 1, cycles);
            else
                return std::nullopt;
            return checked(Packing{ 2, n, cycles, std::nullopt }, m, "base table");
        }

        auto h_for(int twos, int threshold) -> int
        {
            if (twos >= threshold)
                return 0;
            if (twos == threshold - 1)
                return 2;
            return threshold - twos;
        }

        // Add vertex n-1 to a decomposition of 2K_{n-1}.
        auto lifted(const Certificate & d) -> Packing
        {
            Packing p;
            p.lambda = 2;
            p.n = d.packing.n + 1;
            p.cycles = d.packing.cycles;
            return p;
        }

        auto require_sublist(const LengthList & m, const LengthList & sub, const string & what) -> void
        {
            if (! m.contains(sub))
                throw std::logic_error(what + ": " + sub.to_string() + " is not a sublist of " + m.to_string());
        }

        auto require_admissible(int lambda, int n, const LengthList & m, const string & what) -> void
        {
            if (! is_admissible(lambda, n, m))
                throw std::logic_error(what + ": " + describe(lambda, n, m) + " is not admissible");
        }

        // Packing of 2K_n from an (M,(n-1)^s)-decomposition of 2K_{n-1} whose leave is
        // a (2^{n-2s-1})-flower at vertex n-1.
        auto flower_from_hamiltons(const Certificate & d, int s, int skip) -> Packing
        {
            int u_count = d.packing.n;
            Vertex inf = u_count;
            vector<int> hams;
            for (int i = 0 ; i < static_cast<int>(d.packing.cycles.size()) && static_cast<int>(hams.size()) < s ; ++i)
                if (i != skip && d.packing.cycles[i].length() == u_count)
                    hams.push_back(i);
            if (static_cast<int>(hams.size()) < s)
                throw std::logic_error("flower: not enough Hamilton cycles in the smaller decomposition");

            Multigraph g(u_count);
            vector<bool> in_u(u_count, false);
            Packing p = lifted(d);
            for (int idx : hams) {
                const Cycle & h = d.packing.cycles[idx];
                int len = h.length();
                int pick = -1;
                for (int j = 0 ; j < len && pick < 0 ; ++j)
                    if (! in_u[h[j]] && ! in_u[h[(j + 1) % len]])
                        pick = j;
                if (pick < 0)
                    throw std::logic_error("flower: no free edge on a Hamilton cycle");
                Vertex x = h[pick], y = h[(pick + 1) % len];
                g.add_edge(x, y);
                vector<Vertex> seq;
                for (int j = 0 ; j < len ; ++j)
                    seq.push_back(h[(pick + 1 + j) % len]);
                seq.push_back(inf);
                p.cycles[idx] = Cycle(std::move(seq));

                std::fill(in_u.begin(), in_u.end(), false);
                for (const auto & comp : g.nontrivial_components()) {
                    bool chosen = false;
                    for (Vertex v : comp) {
                        if (g.degree(v) > 2 || (g.degree(v) == 2 && comp.size() == 2))
                            throw std::logic_error("flower: selected edges do not form paths");
                        if (g.degree(v) == 2)
                            in_u[v] = true;
                        else if (! chosen) {
                            in_u[v] = true;
                            chosen = true;
                        }
                    }
                }
            }
            long components = static_cast<long>(g.nontrivial_components().size());
            long isolated = u_count - s - components;
            if (components > s || isolated < u_count - 2 * s)
                throw std::logic_error("flower: path system has the wrong shape");
            for (int i = 0 ; i < s ; ++i)
                p = adding3s(p, 0);
            return p;
        }

        auto leave_twos(const Packing & p) -> vector<Cycle>
        {
            auto l = leave(p);
            vector<Cycle> out;
            for (auto [u, v] : l.edges()) {
                if (l.mult(u, v) % 2 != 0)
                    throw std::logic_error("leave is not a union of 2-cycles");
                for (int k = 0 ; k < l.mult(u, v) / 2 ; ++k)
                    out.push_back(Cycle{ u, v });
            }
            return out;
        }
    }

    auto solve_status_name(SolveStatus s) -> const char *
    {
        switch (s) {
            case SolveStatus::Solved: return "solved";
            case SolveStatus::NotAdmissible: return "not_admissible";
            case SolveStatus::BudgetExhausted: return "budget_exhausted";
            case SolveStatus::Failed: return "failed";
        }
        return "?";
    }

    auto lambda_split(int lambda) -> std::pair<int, int>
    {
        int l1 = lambda % 2 == 1 ? 1 : 2;
        return { l1, lambda - l1 };
    }

    auto induction_cases(int lambda, int n, const LengthList & m) -> InductionCases
    {
        auto [l1, l2] = lambda_split(lambda);
        long sigma1 = static_cast<long>(n) * ((l1 * (n - 1)) / 2);
        long sigma2 = l2 * binom2(n);
        InductionCases c;
        c.hamilton = static_cast<long>(n) * m.nu(n) >= sigma1;
        c.twos = 2L * m.nu(2) >= sigma2;
        c.triangles = m.nu(3) >= 2;
        c.slack = m.sum() - 2L * m.nu(2) - 3L * m.nu(3) - static_cast<long>(n) * m.nu(n);
        return c;
    }

    auto exact_bound_case(int lambda, int n, const LengthList & m, const SearchBudget & budget) -> Certificate
    {
        return exact_bound_with(lambda, n, m, [&] (const LengthList & mp) {
            auto r = solve_exact(1, n, mp, budget);
            if (r.status == SearchStatus::BudgetExhausted)
                throw BudgetExceeded("exact_bound_case: search budget exhausted for " + describe(1, n, mp));
            if (r.status != SearchStatus::Found)
                throw std::logic_error("exact_bound_case: no decomposition for " + describe(1, n, mp));
            return *r.certificate;
        });
    }

    Solver::Solver(SolverOptions options) : _options(options)
    {
    }

    auto Solver::memo_size() const -> std::size_t
    {
        std::shared_lock lock(_mutex);
        return _memo.size();
    }

    auto Solver::lookup(int lambda, int n, const LengthList & m) const -> optional<Certificate>
    {
        std::shared_lock lock(_mutex);
        auto it = _memo.find(key_of(lambda, n, m));
        if (it == _memo.end())
            return std::nullopt;
        return it->second;
    }

    auto Solver::store(int lambda, int n, const LengthList & m, const Certificate & c) -> void
    {
        std::unique_lock lock(_mutex);
        _memo.emplace(key_of(lambda, n, m), c);
    }

    auto Solver::trim() -> void
    {
        std::unique_lock lock(_mutex);
        std::erase_if(_memo, [] (const auto & kv) { return std::get<0>(kv.first) >= 3; });
    }

    auto Solver::note(const string & what) -> void
    {
        if (substitution_log)
            substitution_log->push_back(what);
    }

    auto Solver::solve(int lambda, int n, const LengthList & m) -> SolveResult
    {
        SolveResult r;
        r.report = check_admissible(lambda, n, m);
        if (! r.report.admissible) {
            r.status = SolveStatus::NotAdmissible;
            r.detail = r.report.to_string();
            return r;
        }
        vector<string> log;
        auto * saved = substitution_log;
        substitution_log = &log;
        try {
            r.trace = reduction_trace(lambda, n, m);
            r.certificate = certificate(lambda, n, m);
            r.status = SolveStatus::Solved;
        }
        catch (const BudgetExceeded & e) {
            r.status = SolveStatus::BudgetExhausted;
            r.detail = e.what();
        }
        catch (const std::exception & e) {
            r.status = SolveStatus::Failed;
            r.detail = e.what();
        }
        substitution_log = saved;
        r.trace.substitutions = std::move(log);
        return r;
    }

    auto Solver::certificate(int lambda, int n, const LengthList & m) -> Certificate
    {
        if (auto c = lookup(lambda, n, m))
            return *c;
        if (! is_admissible(lambda, n, m))
            throw PreconditionError("solver: " + describe(lambda, n, m) + " is not admissible");
        auto c = compute(lambda, n, m);
        auto v = verify(c);
        if (! v || ! (c.claimed == m))
            throw std::logic_error("solver: certificate for " + describe(lambda, n, m) + " rejected: " + v.detail);
        store(lambda, n, m, c);
        return c;
    }

    auto Solver::compute(int lambda, int n, const LengthList & m) -> Certificate
    {
        if (n <= 2)
            return trivial_small(lambda, n, m);
        if (lambda == 1)
            return one_fold(n, m);
        if (auto s = reduction_parent(lambda, n, m))
            return apply_reduction(certificate(lambda, n, s->parent), *s);
        return root_certificate(lambda, n, m);
    }

    auto Solver::one_fold(int n, const LengthList & m) -> Certificate
    {
        if (auto c = lookup(1, n, m))
            return *c;
        note("oracle: 1-fold " + describe(1, n, m));
        auto r = solve_exact(1, n, m, _options.budget);
        if (r.status == SearchStatus::BudgetExhausted)
            throw BudgetExceeded("search budget exhausted for " + describe(1, n, m));
        if (r.status != SearchStatus::Found)
            throw std::logic_error("no decomposition found for admissible " + describe(1, n, m));
        return *r.certificate;
    }

    auto Solver::root_certificate(int lambda, int n, const LengthList & m) -> Certificate
    {
        if (n <= 2)
            return trivial_small(lambda, n, m);
        if (lambda == 1)
            return one_fold(n, m);
        if (equality_case(lambda, n, m) != EqualityCase::None) {
            if (lambda == 2)
                if (auto b = base_table(n, m))
                    return *b;
            return exact_bound_with(lambda, n, m, [&] (const LengthList & mp) { return certificate(1, n, mp); });
        }
        if (lambda == 2)
            return solve_2fold(n, m);
        return lambda_induction(lambda, n, m);
    }

    auto Solver::lambda_induction(int lambda, int n, const LengthList & m) -> Certificate
    {
        auto [l1, l2] = lambda_split(lambda);
        long sigma1 = static_cast<long>(n) * ((l1 * (n - 1)) / 2);
        long sigma2 = l2 * binom2(n);
        auto cases = induction_cases(lambda, n, m);
        if (n >= 4 && (cases.slack > n - 1 || (m.nu(3) >= 1 && cases.slack > n - 3)))
            throw std::logic_error("lambda_induction: slack bound violated for " + describe(lambda, n, m));

        Packing p;
        p.lambda = lambda;
        p.n = n;
        auto take = [&] (const Certificate & c) {
            p.cycles.insert(p.cycles.end(), c.packing.cycles.begin(), c.packing.cycles.end());
            if (c.packing.matching)
                p.matching = c.packing.matching;
        };

        if (cases.hamilton) {
            auto m1 = LengthList::repeated(n, static_cast<int>(sigma1 / n));
            if (m.nu(2) < n) {
                take(certificate(l1, n, m1));
                take(certificate(l2, n, m - m1));
            }
            else {
                auto m2 = m + LengthList{ n, n } - m1 - LengthList::repeated(2, n);
                auto d1 = certificate(l1, n, m1);
                auto d2 = certificate(l2, n, m2);
                int h1 = index_of_length(d1.packing, n);
                auto d2p = align_cycle(d2.packing, index_of_length(d2.packing, n), d1.packing.cycles[h1]);
                Cycle h = d1.packing.cycles[h1];
                p.cycles = without_cycle(d1.packing, h1);
                p.matching = d1.packing.matching;
                auto rest = without_cycle(d2p, index_of_length(d2p, n));
                p.cycles.insert(p.cycles.end(), rest.begin(), rest.end());
                for (int i = 0 ; i < n ; ++i)
                    p.cycles.push_back(Cycle{ h[i], h[(i + 1) % n] });
            }
            return checked(std::move(p), m, "lambda_induction (i)");
        }

        if (cases.twos) {
            auto m2 = LengthList::repeated(2, static_cast<int>(sigma2 / 2));
            take(certificate(l1, n, m - m2));
            all_pairs_twice(n, l2 / 2, p.cycles);
            return checked(std::move(p), m, "lambda_induction (ii)");
        }

        if (! cases.triangles)
            throw std::logic_error("lambda_induction: no case applies to " + describe(lambda, n, m));
        if (n < 6)
            throw std::logic_error("lambda_induction: triangle case needs n >= 6");
        auto mp = m - LengthList{ 3, 3, 3 };
        vector<int> first;
        long total = 0;
        for (int v : mp.values()) {
            if (total >= sigma1 - 5)
                break;
            first.push_back(v);
            total += v;
        }
        long eps = sigma1 - total;
        LengthList m1(first);
        if (eps < 3 || eps > 5 || m1.nu(2) != 0)
            throw std::logic_error("lambda_induction: greedy split missed the window for " + describe(lambda, n, m));
        auto m2 = mp - m1;
        if (eps == 3) {
            take(certificate(l1, n, m1 + LengthList{ 3 }));
            take(certificate(l2, n, m2 + LengthList{ 3, 3 }));
            return checked(std::move(p), m, "lambda_induction (iii)");
        }
        int e = static_cast<int>(eps);
        auto d1 = certificate(l1, n, m1 + LengthList{ e });
        auto d2 = certificate(l2, n, m2 + LengthList{ 9 - e });
        int i1 = index_of_length(d1.packing, e);
        const Cycle & h1 = d1.packing.cycles[i1];
        Vertex v, w, x, y, z;
        Cycle target;
        if (e == 5) {
            v = h1[0], w = h1[1], x = h1[2], y = h1[3], z = h1[4];
            target = Cycle{ v, w, z, x };
        }
        else {
            v = h1[0], w = h1[1], z = h1[2], x = h1[3];
            y = 0;
            while (h1.contains(y))
                ++y;
            target = Cycle{ v, w, x, y, z };
        }
        auto d2p = align_cycle(d2.packing, index_of_length(d2.packing, 9 - e), target);
        p.cycles = without_cycle(d1.packing, i1);
        p.matching = d1.packing.matching;
        auto rest = without_cycle(d2p, index_of_length(d2p, 9 - e));
        p.cycles.insert(p.cycles.end(), rest.begin(), rest.end());
        p.cycles.push_back(Cycle{ v, w, x });
        p.cycles.push_back(Cycle{ x, y, z });
        p.cycles.push_back(Cycle{ v, w, z });
        return checked(std::move(p), m, "lambda_induction (iii)");
    }

    auto Solver::solve_2fold(int n, const LengthList & m) -> Certificate
    {
        if (n <= 2)
            return trivial_small(2, n, m);
        if (n <= 4) {
            if (auto b = base_table(n, m))
                return *b;
            throw std::logic_error("solve_2fold: " + m.to_string() + " is not a base list for n = " + to_string(n));
        }
        if (2 * m.nu(n) > n - 3)
            return many_hams(n, m);
        return few_hams(n, m);
    }

    auto Solver::many_hams(int n, const LengthList & m) -> Certificate
    {
        if (2 * m.nu(2) >= n)
            return many_twos_many_hams(n, m);
        return few_twos_many_hams(n, m);
    }

    auto Solver::many_twos_many_hams(int n, const LengthList & m) -> Certificate
    {
        int hams = m.nu(n);
        if (hams < 2)
            throw std::logic_error("many_hams: needs at least two Hamilton cycles");
        int b = std::min(hams - 2, n - 5) / 2;
        int a = n * (n - 5 - 2 * b) / 2;
        auto outer = LengthList::repeated(2, a) + LengthList::repeated(n, 2 * b);
        require_sublist(m, outer, "many_hams");
        auto mp = m - outer;
        if (mp.sum() != 4L * n)
            throw std::logic_error("many_hams: inner list does not sum to 4n");

        Packing p;
        p.lambda = 2;
        p.n = n;
        p.cycles = twos_and_hams(n, a, b, _options.budget, _options.cache);
        if (b > 0)
            note("oracle: Hamilton decomposition of <{3,...," + to_string(n / 2) + "}>_" + to_string(n));
        vector<Cycle> inner;
        if (mp.nu(n) == 2 && 2 * mp.nu(2) >= n)
            inner = circ12_two_hams(n, mp - LengthList{ n, n });
        else if (mp.nu(n) >= 3)
            inner = circ12_three_hams(n, mp - LengthList{ n, n, n });
        else
            throw std::logic_error("many_hams: inner list " + mp.to_string() + " fits neither circulant case");
        p.cycles.insert(p.cycles.end(), inner.begin(), inner.end());
        return checked(std::move(p), m, "many_hams");
    }

    auto Solver::few_twos_many_hams(int n, const LengthList & m) -> Certificate
    {
        if (n % 2 == 1) {
            auto m1 = LengthList::repeated(n, (n - 1) / 2);
            require_sublist(m, m1, "many_hams");
            auto mp = m - m1;
            vector<int> m3v(mp.nu(2), 2);
            long sum = 2L * mp.nu(2);
            if (sum < 3) {
                vector<int> others;
                for (int v : mp.values())
                    if (v != 2)
                        others.push_back(v);
                std::sort(others.begin(), others.end());
                auto it = std::find_if(others.begin(), others.end(), [&] (int v) { return sum + v <= n; });
                if (it == others.end())
                    throw std::logic_error("many_hams: no sublist M3 with sum in [3,n]");
                m3v.push_back(*it);
            }
            LengthList m3(m3v);
            auto m2 = mp - m3;
            auto m2s = m2 + LengthList{ static_cast<int>(m3.sum()) };
            require_admissible(1, n, m2s, "many_hams");
            return three_lists(n, certificate(1, n, m1), certificate(1, n, m2s), m3);
        }

        auto m1 = LengthList::repeated(n, n / 2 - 2);
        require_sublist(m, m1, "many_hams");
        auto mp = m - m1;
        long target2 = static_cast<long>(n) * (n - 2) / 2;
        note("oracle: Hamilton decomposition of <{1,...," + to_string(n / 2 - 2) + "}>_" + to_string(n));

        // Distinct non-2 values of M' with multiplicities; M3' takes every 2.
        vector<std::pair<int, int>> values;
        for (int v : mp.values())
            if (v != 2) {
                if (values.empty() || values.back().first != v)
                    values.emplace_back(v, 0);
                ++values.back().second;
            }
        for (int eps = 0 ; eps <= 2 ; ++eps) {
            long want = 2L * n + eps - 2L * mp.nu(2);
            vector<int> take(values.size(), 0);
            optional<LengthList> found;
            function<void (std::size_t, long)> dfs = [&] (std::size_t i, long left) {
                if (found)
                    return;
                if (i == values.size()) {
                    if (left != 0)
                        return;
                    vector<int> m3v(mp.nu(2), 2);
                    for (std::size_t j = 0 ; j < values.size() ; ++j)
                        m3v.insert(m3v.end(), take[j], values[j].first);
                    LengthList m3p(m3v);
                    auto m2p = mp - m3p;
                    if (m3p.nu(n) < 1 || m3p.nu(3) < eps || (eps > 0 && m2p.nu(3) < 1))
                        return;
                    if (m2p.sum() != target2 - eps)
                        return;
                    found = m3p;
                    return;
                }
                for (int k = 0 ; k <= values[i].second && k * values[i].first <= left ; ++k) {
                    take[i] = k;
                    dfs(i + 1, left - static_cast<long>(k) * values[i].first);
                }
                take[i] = 0;
            };
            if (want >= 0)
                dfs(0, want);
            if (! found)
                continue;
            auto m3p = *found;
            auto m2p = mp - m3p;
            auto m2 = m2p + LengthList{ 3 + eps } - LengthList{ 3 };
            auto m3 = m3p + LengthList::repeated(2, eps) - LengthList::repeated(3, eps);
            if (eps == 0)
                m2 = m2p, m3 = m3p;
            if (! is_admissible(1, n, m2))
                continue;
            auto variant = eps == 0 ? OneFactorVariant::Base : eps == 1 ? OneFactorVariant::SwapFour : OneFactorVariant::SwapFive;
            auto c = three_lists_one_factor(n, certificate(1, n, m2), m3, variant, _options.budget, _options.cache);
            if (! (c.claimed == m))
                throw std::logic_error("many_hams: glued list " + c.claimed.to_string() + " differs from " + m.to_string());
            return c;
        }
        throw std::logic_error("many_hams: no partition of " + mp.to_string() + " for any epsilon");
    }

    auto Solver::few_hams(int n, const LengthList & m) -> Certificate
    {
        int s = m.nu(n);
        if (s >= 2 && 2 * m.nu(2) >= n)
            return many_twos_many_hams(n, m);
        int h = h_for(m.nu(2), n - 2 * s - 1);
        auto removed = LengthList::repeated(n, s) + LengthList::repeated(3, s + h)
                + LengthList::repeated(2, n - 2 * s - 1 - h);
        require_sublist(m, removed, "few_hams");
        auto mp = m - removed;
        auto smaller = mp + LengthList::repeated(n - 1, s) + (h > 0 ? LengthList{ h } : LengthList{});
        require_admissible(2, n - 1, smaller, "few_hams");
        auto d = certificate(2, n - 1, smaller);
        Vertex inf = n - 1;

        if (s == 0) {
            Packing p = lifted(d);
            if (h == 0) {
                for (Vertex u = 0 ; u < n - 1 ; ++u)
                    p.cycles.push_back(Cycle{ inf, u });
                return checked(std::move(p), m, "few_hams");
            }
            int ci = index_of_length(d.packing, h);
            Cycle c = d.packing.cycles[ci];
            p.cycles = without_cycle(d.packing, ci);
            for (Vertex u = 0 ; u < n - 1 ; ++u)
                if (! c.contains(u))
                    p.cycles.push_back(Cycle{ inf, u });
            for (int j = 0 ; j < h ; ++j)
                p.cycles.push_back(Cycle{ inf, c[j], c[(j + 1) % h] });
            return checked(std::move(p), m, "few_hams");
        }

        int skip = h > 0 ? index_of_length(d.packing, h) : -1;
        Packing p = flower_from_hamiltons(d, s, skip);
        auto twos = leave_twos(p);
        if (static_cast<int>(twos.size()) != n - 2 * s - 1)
            throw std::logic_error("few_hams: flower has the wrong number of petals");
        if (h == 0) {
            p.cycles.insert(p.cycles.end(), twos.begin(), twos.end());
            return checked(std::move(p), m, "few_hams");
        }
        p.cycles.insert(p.cycles.end(), twos.begin() + h, twos.end());
        auto ci = std::find_if(p.cycles.begin(), p.cycles.end(),
                [&] (const Cycle & c) { return c.length() == h && ! c.contains(inf); });
        if (ci == p.cycles.end())
            throw std::logic_error("few_hams: no h-cycle away from the new vertex");
        p.cycles.erase(ci);
        auto done = reduce_flower(p, h);
        return checked(std::move(done), m, "few_hams");
    }

    namespace
    {
        // Build the root, then every list below it in the reduction forest.
        auto sweep_tree(Solver & solver, int lambda, int n, const LengthList & root_list,
                const function<void (const SweepEntry &)> & visit) -> std::uint64_t
        {
            using clock = std::chrono::steady_clock;
            std::uint64_t visited = 0;

            function<void (const LengthList &, const Certificate *, int, const string &)> walk =
                [&] (const LengthList & list, const Certificate * cert, int depth, const string & inherited) {
                    for (const auto & step : reduction_children(lambda, n, list)) {
                        SweepEntry e;
                        e.list = step.list;
                        e.depth = depth + 1;
                        optional<Certificate> child;
                        if (cert) {
                            auto start = clock::now();
                            try {
                                child = apply_reduction(*cert, step);
                            }
                            catch (const std::exception & ex) {
                                e.error = string("rule ") + step.rule + ": " + ex.what();
                            }
                            e.elapsed = clock::now() - start;
                        }
                        else
                            e.error = inherited;
                        e.certificate = child ? &*child : nullptr;
                        visit(e);
                        ++visited;
                        walk(step.list, e.certificate, e.depth, e.error.empty() ? inherited : "ancestor failed: " + e.error);
                    }
                };

            SweepEntry e;
            e.list = root_list;
            optional<Certificate> root;
            auto start = clock::now();
            try {
                root = solver.root_certificate(lambda, n, root_list);
                if (auto v = verify(*root); ! v || ! (root->claimed == root_list))
                    throw std::logic_error("root certificate rejected: " + v.detail);
            }
            catch (const std::exception & ex) {
                root.reset();
                e.error = ex.what();
            }
            e.elapsed = clock::now() - start;
            e.certificate = root ? &*root : nullptr;
            visit(e);
            ++visited;
            walk(root_list, e.certificate, 0, e.error.empty() ? string{} : "ancestor failed: " + e.error);
            return visited;
        }

        auto is_root(int lambda, int n, const LengthList & list) -> bool
        {
            return n <= 2 || lambda < 2 || ! reduction_parent(lambda, n, list);
        }
    }

    auto sweep_admissible(Solver & solver, int lambda, int n, const function<void (const SweepEntry &)> & visit,
            int jobs) -> std::uint64_t
    {
        EnumerateOptions options;
        options.max_count = 0;
        std::uint64_t visited = 0;
        if (jobs <= 1) {
            for_each_admissible(lambda, n, options, [&] (const LengthList & list) {
                if (is_root(lambda, n, list))
                    visited += sweep_tree(solver, lambda, n, list, visit);
                return true;
            });
            return visited;
        }

        vector<LengthList> roots;
        for_each_admissible(lambda, n, options, [&] (const LengthList & list) {
            if (is_root(lambda, n, list))
                roots.push_back(list);
            return true;
        });
        std::atomic<std::size_t> next{ 0 };
        std::atomic<std::uint64_t> count{ 0 };
        std::mutex visit_mutex;
        auto locked = [&] (const SweepEntry & e) {
            std::lock_guard lock(visit_mutex);
            visit(e);
        };
        vector<std::jthread> workers;
        for (int j = 0 ; j < jobs ; ++j)
            workers.emplace_back([&] {
                for (std::size_t i = next++ ; i < roots.size() ; i = next++)
                    count += sweep_tree(solver, lambda, n, roots[i], locked);
            });
        workers.clear();
        return count;
    }
}
