#include <cycdec/admissibility.hh>
#include <cycdec/constructions.hh>
#include <cycdec/oracle.hh>
#include <cycdec/solver.hh>
#include <cycdec/transforms.hh>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using std::string;
using std::vector;

using namespace cycdec;

namespace
{
    using clock_type = std::chrono::steady_clock;

    struct Outcome
    {
        bool pass = true;
        string detail;
    };

    auto millis_since(clock_type::time_point start) -> double
    {
        return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    }

    auto format(const char * fmt, auto... args) -> string
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        return buf;
    }

    auto median(vector<double> v) -> double
    {
        if (v.empty())
            return 0;
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    }

    // Every list with parts in [2, n] and the sum (A2)/(A3) asks for, against the exhaustive oracle.
    auto theorem_equivalence() -> Outcome
    {
        long lists = 0, disagreements = 0, admissible = 0;
        string first;
        for (int lambda : { 1, 2 })
            for (int n = 2 ; n <= 5 ; ++n)
                for_each_partition(required_sum(lambda, n), 2, n, [&] (const LengthList & m) {
                    ++lists;
                    bool adm = is_admissible(lambda, n, m);
                    auto r = solve_exact(lambda, n, m, SearchBudget::unlimited());
                    bool found = r.status == SearchStatus::Found && verify(*r.certificate).accepted;
                    admissible += adm;
                    if (adm != found || r.status == SearchStatus::BudgetExhausted) {
                        if (disagreements++ == 0)
                            first = format(" first (%d,%d,%s)", lambda, n, m.to_string().c_str());
                    }
                    return true;
                });
        return { disagreements == 0 && lists > 0,
            format("%ld lists, %ld admissible, %ld disagreements", lists, admissible, disagreements) + first };
    }

    auto constructive_completeness(int max_lambda, int max_n, int cold_samples) -> Outcome
    {
        bool pass = true;
        string detail;
        vector<double> all;
        double worst = 0;
        string worst_at;
        long total = 0, failures = 0;
        for (int lambda = 1 ; lambda <= max_lambda ; ++lambda)
            for (int n = 3 ; n <= max_n ; ++n) {
                Solver solver;
                vector<double> times;
                long bad = 0;
                auto start = clock_type::now();
                auto count = sweep_admissible(solver, lambda, n, [&] (const SweepEntry & e) {
                    double ms = std::chrono::duration<double, std::milli>(e.elapsed).count();
                    times.push_back(ms);
                    if (ms > worst) {
                        worst = ms;
                        worst_at = format("(%d,%d,%s)", lambda, n, e.list.to_string().c_str());
                    }
                    if (! e.error.empty() || ! e.certificate || ! verify(*e.certificate) || ! (e.certificate->claimed == e.list)) {
                        if (bad++ == 0)
                            std::printf("  failure (%d,%d,%s): %s\n", lambda, n, e.list.to_string().c_str(), e.error.c_str());
                    }
                });
                long expected = static_cast<long>(enumerate_admissible(lambda, n).size());
                if (static_cast<long>(count) != expected)
                    ++bad;
                std::printf("  lambda=%d n=%d lists=%lu failures=%ld median=%.3fms max=%.3fms wall=%.1fs\n", lambda, n,
                        static_cast<unsigned long>(count), bad, median(times), times.empty() ? 0.0 : *std::max_element(times.begin(), times.end()),
                        millis_since(start) / 1000);
                std::fflush(stdout);
                total += static_cast<long>(count);
                failures += bad;
                all.insert(all.end(), times.begin(), times.end());
            }

        // Independent solves with a fresh memo: the full chain from a root for each sampled list.
        std::mt19937_64 rng(2024);
        vector<double> cold;
        long cold_bad = 0;
        for (int lambda = 1 ; lambda <= max_lambda ; ++lambda)
            for (int n = 3 ; n <= max_n ; ++n) {
                auto lists = enumerate_admissible(lambda, n);
                for (int s = 0 ; s < cold_samples && ! lists.empty() ; ++s) {
                    const auto & m = lists[rng() % lists.size()];
                    Solver fresh;
                    auto start = clock_type::now();
                    auto r = fresh.solve(lambda, n, m);
                    double ms = millis_since(start);
                    cold.push_back(ms);
                    if (r.status != SolveStatus::Solved || ! verify(*r.certificate))
                        ++cold_bad;
                }
            }
        double cold_max = cold.empty() ? 0 : *std::max_element(cold.begin(), cold.end());

        double med = median(all);
        pass = failures == 0 && cold_bad == 0 && med <= 1000 && worst <= 60'000 && median(cold) <= 1000 && cold_max <= 60'000;
        detail = format("%ld lists, %ld failures, median %.3fms, max %.1fms at ", total, failures, med, worst) + worst_at
            + format("; %zu cold solves, %ld failures, median %.1fms, max %.1fms", cold.size(), cold_bad, median(cold), cold_max);
        return { pass, detail };
    }

    auto base_tables() -> Outcome
    {
        auto a = enumerate_admissible(2, 3);
        EnumerateOptions options;
        options.ancestors_only = true;
        auto b = enumerate_admissible(2, 4, options);
        std::set<LengthList> sa(a.begin(), a.end()), sb(b.begin(), b.end());
        bool ok_a = a.size() == 2 && sa == std::set<LengthList>{ LengthList{ 3, 3 }, LengthList{ 2, 2, 2 } };
        bool ok_b = b.size() == 3 && sb == std::set<LengthList>{ LengthList{ 4, 4, 4 }, LengthList{ 4, 4, 2, 2 }, LengthList::repeated(2, 6) };
        string text = "(2,3) admissible:";
        for (const auto & m : a)
            text += " " + m.to_string();
        text += "; (2,4) ancestors:";
        for (const auto & m : b)
            text += " " + m.to_string();
        return { ok_a && ok_b, text };
    }

    auto bmbs() -> Outcome
    {
        bool pass = true;
        string detail;
        for (int n : { 4, 5 }) {
            auto g = complete_multigraph(2, n);
            long e = g.edge_count();
            long decompositions = 0, pairs = 0, violations = 0, tight = 0;
            auto status = for_each_decomposition(g, std::nullopt, SearchBudget::unlimited(), [&] (std::span<const Cycle> cs) {
                ++decompositions;
                long size = static_cast<long>(cs.size());
                for (const auto & c : cs) {
                    ++pairs;
                    // Independent arithmetic: |E|/2 - |E(C)| + 2.
                    long bound = e / 2 - c.length() + 2;
                    if (bound != bmbs_bound(g, c))
                        ++violations;
                    if (size > bound)
                        ++violations;
                    if (size == bound)
                        ++tight;
                }
                return true;
            });
            if (status != SearchStatus::Infeasible || violations > 0 || tight == 0 || decompositions == 0)
                pass = false;
            detail += format("2K_%d: %ld decompositions, %ld (D,C) pairs, %ld violations, %ld tight; ", n, decompositions, pairs,
                    violations, tight);
        }
        return { pass, detail };
    }

    auto circulant_leave() -> Outcome
    {
        std::mt19937_64 rng(5);
        long trials = 0, failures = 0;
        for (int n = 5 ; n <= 40 ; ++n)
            for (int s = 0 ; s < 100 ; ++s) {
                // Random composition of n into parts >= 3.
                vector<int> parts;
                int left = n;
                while (left > 0) {
                    if (left <= 5) {
                        parts.push_back(left);
                        break;
                    }
                    int m = 3 + static_cast<int>(rng() % (left - 2));
                    if (left - m > 0 && left - m < 3)
                        m = left;
                    parts.push_back(m);
                    left -= m;
                }
                ++trials;
                LengthList m(parts);
                try {
                    auto cs = circ12_single(n, m);
                    Multigraph host = circulant(n, vector<int>{ 1, 2 });
                    Multigraph used(n);
                    vector<int> lens;
                    for (std::size_t i = 0 ; i + 1 < cs.size() ; ++i) {
                        cs[i].add_to(used);
                        lens.push_back(cs[i].length());
                    }
                    bool ok = LengthList(lens) == m && used.is_subgraph_of(host) && used.max_mult() <= 1;
                    Multigraph rest = host - used;
                    // The leave must be one connected 2-regular spanning graph.
                    for (Vertex v = 0 ; v < n && ok ; ++v)
                        ok = rest.degree(v) == 2;
                    ok = ok && rest.nontrivial_components().size() == 1 && rest.edge_count() == n;
                    for (Vertex u = 0 ; u < n && ok ; ++u)
                        for (Vertex v = u + 1 ; v < n && ok ; ++v)
                            ok = rest.mult(u, v) <= 1;
                    if (! ok)
                        ++failures;
                }
                catch (const std::exception & e) {
                    ++failures;
                }
            }
        return { failures == 0, format("%ld packings for n in [5,40], %ld failures", trials, failures) };
    }

    auto j_tables() -> Outcome
    {
        long checked = 0, failures = 0;
        string first;
        auto run = [&] (const string & name, const std::function<JPathDecomposition ()> & make, const LengthList & lengths,
                std::optional<bool> plus) {
            ++checked;
            try {
                auto d = make();
                check_j(d);
                if (! (d.lengths() == lengths))
                    throw ConstructionError("lengths " + d.lengths().to_string() + " instead of " + lengths.to_string());
                if (plus && d.plus != *plus)
                    throw ConstructionError("wrong end label");
                if (d.host == JHost::Path) {
                    // Cycles plus the two paths must be exactly 2J_k.
                    Multigraph g(d.order());
                    for (const auto & c : d.cycles)
                        c.add_to(g);
                    for (const auto & p : d.paths)
                        for (std::size_t i = 0 ; i + 1 < p.size() ; ++i)
                            g.add_edge(p[i], p[i + 1]);
                    Multigraph host(d.order());
                    for (int i = 0 ; i < d.n ; ++i) {
                        host.add_edge(i, i + 1, 2);
                        host.add_edge(i, i + 2, 2);
                    }
                    if (! (g == host))
                        throw ConstructionError("union is not 2J_k");
                    for (const auto & p : d.paths)
                        if (p.front() != 0 || p.back() != d.n)
                            throw ConstructionError("path does not run from 0 to k");
                }
                else {
                    auto m = d.implicit_matching();
                    vector<int> deg(d.order(), 0);
                    for (auto [u, v] : m) {
                        ++deg[u];
                        ++deg[v];
                    }
                    for (int v = 0 ; v < d.n ; ++v)
                        if (deg[v] != 1)
                            throw ConstructionError("implicit I is not 1-regular");
                }
            }
            catch (const std::exception & e) {
                if (failures++ == 0)
                    first = " first " + name + ": " + e.what();
            }
        };
        for (int k = 1 ; k <= 10 ; k += 2)
            run(format("path(i) k=%d", k), [=] { return j_path_odd(k); },
                    LengthList{ k + 1 } + LengthList::repeated(2, (k - 1) / 2), std::nullopt);
        for (int k1 = 1 ; k1 <= 4 ; ++k1)
            for (int k2 = 1 ; 2 * (k1 + k2) <= 10 ; ++k2) {
                int k = 2 * (k1 + k2);
                run(format("path(ii) k1=%d k2=%d", k1, k2), [=] { return j_path_two_odds(k1, k2); },
                        LengthList{ 2 * k1 + 1, 2 * k2 + 1 } + LengthList::repeated(2, (k - 2) / 2), std::nullopt);
            }
        for (int k = 2 ; k <= 10 ; ++k)
            run(format("prism(i) k=%d", k), [=] { return j_prism_even_star(k); }, LengthList{ 2 * k }, false);
        for (int k1 = 2 ; k1 <= 8 ; ++k1)
            for (int k2 = 1 ; k1 + k2 + 1 <= 10 ; ++k2)
                run(format("prism(ii) k1=%d k2=%d", k1, k2), [=] { return j_prism_two_odds_star(k1, k2); },
                        LengthList{ 2 * k1 + 1, 2 * k2 + 1 }, false);
        run("prism(iii) n=4", [] { return j_prism_small_star(4); }, LengthList{ 2, 2 }, false);
        run("prism(iii) n=8", [] { return j_prism_small_star(8); }, LengthList{ 2, 3, 3 }, false);
        run("prism(iii) n=12", [] { return j_prism_small_star(12); }, LengthList{ 3, 3, 3, 3 }, false);
        for (int k = 1 ; k <= 10 ; ++k)
            run(format("prism(iv) k=%d", k), [=] { return j_prism_even_plus(k); }, LengthList{ 2 * k }, true);
        for (int k1 = 1 ; k1 <= 8 ; ++k1)
            for (int k2 = 1 ; k1 + k2 + 1 <= 10 ; ++k2)
                run(format("prism(v) k1=%d k2=%d", k1, k2), [=] { return j_prism_two_odds_plus(k1, k2); },
                        LengthList{ 2 * k1 + 1, 2 * k2 + 1 }, true);
        return { failures == 0, format("%ld table entries, %ld failures", checked, failures) + first };
    }

    // Every realisable leave change of the transposition (a b) applied to a subset of parts.
    auto any_switch_outcome(const Packing & p, Vertex a, Vertex b, Vertex c) -> std::optional<bool>
    {
        vector<vector<int>> deltas;
        for (const auto & cy : p.cycles) {
            vector<int> d(p.n, 0);
            for (auto [u, v] : cy.edges()) {
                for (auto [x, y] : { std::pair{ u, v }, std::pair{ v, u } }) {
                    if (x == a && y != b)
                        --d[y];
                    else if (x == b && y != a)
                        ++d[y];
                }
            }
            if (std::any_of(d.begin(), d.end(), [] (int x) { return x != 0; }))
                deltas.push_back(d);
        }
        if (deltas.size() > 22)
            return std::nullopt;
        auto l = leave(p);
        int lambda = p.lambda;
        for (std::uint64_t mask = 1 ; mask < (std::uint64_t{ 1 } << deltas.size()) ; ++mask) {
            vector<int> s(p.n, 0);
            for (std::size_t i = 0 ; i < deltas.size() ; ++i)
                if (mask >> i & 1)
                    for (int x = 0 ; x < p.n ; ++x)
                        s[x] += deltas[i][x];
            if (s[c] < 1)
                continue;
            bool valid = true;
            vector<int> off;
            for (int x = 0 ; x < p.n && valid ; ++x) {
                if (x == a || x == b)
                    continue;
                int la = l.mult(a, x) - s[x], lb = l.mult(b, x) + s[x];
                valid = la >= 0 && lb >= 0 && la <= lambda && lb <= lambda;
                int want = x == c ? 1 : 0;
                if (s[x] != want)
                    off.push_back(x);
            }
            if (! valid)
                continue;
            // Pole-shift or cross at one terminus t, or pole-shift with t = c.
            if (off.empty())
                continue;
            if (off.size() == 1) {
                int x = off[0];
                if ((x == c && s[x] == 2) || (x != c && (s[x] == 1 || s[x] == -1)))
                    return true;
            }
        }
        return false;
    }

    auto switch_fuzz(int trials) -> Outcome
    {
        std::mt19937_64 rng(20240601);
        Solver solver;
        std::map<int, vector<LengthList>> lists;
        long applied = 0, none = 0, confirmed_none = 0, unconfirmed = 0, violations = 0;
        for (int trial = 0 ; trial < trials ; ++trial) {
            int n = 4 + static_cast<int>(rng() % 6);
            auto & pool = lists[n];
            if (pool.empty())
                pool = enumerate_admissible(2, n);
            auto cert = solver.certificate(2, n, pool[rng() % pool.size()]);
            Packing p = cert.packing;
            int drop = 1 + static_cast<int>(rng() % 3);
            for (int k = 0 ; k < drop && p.cycles.size() > 1 ; ++k)
                p.cycles.erase(p.cycles.begin() + static_cast<long>(rng() % p.cycles.size()));
            auto l = leave(p);
            // Origin c is a leave neighbour of a and not of b.
            vector<std::tuple<Vertex, Vertex, Vertex>> choices;
            for (Vertex a = 0 ; a < n ; ++a)
                for (Vertex b = 0 ; b < n ; ++b)
                    for (Vertex c = 0 ; c < n ; ++c)
                        if (a != b && c != a && c != b && l.mult(a, c) > 0 && l.mult(b, c) == 0)
                            choices.emplace_back(a, b, c);
            if (choices.empty()) {
                --trial;
                continue;
            }
            auto [a, b, c] = choices[rng() % choices.size()];
            try {
                auto out = perform_switch(p, a, b, c);
                bool ok = check_packing(out.packing).accepted && out.packing.lengths() == p.lengths()
                    && leave(out.packing) == expected_switch_leave(l, a, b, c, out.mode, out.terminus);
                if (out.mode == SwitchMode::PoleShift && out.terminus != c)
                    ok = ok && l.mult(a, out.terminus) >= 1;
                if (out.mode == SwitchMode::Cross)
                    ok = ok && l.mult(b, out.terminus) >= 1;
                if (ok)
                    ++applied;
                else
                    ++violations;
            }
            catch (const TransformError &) {
                ++none;
                auto any = any_switch_outcome(p, a, b, c);
                if (! any)
                    ++unconfirmed;
                else if (*any)
                    ++violations;
                else
                    ++confirmed_none;
            }
            catch (const std::exception &) {
                ++violations;
            }
        }
        return { violations == 0 && unconfirmed == 0,
            format("%d switches: %ld applied and matched a mode, %ld had no outcome of either mode "
                    "(%ld confirmed by exhaustive subset check), %ld contract violations",
                    trials, applied, none, confirmed_none, violations) };
    }

    auto reduction_audit(int max_n) -> Outcome
    {
        long audited = 0, failures = 0, at_equality = 0;
        string first;
        for (int n = 3 ; n <= max_n ; ++n) {
            Solver solver;
            for (const auto & m : enumerate_admissible(2, n)) {
                if (is_ancestor(2, n, m))
                    continue;
                ++audited;
                try {
                    auto trace = reduction_trace(2, n, m);
                    LengthList current = m;
                    for (const auto & s : trace.steps) {
                        if (! (s.list == current) || ! s.parent.larger_than(s.list) || ! is_admissible(2, n, s.parent))
                            throw std::logic_error("trace is not strictly increasing through admissible lists");
                        current = s.parent;
                    }
                    if (! (trace.terminal == current))
                        throw std::logic_error("terminal does not match the last step");
                    bool ancestor = is_ancestor(2, n, current);
                    if (! ancestor) {
                        if (equality_case(2, n, current) == EqualityCase::None)
                            throw std::logic_error("trace ends at a list that is neither an ancestor nor tight");
                        ++at_equality;
                    }
                    auto cert = solver.root_certificate(2, n, current);
                    for (auto it = trace.steps.rbegin() ; it != trace.steps.rend() ; ++it)
                        cert = apply_reduction(cert, *it);
                    if (! verify(cert) || ! (cert.claimed == m))
                        throw std::logic_error("replayed certificate rejected");
                }
                catch (const std::exception & e) {
                    if (failures++ == 0)
                        first = format(" first (2,%d,%s): ", n, m.to_string().c_str()) + e.what();
                }
            }
        }
        return { failures == 0,
            format("%ld non-ancestor lists (n<=%d), %ld failures, %ld traces end at an equality list", audited, max_n,
                    failures, at_equality) + first };
    }

    auto budget_honesty() -> Outcome
    {
        long runs = 0, wrong = 0, exhausted = 0, solved = 0;
        auto check = [&] (int lambda, int n, const LengthList & m, std::uint64_t nodes) {
            ++runs;
            Solver solver(SolverOptions{ SearchBudget::nodes(nodes), &HamiltonCache::global() });
            auto r = solver.solve(lambda, n, m);
            bool adm = is_admissible(lambda, n, m);
            switch (r.status) {
                case SolveStatus::Solved:
                    ++solved;
                    if (! adm || ! verify(*r.certificate) || ! (r.certificate->claimed == m))
                        ++wrong;
                    break;
                case SolveStatus::NotAdmissible:
                    if (adm)
                        ++wrong;
                    break;
                case SolveStatus::BudgetExhausted:
                case SolveStatus::Failed:
                    ++exhausted;
                    if (! adm)
                        ++wrong;
                    break;
            }
        };
        // Beyond the grid with tiny budgets.
        for (std::uint64_t nodes : { 1, 10, 100, 1000 }) {
            check(1, 25, LengthList::repeated(25, 12), nodes);
            check(1, 21, LengthList::repeated(3, 70), nodes);
            check(2, 14, LengthList::repeated(14, 13), nodes);
            check(3, 12, LengthList::repeated(12, 16) + LengthList{ 6, 6, 6, 4, 4 }, nodes);
            check(2, 13, LengthList::repeated(2, 78), nodes);
            check(1, 25, LengthList::repeated(25, 11) + LengthList{ 24 }, nodes);
        }
        // Inside the grid, every list of a few pairs under starved budgets.
        for (std::uint64_t nodes : { 1, 50 })
            for (auto [lambda, n] : { std::pair{ 1, 7 }, std::pair{ 2, 6 }, std::pair{ 3, 5 } })
                for (const auto & m : enumerate_admissible(lambda, n))
                    check(lambda, n, m, nodes);
        // The exact oracle never calls a feasible instance infeasible when starved.
        long oracle_runs = 0;
        for (int n = 3 ; n <= 5 ; ++n)
            for_each_partition(required_sum(2, n), 2, n, [&] (const LengthList & m) {
                ++oracle_runs;
                auto r = solve_exact(2, n, m, SearchBudget::nodes(3));
                if (r.status == SearchStatus::Infeasible && is_admissible(2, n, m))
                    ++wrong;
                if (r.status == SearchStatus::Found && ! verify(*r.certificate))
                    ++wrong;
                return true;
            });
        return { wrong == 0,
            format("%ld starved solves: %ld solved, %ld reported exhaustion, %ld wrong verdicts; %ld starved oracle calls",
                    runs, solved, exhausted, wrong, oracle_runs) };
    }
}

auto main(int argc, char ** argv) -> int
{
    CLI::App app{ "Acceptance suite" };
    int max_lambda = 4, max_n = 9, cold = 20, fuzz = 1000, audit_n = 7;
    std::set<int> only;
    app.add_option("--max-lambda", max_lambda, "Largest lambda in the completeness sweep")->capture_default_str();
    app.add_option("--max-n", max_n, "Largest n in the completeness sweep")->capture_default_str();
    app.add_option("--cold", cold, "Independent cold solves per (lambda, n)")->capture_default_str();
    app.add_option("--switches", fuzz, "Random switch applications")->capture_default_str();
    app.add_option("--audit-n", audit_n, "Largest n in the reduction audit")->capture_default_str();
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);

    vector<std::pair<string, std::function<Outcome ()>>> criteria{
        { "theorem equivalence", theorem_equivalence },
        { "constructive completeness", [&] { return constructive_completeness(max_lambda, max_n, cold); } },
        { "base tables", base_tables },
        { "cycle count bound", bmbs },
        { "circulant leave", circulant_leave },
        { "J tables", j_tables },
        { "switch contract", [&] { return switch_fuzz(fuzz); } },
        { "reduction audit", [&] { return reduction_audit(audit_n); } },
        { "budget honesty", budget_honesty },
    };

    int failed = 0;
    for (std::size_t i = 0 ; i < criteria.size() ; ++i) {
        int number = static_cast<int>(i) + 1;
        if (! only.empty() && ! only.contains(number))
            continue;
        auto start = clock_type::now();
        Outcome o;
        try {
            o = criteria[i].second();
        }
        catch (const std::exception & e) {
            o = { false, string("threw: ") + e.what() };
        }
        std::printf("criterion %d (%s): %s - %s [%.1fs]\n", number, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), millis_since(start) / 1000);
        std::fflush(stdout);
        failed += ! o.pass;
    }
    return failed == 0 ? 0 : 1;
}
