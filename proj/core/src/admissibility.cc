#include <cycdec/admissibility.hh>
#include <cycdec/packing.hh>

#include <algorithm>

using std::string;
using std::vector;

namespace cycdec
{
    auto condition_name(Condition c) -> const char *
    {
        switch (c) {
            case Condition::A1: return "A1";
            case Condition::A2: return "A2";
            case Condition::A3: return "A3";
            case Condition::A4: return "A4";
            case Condition::A5: return "A5";
        }
        return "?";
    }

    auto AdmissibilityReport::to_string() const -> string
    {
        string s = admissible ? "admissible" : "not admissible";
        if (! failed.empty()) {
            s += ", fails";
            for (auto c : failed)
                s += string(" ") + condition_name(c);
        }
        return s;
    }

    auto binom2(long n) -> long
    {
        return n * (n - 1) / 2;
    }

    auto required_sum(int lambda, int n) -> long
    {
        long s = lambda * binom2(n);
        if (needs_matching(lambda, n))
            s -= n / 2;
        return s;
    }

    auto check_admissible(int lambda, int n, const LengthList & m) -> AdmissibilityReport
    {
        AdmissibilityReport r;
        r.odd_parity = needs_matching(lambda, n);
        if (lambda < 1 || n < 1) {
            r.failed.push_back(Condition::A1);
            return r;
        }
        if (! m.empty() && (m.min() < 2 || m.max() > n))
            r.failed.push_back(Condition::A1);
        if (m.sum() != required_sum(lambda, n))
            r.failed.push_back(r.odd_parity ? Condition::A3 : Condition::A2);
        if (lambda % 2 == 0) {
            if (m.max() + m.size() - 2 > lambda / 2 * binom2(n))
                r.failed.push_back(Condition::A4);
        }
        else if (2L * m.nu(2) > (lambda - 1) * binom2(n))
            r.failed.push_back(Condition::A5);
        r.admissible = r.failed.empty();
        return r;
    }

    auto is_admissible(int lambda, int n, const LengthList & m) -> bool
    {
        return check_admissible(lambda, n, m).admissible;
    }

    auto is_ancestor(int lambda, int n, const LengthList & m) -> bool
    {
        if (! is_admissible(lambda, n, m))
            return false;
        int nu3 = m.nu(3);
        if (n == 4 && nu3 != 0)
            return false;
        if (n == 5 && nu3 + m.nu(4) > 1)
            return false;
        if (n >= 6) {
            int middle = 0;
            for (int v : m.values())
                if (v >= 4 && v <= n - 1)
                    ++middle;
            if (middle > 1)
                return false;
            if (nu3 >= 1 && m.nu(n - 2) + m.nu(n - 1) != 0)
                return false;
            if (nu3 >= 2 && m.nu(2) > n / 2 - 3)
                return false;
        }
        return true;
    }

    auto sufficient_admissible(int lambda, int n, const LengthList & m) -> bool
    {
        if (lambda < 2)
            throw PreconditionError("sufficient condition needs lambda >= 2");
        auto r = check_admissible(lambda, n, m);
        for (auto c : r.failed)
            if (c == Condition::A1 || c == Condition::A2 || c == Condition::A3)
                throw PreconditionError("list violates (A1)-(A3): " + r.to_string());
        if (m.nu(2) < n)
            return true;
        auto v = m.values();
        return lambda % 2 == 0 && v.size() >= 2 && v[0] == v[1];
    }

    auto bmbs_bound(const Multigraph & g, const Cycle & c) -> long
    {
        if (! g.all_mults_even())
            throw PreconditionError("bound needs every multiplicity even");
        Multigraph h = c.as_graph(g.order());
        if (! h.is_subgraph_of(g))
            throw PreconditionError("cycle is not contained in the graph");
        return g.edge_count() / 2 - c.length() + 2;
    }

    auto equality_case(int lambda, int n, const LengthList & m) -> EqualityCase
    {
        if (! is_admissible(lambda, n, m) || m.empty())
            return EqualityCase::None;
        if (lambda % 2 == 0) {
            if (m.max() + m.size() - 2 == lambda / 2 * binom2(n))
                return EqualityCase::EvenMaxPlusCount;
        }
        else if (lambda >= 3 && 2L * m.nu(2) == (lambda - 1) * binom2(n))
            return EqualityCase::OddTwos;
        return EqualityCase::None;
    }

    namespace
    {
        struct PartitionWalk
        {
            long total;
            int lo;
            const std::function<bool (const LengthList &)> & visit;
            const std::function<bool (int largest, int count, long remaining, int twos)> * prune = nullptr;
            vector<int> parts;
            bool stopped = false;

            auto run(long remaining, int hi, int twos) -> void
            {
                if (stopped)
                    return;
                if (prune && (*prune)(parts.empty() ? 0 : parts.front(), static_cast<int>(parts.size()), remaining, twos))
                    return;
                if (remaining == 0) {
                    if (! visit(LengthList(parts)))
                        stopped = true;
                    return;
                }
                for (int p = static_cast<int>(std::min<long>(hi, remaining)) ; p >= lo && ! stopped ; --p) {
                    long rest = remaining - p;
                    if (rest != 0 && rest < lo)
                        continue;
                    parts.push_back(p);
                    run(rest, p, twos + (p == 2));
                    parts.pop_back();
                }
            }
        };
    }

    auto for_each_partition(long total, int lo, int hi,
            const std::function<bool (const LengthList &)> & visit) -> void
    {
        if (total < 0 || lo < 1)
            return;
        PartitionWalk walk{ total, lo, visit, nullptr, {}, false };
        walk.run(total, hi, 0);
    }

    auto for_each_admissible(int lambda, int n, const EnumerateOptions & options,
            const std::function<bool (const LengthList &)> & visit) -> std::uint64_t
    {
        std::uint64_t count = 0;
        if (lambda < 1 || n < 1)
            return 0;
        long total = required_sum(lambda, n);
        long c2 = binom2(n);
        // Prunes are monotone: once violated by a prefix they stay violated.
        std::function<bool (int, int, long, int)> prune = [&] (int largest, int count_so_far, long remaining, int twos) {
            if (lambda % 2 == 0) {
                // Remaining parts add at least ceil(remaining / largest) more entries.
                long at_least = largest > 0 ? (remaining + largest - 1) / largest : 0;
                return largest + count_so_far + at_least - 2 > lambda / 2 * c2 && largest > 0;
            }
            return 2L * twos > (lambda - 1) * c2;
        };
        auto wrapped = [&] (const LengthList & m) {
            if (! is_admissible(lambda, n, m))
                return true;
            if (options.ancestors_only && ! is_ancestor(lambda, n, m))
                return true;
            if (options.max_count != 0 && count >= options.max_count)
                throw EnumerationBudgetExceeded("more than " + std::to_string(options.max_count) + " admissible lists");
            ++count;
            return visit(m);
        };
        std::function<bool (const LengthList &)> fn = wrapped;
        PartitionWalk walk{ total, 2, fn, &prune, {}, false };
        if (n >= 2)
            walk.run(total, n, 0);
        else if (total == 0)
            wrapped(LengthList{});
        return count;
    }

    auto enumerate_admissible(int lambda, int n, const EnumerateOptions & options) -> vector<LengthList>
    {
        vector<LengthList> result;
        for_each_admissible(lambda, n, options, [&] (const LengthList & m) {
            result.push_back(m);
            return true;
        });
        return result;
    }
}
