#include <cycdec/solver.hh>
#include <cycdec/transforms.hh>

#include <algorithm>
#include <set>

using std::optional;
using std::string;
using std::vector;

namespace cycdec
{
    namespace
    {
        auto step(const LengthList & m, const LengthList & out, const LengthList & in, string rule, string transform,
                int x, int y) -> ReductionStep
        {
            return ReductionStep{ m, m - out + in, std::move(rule), std::move(transform), x, y };
        }

        // The two smallest entries of m within [lo, hi], if there are two.
        auto two_smallest(const LengthList & m, int lo, int hi) -> optional<std::pair<int, int>>
        {
            vector<int> in;
            for (int v : m.values())
                if (v >= lo && v <= hi)
                    in.push_back(v);
            if (in.size() < 2)
                return std::nullopt;
            std::sort(in.begin(), in.end());
            return std::pair{ in[0], in[1] };
        }
    }

    auto ReductionTrace::to_strings() const -> vector<string>
    {
        vector<string> out;
        for (const auto & s : steps)
            out.push_back(s.list.to_string() + " -[" + s.rule + "," + s.transform + "]-> " + s.parent.to_string());
        return out;
    }

    auto reduction_parent(int lambda, int n, const LengthList & m) -> optional<ReductionStep>
    {
        if (lambda < 2 || is_ancestor(lambda, n, m) || equality_case(lambda, n, m) != EqualityCase::None)
            return std::nullopt;
        long c2 = binom2(n);
        long twice_twos = 2L * m.nu(2);
        bool odd = lambda % 2 == 1;

        optional<ReductionStep> s;
        if (n == 4 && m.nu(3) >= 1)
            s = step(m, { 3, 3 }, { 4, 2 }, "1", "equalise", 3, 3);
        else if (n == 5 && m.nu(3) + m.nu(4) >= 2) {
            auto [x, y] = *two_smallest(m, 3, 4);
            s = step(m, { x, y }, { x - 1, y + 1 }, "2", x == 3 && y == 3 ? "equalise2" : "equalise", x, y);
        }
        else if (n >= 6) {
            if (auto xy = two_smallest(m, 4, n - 1)) {
                auto [x, y] = *xy;
                if (x + y >= n + 2)
                    s = step(m, { x, y }, { x - 1, y + 1 }, "3a", "equalise", x, y);
                else if (x == 4 && odd && twice_twos == (lambda - 1) * c2 - 2)
                    s = step(m, { x, y }, { 2, y + 2 }, "3b*", "almostall2s", x, y);
                else
                    s = step(m, { x }, { 2, x - 2 }, "3b", "join", x, y);
            }
            else if (m.nu(3) >= 1 && m.nu(n - 2) + m.nu(n - 1) >= 1) {
                int x = m.nu(n - 1) >= 1 ? n - 1 : n - 2;
                s = step(m, { 3, x }, { 2, x + 1 }, "4", "equalise2", 3, x);
            }
            else if (m.nu(3) >= 2 && m.nu(2) >= n / 2 - 2) {
                if (! odd || twice_twos <= (lambda - 1) * c2 - 6)
                    s = step(m, { 3, 3 }, { 2, 2, 2 }, "5a", "two3s", 3, 3);
                else
                    s = step(m, { 3, 3 }, { 4, 2 }, "5b", "almostall2s", 3, 3);
            }
        }
        if (! s)
            throw std::logic_error("reduction: " + m.to_string() + " is neither an ancestor nor reducible");
        if (! is_admissible(lambda, n, s->parent) || ! s->parent.larger_than(m))
            throw std::logic_error("reduction: parent " + s->parent.to_string() + " of " + m.to_string()
                    + " is not a larger admissible list");
        return s;
    }

    auto reduction_children(int lambda, int n, const LengthList & m) -> vector<ReductionStep>
    {
        vector<ReductionStep> out;
        if (lambda < 2)
            return out;
        std::set<vector<int>> seen;
        auto consider = [&] (const LengthList & take, const LengthList & give) {
            for (int v : take.values())
                if (m.nu(v) < take.nu(v))
                    return;
            LengthList child = m - take + give;
            vector<int> key(child.values().begin(), child.values().end());
            if (! seen.insert(key).second || ! is_admissible(lambda, n, child))
                return;
            auto p = reduction_parent(lambda, n, child);
            if (p && p->parent == m)
                out.push_back(*p);
        };

        if (n == 4)
            consider({ 4, 2 }, { 3, 3 });
        if (n == 5)
            for (auto [x, y] : { std::pair{ 3, 3 }, std::pair{ 3, 4 }, std::pair{ 4, 4 } })
                consider({ x - 1, y + 1 }, { x, y });
        if (n >= 6) {
            for (int x = 4 ; x <= n - 1 ; ++x)
                for (int y = x ; y <= n - 1 ; ++y)
                    if (x + y >= n + 2)
                        consider({ x - 1, y + 1 }, { x, y });
            for (int y = 4 ; y <= n - 1 ; ++y)
                if (4 + y <= n + 1)
                    consider({ 2, y + 2 }, { 4, y });
            for (int x = 4 ; x <= n - 1 ; ++x)
                consider({ 2, x - 2 }, { x });
            for (int x : { n - 2, n - 1 })
                consider({ 2, x + 1 }, { 3, x });
            consider({ 2, 2, 2 }, { 3, 3 });
            consider({ 4, 2 }, { 3, 3 });
        }
        std::sort(out.begin(), out.end(), [] (const ReductionStep & a, const ReductionStep & b) {
            return b.list < a.list;
        });
        return out;
    }

    auto apply_reduction(const Certificate & d, const ReductionStep & s) -> Certificate
    {
        Certificate out;
        int x = s.x, y = s.y;
        if (s.rule == "1")
            out = equalise(d, 2, 4, 3, 3);
        else if (s.rule == "2")
            out = x == 3 && y == 3 ? equalise2(d, 4) : equalise(d, x - 1, y + 1, x, y);
        else if (s.rule == "3a")
            out = equalise(d, x - 1, y + 1, x, y);
        else if (s.rule == "3b*")
            out = almostall2s(d, y + 2, 4, y);
        else if (s.rule == "3b")
            out = join(d, y, 2, x - 2);
        else if (s.rule == "4")
            out = equalise2(d, y + 1);
        else if (s.rule == "5a")
            out = two3s(d);
        else if (s.rule == "5b")
            out = almostall2s(d, 4, 3, 3);
        else
            throw std::logic_error("reduction: unknown rule " + s.rule);
        if (! (out.claimed == s.list))
            throw TransformError("reduction: rule " + s.rule + " produced " + out.claimed.to_string()
                    + " instead of " + s.list.to_string());
        return out;
    }

    auto reduction_trace(int lambda, int n, const LengthList & m) -> ReductionTrace
    {
        ReductionTrace t;
        LengthList cur = m;
        while (auto s = reduction_parent(lambda, n, cur)) {
            t.steps.push_back(*s);
            cur = s->parent;
        }
        t.terminal = cur;
        return t;
    }
}
