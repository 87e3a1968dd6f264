#include <cycdec/packing.hh>

#include <algorithm>

using std::invalid_argument;
using std::string;
using std::to_string;
using std::vector;

namespace cycdec
{
    auto Packing::lengths() const -> LengthList
    {
        vector<int> values;
        values.reserve(cycles.size());
        for (const auto & c : cycles)
            values.push_back(c.length());
        return LengthList(std::move(values));
    }

    auto Packing::used() const -> Multigraph
    {
        Multigraph g(n);
        for (const auto & c : cycles)
            c.add_to(g);
        if (matching)
            for (auto [u, v] : *matching)
                g.add_edge(u, v);
        return g;
    }

    auto Packing::canonicalise() -> void
    {
        for (auto & c : cycles)
            c = c.canonical();
        std::sort(cycles.begin(), cycles.end(), [] (const Cycle & a, const Cycle & b) {
            if (a.length() != b.length())
                return a.length() > b.length();
            return a < b;
        });
        if (matching) {
            for (auto & [u, v] : *matching)
                if (u > v)
                    std::swap(u, v);
            std::sort(matching->begin(), matching->end());
        }
    }

    auto Packing::canonical() const -> Packing
    {
        Packing p = *this;
        p.canonicalise();
        return p;
    }

    auto make_certificate(Packing p) -> Certificate
    {
        p.canonicalise();
        LengthList lengths = p.lengths();
        return Certificate{ std::move(p), std::move(lengths) };
    }

    auto needs_matching(int lambda, int n) -> bool
    {
        return (static_cast<long>(lambda) * (n - 1)) % 2 != 0;
    }

    MultiplicityOverflow::MultiplicityOverflow(Vertex u_, Vertex v_, int used, int lambda) :
        std::runtime_error("multiplicity overflow at {" + to_string(u_) + "," + to_string(v_) + "}: "
                + to_string(used) + " > " + to_string(lambda)),
        u(u_),
        v(v_)
    {
    }

    auto leave(const Packing & p) -> Multigraph
    {
        Multigraph used = p.used();
        for (Vertex u = 0 ; u < p.n ; ++u)
            for (Vertex v = u + 1 ; v < p.n ; ++v)
                if (used.mult(u, v) > p.lambda)
                    throw MultiplicityOverflow(u, v, used.mult(u, v), p.lambda);
        return complete_multigraph(p.lambda, std::max(p.n, 1)) - used;
    }

    auto reason_name(RejectReason r) -> const char *
    {
        switch (r) {
            case RejectReason::None: return "none";
            case RejectReason::BadCycle: return "bad_cycle";
            case RejectReason::BadMatching: return "bad_matching";
            case RejectReason::MultiplicityOverflow: return "multiplicity_overflow";
            case RejectReason::Undercoverage: return "undercoverage";
            case RejectReason::LengthMismatch: return "length_mismatch";
            case RejectReason::MatchingParity: return "matching_parity";
        }
        return "unknown";
    }

    namespace
    {
        auto reject(RejectReason r, string detail) -> Verdict
        {
            return Verdict{ false, r, std::move(detail) };
        }

        auto structural_check(const Packing & p) -> std::optional<Verdict>
        {
            if (p.lambda < 1 || p.n < 1)
                return reject(RejectReason::BadCycle, "lambda and n must be positive");
            for (const auto & c : p.cycles)
                if (! c.valid(p.n))
                    return reject(RejectReason::BadCycle, "invalid cycle " + c.to_string());
            bool want = needs_matching(p.lambda, p.n);
            if (want != p.matching.has_value())
                return reject(RejectReason::MatchingParity, want
                        ? "lambda(n-1) is odd but no perfect matching is present"
                        : "lambda(n-1) is even but a matching is present");
            if (p.matching) {
                if (static_cast<int>(p.matching->size()) * 2 != p.n)
                    return reject(RejectReason::BadMatching, "matching does not have n/2 edges");
                vector<bool> seen(p.n, false);
                for (auto [u, v] : *p.matching) {
                    if (u < 0 || v < 0 || u >= p.n || v >= p.n || u == v || seen[u] || seen[v])
                        return reject(RejectReason::BadMatching, "matching is not a perfect matching");
                    seen[u] = seen[v] = true;
                }
            }
            return std::nullopt;
        }
    }

    auto check_packing(const Packing & p) -> Verdict
    {
        if (auto r = structural_check(p))
            return *r;
        Multigraph l;
        try {
            l = leave(p);
        }
        catch (const MultiplicityOverflow & e) {
            return reject(RejectReason::MultiplicityOverflow, e.what());
        }
        if (! l.is_even())
            return reject(RejectReason::Undercoverage, "leave is not an even graph");
        return Verdict{ true, RejectReason::None, "" };
    }

    auto verify(const Certificate & c) -> Verdict
    {
        const Packing & p = c.packing;
        if (auto r = structural_check(p))
            return *r;
        Multigraph l;
        try {
            l = leave(p);
        }
        catch (const MultiplicityOverflow & e) {
            return reject(RejectReason::MultiplicityOverflow, e.what());
        }
        if (! l.empty()) {
            auto e = l.edges().front();
            return reject(RejectReason::Undercoverage, std::to_string(l.edge_count()) + " edges uncovered, first {"
                    + to_string(e.first) + "," + to_string(e.second) + "}");
        }
        if (p.lengths() != c.claimed)
            return reject(RejectReason::LengthMismatch, "cycle lengths " + p.lengths().to_string()
                    + " differ from claimed " + c.claimed.to_string());
        return Verdict{ true, RejectReason::None, "" };
    }

    auto is_permutation_map(std::span<const Vertex> map, int n) -> bool
    {
        if (static_cast<int>(map.size()) != n)
            return false;
        vector<bool> hit(n, false);
        for (Vertex v : map) {
            if (v < 0 || v >= n || hit[v])
                return false;
            hit[v] = true;
        }
        return true;
    }

    auto apply_vertex_map(const Packing & p, std::span<const Vertex> map) -> Packing
    {
        if (! is_permutation_map(map, p.n))
            throw invalid_argument("vertex map is not a permutation of 0..n-1");
        Packing out;
        out.lambda = p.lambda;
        out.n = p.n;
        out.cycles.reserve(p.cycles.size());
        for (const auto & c : p.cycles)
            out.cycles.push_back(c.relabelled(map));
        if (p.matching) {
            Matching m;
            for (auto [u, v] : *p.matching)
                m.emplace_back(map[u], map[v]);
            out.matching = std::move(m);
        }
        return out;
    }

    auto matching_graph(const Matching & m, int n) -> Multigraph
    {
        Multigraph g(n);
        for (auto [u, v] : m)
            g.add_edge(u, v);
        return g;
    }
}
