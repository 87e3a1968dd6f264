#ifndef CYCDEC_PACKING_HH
#define CYCDEC_PACKING_HH

#include <cycdec/cycle.hh>
#include <cycdec/length_list.hh>
#include <cycdec/multigraph.hh>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycdec
{
    using Matching = std::vector<Edge>;

    // Cycles (and optionally a perfect matching) inside lambda K_n.
    struct Packing
    {
        int lambda = 1;
        int n = 0;
        std::vector<Cycle> cycles;
        std::optional<Matching> matching;

        auto lengths() const -> LengthList;

        // Multigraph of all used edges, without any bound check.
        auto used() const -> Multigraph;

        // Sort cycles and matching into canonical form.
        auto canonicalise() -> void;
        auto canonical() const -> Packing;
    };

    struct Certificate
    {
        Packing packing;
        LengthList claimed;
    };

    auto make_certificate(Packing p) -> Certificate;

    // lambda(n-1) odd: decompositions of lambda K_n carry a perfect matching.
    auto needs_matching(int lambda, int n) -> bool;

    class MultiplicityOverflow : public std::runtime_error
    {
        public:
            MultiplicityOverflow(Vertex u, Vertex v, int used, int lambda);
            Vertex u, v;
    };

    // lambda K_n minus used edges; throws MultiplicityOverflow naming the first bad pair.
    auto leave(const Packing & p) -> Multigraph;

    enum class RejectReason
    {
        None,
        BadCycle,
        BadMatching,
        MultiplicityOverflow,
        Undercoverage,
        LengthMismatch,
        MatchingParity
    };

    auto reason_name(RejectReason r) -> const char *;

    struct Verdict
    {
        bool accepted = false;
        RejectReason reason = RejectReason::None;
        std::string detail;

        explicit operator bool() const { return accepted; }
    };

    // Everything except complete coverage and length claims: cycles valid,
    // matching rule, no overflow, even leave.
    auto check_packing(const Packing & p) -> Verdict;

    auto verify(const Certificate & c) -> Verdict;

    // map must be a permutation of 0..n-1; throws std::invalid_argument otherwise.
    auto apply_vertex_map(const Packing & p, std::span<const Vertex> map) -> Packing;

    auto is_permutation_map(std::span<const Vertex> map, int n) -> bool;

    auto matching_graph(const Matching & m, int n) -> Multigraph;
}

#endif
