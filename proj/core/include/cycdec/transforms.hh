#ifndef CYCDEC_TRANSFORMS_HH
#define CYCDEC_TRANSFORMS_HH

#include <cycdec/admissibility.hh>
#include <cycdec/flower.hh>
#include <cycdec/oracle.hh>
#include <cycdec/packing.hh>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycdec
{
    // A transform could not be carried out (no qualifying pattern, or every
    // mechanism exhausted its budget). Distinct from PreconditionError.
    class TransformError : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    enum class SwitchMode { PoleShift, Cross };

    auto mode_name(SwitchMode m) -> const char *;

    struct SwitchOutcome
    {
        Packing packing;
        Vertex terminus = -1;
        SwitchMode mode = SwitchMode::PoleShift;
    };

    // Optional filter on which outcomes the caller can use.
    using SwitchAccept = std::function<bool (SwitchMode, Vertex terminus)>;

    struct SwitchOptions
    {
        SwitchAccept accept;
        // Allow the terminus to coincide with the origin (pole-shift only).
        bool allow_origin_terminus = true;
        std::uint64_t max_nodes = 200'000;
        SearchBudget fallback_budget = SearchBudget::nodes(200'000);
    };

    // The (a,b)-switch with origin c: relabel a <-> b in some of the parts, so
    // that the leave changes by -{ac,at}+{bc,bt} (pole-shift) or
    // -{ac,bt}+{bc,at} (cross). Every outcome is verified before return.
    auto perform_switch(const Packing & p, Vertex a, Vertex b, Vertex c, const SwitchOptions & options = {}) -> SwitchOutcome;

    // The leave the contract predicts for a given outcome.
    auto expected_switch_leave(const Multigraph & l, Vertex a, Vertex b, Vertex c, SwitchMode mode, Vertex t) -> Multigraph;

    // (M,m1,m2) -> (M,m1',m2') where an m1-cycle and an m2-cycle share two vertices.
    auto equalise(const Certificate & d, int m1, int m2, int m1p, int m2p) -> Certificate;

    // (M,h,m,m') -> (M,h,m+m') when h >= m+m' and m+m'+h <= n+1.
    auto join(const Certificate & d, int h, int m, int mp) -> Certificate;

    // Leave whose only nontrivial component is an (M',m,2)-flower becomes an
    // (M',m-1)-flower after adding a 3-cycle. m = 0 picks the longest petal >= 3.
    auto adding3s(const Packing & p, int m = 0) -> Packing;

    // (M,m,2) -> (M,m-1,3) when the m-cycle meets a 2-cycle.
    auto equalise2(const Certificate & d, int m) -> Certificate;

    // lambda odd and 2 nu_2(M) > (lambda-1)(C(n,2)-C(m,2)): (M,m,2) -> (M,m1',m2').
    auto almostall2s(const Certificate & d, int m, int m1p, int m2p) -> Certificate;

    // (M,2,2,2) -> (M,3,3) for n >= 5 and 2 nu_2(M) >= n-5.
    auto two3s(const Certificate & d) -> Certificate;

    // Three 2-cycles, the first two sharing a vertex, become two 3-cycles.
    auto addtwo3s(const Certificate & d, int i, int j, int k) -> Certificate;

    // (M,2,2,5) -> (M,3,3,3) where vertex disjoint 2-cycles are joined by a 5-cycle edge.
    auto flip_225_to_333(const Certificate & d) -> Certificate;

    struct FlowerShapeTrace
    {
        std::vector<int> levels;    // h at each level
        std::vector<char> shapes;   // 'a' or 'b' observed at each level
    };

    // Leave of size 3h, either a (2^{h-1})-flower plus an (h+2)-cycle with a
    // vertex of degree 2h, or a (2^h)-flower plus an h-cycle. Returns the
    // completed decomposition.
    auto reduce_flower(const Packing & p, int h, FlowerShapeTrace * trace = nullptr) -> Packing;

    // Replace the cycles at the given indices by a decomposition of their union
    // into the target lengths, trying small neighbourhoods and switches when the
    // union alone does not split. Returns nullopt when nothing works.
    auto local_repack(const Packing & p, const std::vector<int> & chosen, const LengthList & target,
            const SearchBudget & budget = SearchBudget::nodes(50'000)) -> std::optional<Packing>;
}

#endif
