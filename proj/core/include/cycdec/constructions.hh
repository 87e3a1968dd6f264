#ifndef CYCDEC_CONSTRUCTIONS_HH
#define CYCDEC_CONSTRUCTIONS_HH

#include <cycdec/oracle.hh>
#include <cycdec/packing.hh>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycdec
{
    class ConstructionError : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    // Path hosts are 2J_n on {0,...,n+1}. Prism hosts are J_n on
    // V_i = {i,i'} for i = 0..n/2, with i stored as 2i and i' as 2i+1.
    enum class JHost { Path, Prism };

    auto prism_vertex(int i, bool primed) -> Vertex;

    struct JPathDecomposition
    {
        JHost host = JHost::Path;
        int n = 0;
        std::vector<Cycle> cycles;
        std::vector<std::vector<Vertex>> paths;     // the two distinguished paths
        bool plus = false;                          // prism only: each path joins V_0 to V_{n/2}

        auto order() const -> int { return n + 2; }
        auto lengths() const -> LengthList;
        // Prism only: the 1-regular remainder (union of parts) - J_n.
        auto implicit_matching() const -> std::vector<Edge>;
    };

    auto j_host_graph(JHost host, int n) -> Multigraph;

    // Throws ConstructionError naming the first violated invariant.
    auto check_j(const JPathDecomposition & d) -> void;

    // 2J_k -> (k+1, 2^{(k-1)/2}, k*, k*) for odd k.
    auto j_path_odd(int k) -> JPathDecomposition;
    // 2J_k -> (2k1+1, 2k2+1, 2^{(k-2)/2}, k*, k*) for k = 2k1+2k2.
    auto j_path_two_odds(int k1, int k2) -> JPathDecomposition;

    // J_{2k} -> (2k, (2k)*), k >= 2.
    auto j_prism_even_star(int k) -> JPathDecomposition;
    // J_{2k} -> (2k1+1, 2k2+1, (2k)*), k1 >= 2, k2 >= 1, k = k1+k2+1.
    auto j_prism_two_odds_star(int k1, int k2) -> JPathDecomposition;
    // J_4 -> (2,2,4*), J_8 -> (2,3,3,8*), J_12 -> (3,3,3,3,12*); n is 4, 8 or 12.
    auto j_prism_small_star(int n) -> JPathDecomposition;
    // J_{2k} -> (2k, (2k)+), k >= 1.
    auto j_prism_even_plus(int k) -> JPathDecomposition;
    // J_{2k} -> (2k1+1, 2k2+1, (2k)+), k1, k2 >= 1, k = k1+k2+1.
    auto j_prism_two_odds_plus(int k1, int k2) -> JPathDecomposition;

    auto concatenate_j(const std::vector<JPathDecomposition> & parts) -> JPathDecomposition;

    // A decomposition of some graph into cycles, with the graph itself.
    struct CycleSystem
    {
        Multigraph graph;
        std::vector<Cycle> cycles;
    };

    // Identify 0,1 with n,n+1: an (M,n,n)-decomposition of 2<{1,2}>_n.
    auto circ12_close(const JPathDecomposition & d) -> std::vector<Cycle>;

    // The (M,n)-decomposition of <{1,2}>_n from the explicit cycles C_j and
    // their leave. All parts of m are at least 3 and sum to n >= 5.
    auto circ12_single(int n, const LengthList & m) -> std::vector<Cycle>;

    // (M,n,n)-decomposition of 2<{1,2}>_n; sum M = 2n, 2 nu_2(M) >= n.
    auto circ12_two_hams(int n, const LengthList & m) -> std::vector<Cycle>;

    // (M,n,n,n)-decomposition of 2<{1,2}>_n; sum M = n, parts in [2,n].
    auto circ12_three_hams(int n, const LengthList & m) -> std::vector<Cycle>;

    // (2^a, n^{2b})-decomposition of 2<{3,...,floor(n/2)}>_n.
    auto twos_and_hams(int n, int a, int b, const SearchBudget & budget,
            HamiltonCache * cache = &HamiltonCache::global()) -> std::vector<Cycle>;

    struct HamAndMatching
    {
        CycleSystem system;             // graph = <{n/2-1,n/2}>_n + matching
        std::vector<Edge> matching;     // perfect matching I
    };

    // Even n >= 6, sum M = n: (M,n)-decomposition of <{n/2-1,n/2}>_n + I.
    auto ham_and_matching(int n, const LengthList & m, const SearchBudget & budget) -> HamAndMatching;

    struct TwoWays
    {
        Multigraph graph;
        std::vector<Cycle> many;    // (M,n)
        std::vector<Cycle> one;     // (m,n): the m-cycle first
    };

    // Subgraph of 2K_n with an (M,n)- and an (sum M, n)-decomposition.
    auto sum_list_to_many(int n, const LengthList & m) -> TwoWays;

    // n odd. d1: (M1)-decomposition of K_n with an n-cycle. d2: (M2, sum M3)-decomposition of K_n.
    auto three_lists(int n, const Certificate & d1, const Certificate & d2, const LengthList & m3) -> Certificate;

    enum class OneFactorVariant { Base, SwapFour, SwapFive };

    // n even. m1 = (n^{n/2-2}); d2: (M2)-decomposition of K_n with matching;
    // m3 has an n. The variants add (3,3)-(2,4) or (3,3,3)-(2,2,5).
    auto three_lists_one_factor(int n, const Certificate & d2, const LengthList & m3, OneFactorVariant variant,
            const SearchBudget & budget, HamiltonCache * cache = &HamiltonCache::global()) -> Certificate;

    // Relabel p so that its cycle at index `from` becomes `to` (same length).
    auto align_cycle(const Packing & p, int from, const Cycle & to) -> Packing;
}

#endif
