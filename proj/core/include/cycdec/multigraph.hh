#ifndef CYCDEC_MULTIGRAPH_HH
#define CYCDEC_MULTIGRAPH_HH

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace cycdec
{
    using Vertex = int;
    using Edge = std::pair<Vertex, Vertex>;

    // Symmetric multiplicity table on vertices 0..n-1, no loops.
    class Multigraph
    {
        public:
            Multigraph() = default;
            explicit Multigraph(int n);

            auto order() const -> int { return _n; }
            auto mult(Vertex u, Vertex v) const -> int { return _mult[u * _n + v]; }
            auto degree(Vertex v) const -> int { return _degree[v]; }
            auto edge_count() const -> long { return _edges; }
            auto empty() const -> bool { return _edges == 0; }

            auto add_edge(Vertex u, Vertex v, int k = 1) -> void;

            // Throws std::logic_error if the multiplicity would go negative.
            auto remove_edge(Vertex u, Vertex v, int k = 1) -> void;

            auto is_even() const -> bool;
            auto max_mult() const -> int;
            auto all_mults_even() const -> bool;

            // Pairs u < v with positive multiplicity, lexicographic.
            auto edges() const -> std::vector<Edge>;
            auto neighbours(Vertex v) const -> std::vector<Vertex>;

            // Vertex sets of components with at least one edge, each sorted.
            auto nontrivial_components() const -> std::vector<std::vector<Vertex>>;

            auto operator+=(const Multigraph & other) -> Multigraph &;
            auto operator-=(const Multigraph & other) -> Multigraph &;

            // Pointwise comparison; true iff every multiplicity is at most the other's.
            auto is_subgraph_of(const Multigraph & other) const -> bool;

            auto operator==(const Multigraph & other) const -> bool = default;

        private:
            int _n = 0;
            long _edges = 0;
            std::vector<int> _mult;
            std::vector<int> _degree;
    };

    auto operator+(Multigraph a, const Multigraph & b) -> Multigraph;
    auto operator-(Multigraph a, const Multigraph & b) -> Multigraph;

    auto complete_multigraph(int lambda, int n) -> Multigraph;

    // Cyclic distance on Z_n.
    auto cyclic_distance(int n, Vertex i, Vertex j) -> int;

    // The simple graph on Z_n with {i,j} present iff d_n(i,j) is in distances.
    auto circulant(int n, std::span<const int> distances) -> Multigraph;
}

#endif
