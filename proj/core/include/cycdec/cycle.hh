#ifndef CYCDEC_CYCLE_HH
#define CYCDEC_CYCLE_HH

#include <cycdec/multigraph.hh>

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace cycdec
{
    // Vertex sequence (v1,...,vm). m = 2 is the doubled edge v1v2.
    // Construction does not validate; use valid() on untrusted input.
    class Cycle
    {
        public:
            Cycle() = default;
            explicit Cycle(std::vector<Vertex> vertices) : _vertices(std::move(vertices)) { }
            Cycle(std::initializer_list<Vertex> vertices) : _vertices(vertices) { }

            auto length() const -> int { return static_cast<int>(_vertices.size()); }
            auto vertices() const -> std::span<const Vertex> { return _vertices; }
            auto operator[](std::size_t i) const -> Vertex { return _vertices[i]; }

            // At least two distinct vertices, all in [0, n).
            auto valid(int n) const -> bool;

            auto contains(Vertex v) const -> bool;
            auto position(Vertex v) const -> int;
            auto has_edge(Vertex u, Vertex v) const -> bool;

            // Edge list with multiplicity: a 2-cycle yields its pair twice.
            auto edges() const -> std::vector<Edge>;
            auto add_to(Multigraph & g) const -> void;
            auto remove_from(Multigraph & g) const -> void;
            auto as_graph(int n) const -> Multigraph;

            // Smallest vertex first, smaller neighbour second.
            auto canonical() const -> Cycle;
            auto relabelled(std::span<const Vertex> map) const -> Cycle;

            auto shared_vertices(const Cycle & other) const -> int;

            auto to_string() const -> std::string;

            auto operator<=>(const Cycle &) const = default;
            auto operator==(const Cycle &) const -> bool = default;

        private:
            std::vector<Vertex> _vertices;
    };

    // Cycle through the 2-regular connected graph g; throws if g is not a single cycle.
    auto cycle_from_graph(const Multigraph & g) -> Cycle;

    auto same_cycle(const Cycle & a, const Cycle & b) -> bool;
}

#endif
