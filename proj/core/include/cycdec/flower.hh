#ifndef CYCDEC_FLOWER_HH
#define CYCDEC_FLOWER_HH

#include <cycdec/cycle.hh>
#include <cycdec/length_list.hh>
#include <cycdec/multigraph.hh>

#include <optional>
#include <vector>

namespace cycdec
{
    // Petals meet pairwise exactly in the centre. Each petal starts at the centre.
    struct Flower
    {
        Vertex centre = -1;
        std::vector<Cycle> petals;

        auto petal_lengths() const -> LengthList;
    };

    // Flower structure of the unique nontrivial component of g, if it has one.
    // A single cycle is a one-petal flower centred at its smallest vertex.
    auto detect_flower(const Multigraph & g) -> std::optional<Flower>;
}

#endif
