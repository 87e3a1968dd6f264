#include <cycdec/flower.hh>

#include <stdexcept>

using std::optional;
using std::vector;

namespace cycdec
{
    auto Flower::petal_lengths() const -> LengthList
    {
        vector<int> values;
        for (const auto & p : petals)
            values.push_back(p.length());
        return LengthList(std::move(values));
    }

    auto detect_flower(const Multigraph & g) -> optional<Flower>
    {
        auto comps = g.nontrivial_components();
        if (comps.size() != 1)
            return std::nullopt;
        const auto & comp = comps.front();

        Vertex centre = -1;
        for (Vertex v : comp) {
            int d = g.degree(v);
            if (d % 2 != 0 || d < 2)
                return std::nullopt;
            if (d > 2) {
                if (centre != -1)
                    return std::nullopt;
                centre = v;
            }
        }

        if (centre == -1) {
            try {
                Cycle c = cycle_from_graph(g).canonical();
                return Flower{ c[0], { c } };
            }
            catch (const std::logic_error &) {
                return std::nullopt;
            }
        }

        Flower f;
        f.centre = centre;
        int n = g.order();
        vector<bool> used(n, false);
        used[centre] = true;
        for (Vertex start : g.neighbours(centre)) {
            if (used[start])
                continue;
            if (g.mult(centre, start) == 2) {
                if (g.degree(start) != 2)
                    return std::nullopt;
                used[start] = true;
                f.petals.push_back(Cycle{ centre, start });
                continue;
            }
            if (g.mult(centre, start) != 1)
                return std::nullopt;
            vector<Vertex> seq{ centre, start };
            used[start] = true;
            Vertex prev = centre, cur = start;
            while (true) {
                Vertex next = -1;
                for (Vertex w = 0 ; w < n ; ++w)
                    if (w != prev && w != cur && g.mult(cur, w) > 0) {
                        next = w;
                        break;
                    }
                if (next == -1 || g.mult(cur, next) != 1)
                    return std::nullopt;
                if (next == centre)
                    break;
                if (used[next])
                    return std::nullopt;
                used[next] = true;
                seq.push_back(next);
                prev = cur;
                cur = next;
            }
            f.petals.push_back(Cycle(std::move(seq)));
        }

        long total = 0;
        for (const auto & p : f.petals)
            total += p.length();
        if (total != g.edge_count() || f.petals.size() * 2 != static_cast<std::size_t>(g.degree(centre)))
            return std::nullopt;
        return f;
    }
}
