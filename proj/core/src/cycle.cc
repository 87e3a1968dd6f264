#include <cycdec/cycle.hh>

#include <algorithm>
#include <stdexcept>

using std::logic_error;
using std::string;
using std::vector;

namespace cycdec
{
    auto Cycle::valid(int n) const -> bool
    {
        if (_vertices.size() < 2)
            return false;
        vector<bool> seen(std::max(n, 0), false);
        for (Vertex v : _vertices) {
            if (v < 0 || v >= n || seen[v])
                return false;
            seen[v] = true;
        }
        return true;
    }

    auto Cycle::contains(Vertex v) const -> bool
    {
        return std::find(_vertices.begin(), _vertices.end(), v) != _vertices.end();
    }

    auto Cycle::position(Vertex v) const -> int
    {
        auto it = std::find(_vertices.begin(), _vertices.end(), v);
        return it == _vertices.end() ? -1 : static_cast<int>(it - _vertices.begin());
    }

    auto Cycle::has_edge(Vertex u, Vertex v) const -> bool
    {
        int i = position(u);
        if (i < 0)
            return false;
        int m = length();
        return _vertices[(i + 1) % m] == v || _vertices[(i + m - 1) % m] == v;
    }

    auto Cycle::edges() const -> vector<Edge>
    {
        vector<Edge> result;
        int m = length();
        if (m == 2) {
            result.emplace_back(_vertices[0], _vertices[1]);
            result.emplace_back(_vertices[0], _vertices[1]);
            return result;
        }
        for (int i = 0 ; i < m ; ++i)
            result.emplace_back(_vertices[i], _vertices[(i + 1) % m]);
        return result;
    }

    auto Cycle::add_to(Multigraph & g) const -> void
    {
        int m = length();
        if (m == 2)
            g.add_edge(_vertices[0], _vertices[1], 2);
        else
            for (int i = 0 ; i < m ; ++i)
                g.add_edge(_vertices[i], _vertices[(i + 1) % m]);
    }

    auto Cycle::remove_from(Multigraph & g) const -> void
    {
        int m = length();
        if (m == 2)
            g.remove_edge(_vertices[0], _vertices[1], 2);
        else
            for (int i = 0 ; i < m ; ++i)
                g.remove_edge(_vertices[i], _vertices[(i + 1) % m]);
    }

    auto Cycle::as_graph(int n) const -> Multigraph
    {
        Multigraph g(n);
        add_to(g);
        return g;
    }

    auto Cycle::canonical() const -> Cycle
    {
        int m = length();
        if (m == 0)
            return *this;
        int s = static_cast<int>(std::min_element(_vertices.begin(), _vertices.end()) - _vertices.begin());
        Vertex next = _vertices[(s + 1) % m], prev = _vertices[(s + m - 1) % m];
        vector<Vertex> out;
        out.reserve(m);
        if (next <= prev)
            for (int i = 0 ; i < m ; ++i)
                out.push_back(_vertices[(s + i) % m]);
        else
            for (int i = 0 ; i < m ; ++i)
                out.push_back(_vertices[(s - i + m) % m]);
        return Cycle(std::move(out));
    }

    auto Cycle::relabelled(std::span<const Vertex> map) const -> Cycle
    {
        vector<Vertex> out;
        out.reserve(_vertices.size());
        for (Vertex v : _vertices)
            out.push_back(map[v]);
        return Cycle(std::move(out));
    }

    auto Cycle::shared_vertices(const Cycle & other) const -> int
    {
        int count = 0;
        for (Vertex v : _vertices)
            if (other.contains(v))
                ++count;
        return count;
    }

    auto Cycle::to_string() const -> string
    {
        string s = "(";
        for (std::size_t i = 0 ; i < _vertices.size() ; ++i) {
            if (i > 0)
                s += ",";
            s += std::to_string(_vertices[i]);
        }
        return s + ")";
    }

    auto cycle_from_graph(const Multigraph & g) -> Cycle
    {
        auto comps = g.nontrivial_components();
        if (comps.size() != 1)
            throw logic_error("graph is not a single cycle");
        const auto & comp = comps.front();
        for (Vertex v : comp)
            if (g.degree(v) != 2)
                throw logic_error("graph is not 2-regular");
        if (comp.size() == 2)
            return Cycle{ comp[0], comp[1] };
        vector<Vertex> seq{ comp[0] };
        Vertex prev = -1, cur = comp[0];
        while (true) {
            Vertex next = -1;
            for (Vertex w = 0 ; w < g.order() ; ++w)
                if (w != cur && w != prev && g.mult(cur, w) > 0) {
                    next = w;
                    break;
                }
            if (next == comp[0] || next == -1)
                break;
            seq.push_back(next);
            prev = cur;
            cur = next;
        }
        if (seq.size() != comp.size())
            throw logic_error("graph is not a single cycle");
        return Cycle(std::move(seq));
    }

    auto same_cycle(const Cycle & a, const Cycle & b) -> bool
    {
        return a.canonical() == b.canonical();
    }
}
