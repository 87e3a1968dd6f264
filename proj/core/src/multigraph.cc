#include <cycdec/multigraph.hh>

#include <algorithm>
#include <stdexcept>
#include <string>

using std::logic_error;
using std::invalid_argument;
using std::to_string;
using std::vector;

namespace cycdec
{
    Multigraph::Multigraph(int n) :
        _n(n),
        _mult(static_cast<std::size_t>(n) * n, 0),
        _degree(n, 0)
    {
        if (n < 0)
            throw invalid_argument("negative vertex count");
    }

    auto Multigraph::add_edge(Vertex u, Vertex v, int k) -> void
    {
        if (u == v)
            throw invalid_argument("loop at vertex " + to_string(u));
        _mult[u * _n + v] += k;
        _mult[v * _n + u] += k;
        _degree[u] += k;
        _degree[v] += k;
        _edges += k;
    }

    auto Multigraph::remove_edge(Vertex u, Vertex v, int k) -> void
    {
        if (u == v)
            throw invalid_argument("loop at vertex " + to_string(u));
        if (_mult[u * _n + v] < k)
            throw logic_error("removing absent edge {" + to_string(u) + "," + to_string(v) + "}");
        add_edge(u, v, -k);
    }

    auto Multigraph::is_even() const -> bool
    {
        return std::all_of(_degree.begin(), _degree.end(), [] (int d) { return d % 2 == 0; });
    }

    auto Multigraph::max_mult() const -> int
    {
        int best = 0;
        for (int m : _mult)
            best = std::max(best, m);
        return best;
    }

    auto Multigraph::all_mults_even() const -> bool
    {
        return std::all_of(_mult.begin(), _mult.end(), [] (int m) { return m % 2 == 0; });
    }

    auto Multigraph::edges() const -> vector<Edge>
    {
        vector<Edge> result;
        for (Vertex u = 0 ; u < _n ; ++u)
            for (Vertex v = u + 1 ; v < _n ; ++v)
                if (mult(u, v) > 0)
                    result.emplace_back(u, v);
        return result;
    }

    auto Multigraph::neighbours(Vertex v) const -> vector<Vertex>
    {
        vector<Vertex> result;
        for (Vertex w = 0 ; w < _n ; ++w)
            if (w != v && mult(v, w) > 0)
                result.push_back(w);
        return result;
    }

    auto Multigraph::nontrivial_components() const -> vector<vector<Vertex>>
    {
        vector<vector<Vertex>> result;
        vector<bool> seen(_n, false);
        for (Vertex s = 0 ; s < _n ; ++s) {
            if (seen[s] || _degree[s] == 0)
                continue;
            vector<Vertex> comp{ s }, stack{ s };
            seen[s] = true;
            while (! stack.empty()) {
                Vertex v = stack.back();
                stack.pop_back();
                for (Vertex w = 0 ; w < _n ; ++w)
                    if (w != v && ! seen[w] && mult(v, w) > 0) {
                        seen[w] = true;
                        comp.push_back(w);
                        stack.push_back(w);
                    }
            }
            std::sort(comp.begin(), comp.end());
            result.push_back(std::move(comp));
        }
        return result;
    }

    auto Multigraph::operator+=(const Multigraph & other) -> Multigraph &
    {
        if (other._n != _n)
            throw invalid_argument("order mismatch in union");
        for (std::size_t i = 0 ; i < _mult.size() ; ++i)
            _mult[i] += other._mult[i];
        for (int v = 0 ; v < _n ; ++v)
            _degree[v] += other._degree[v];
        _edges += other._edges;
        return *this;
    }

    auto Multigraph::operator-=(const Multigraph & other) -> Multigraph &
    {
        if (other._n != _n)
            throw invalid_argument("order mismatch in difference");
        if (! other.is_subgraph_of(*this))
            throw logic_error("difference would have negative multiplicity");
        for (std::size_t i = 0 ; i < _mult.size() ; ++i)
            _mult[i] -= other._mult[i];
        for (int v = 0 ; v < _n ; ++v)
            _degree[v] -= other._degree[v];
        _edges -= other._edges;
        return *this;
    }

    auto Multigraph::is_subgraph_of(const Multigraph & other) const -> bool
    {
        if (other._n != _n)
            return false;
        for (std::size_t i = 0 ; i < _mult.size() ; ++i)
            if (_mult[i] > other._mult[i])
                return false;
        return true;
    }

    auto operator+(Multigraph a, const Multigraph & b) -> Multigraph
    {
        a += b;
        return a;
    }

    auto operator-(Multigraph a, const Multigraph & b) -> Multigraph
    {
        a -= b;
        return a;
    }

    auto complete_multigraph(int lambda, int n) -> Multigraph
    {
        if (lambda < 1 || n < 1)
            throw invalid_argument("complete multigraph needs lambda >= 1 and n >= 1");
        Multigraph g(n);
        for (Vertex u = 0 ; u < n ; ++u)
            for (Vertex v = u + 1 ; v < n ; ++v)
                g.add_edge(u, v, lambda);
        return g;
    }

    auto cyclic_distance(int n, Vertex i, Vertex j) -> int
    {
        int d = ((i - j) % n + n) % n;
        return std::min(d, n - d);
    }

    auto circulant(int n, std::span<const int> distances) -> Multigraph
    {
        if (n < 3)
            throw invalid_argument("circulant needs n >= 3");
        if (distances.empty())
            throw invalid_argument("circulant needs a non-empty distance set");
        vector<bool> wanted(n / 2 + 1, false);
        for (int d : distances) {
            if (d < 1 || d > n / 2)
                throw invalid_argument("distance " + to_string(d) + " out of range for n = " + to_string(n));
            wanted[d] = true;
        }
        Multigraph g(n);
        for (Vertex u = 0 ; u < n ; ++u)
            for (Vertex v = u + 1 ; v < n ; ++v)
                if (wanted[cyclic_distance(n, u, v)])
                    g.add_edge(u, v);
        return g;
    }
}
