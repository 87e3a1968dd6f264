#include "cycle_search.hh"

#include <algorithm>
#include <bit>
#include <bitset>
#include <stdexcept>

using std::uint64_t;
using std::vector;

namespace cycdec::detail
{
    namespace
    {
        constexpr std::size_t max_failed_states = 4'000'000;
        constexpr int max_order = 64;

        auto splitmix(uint64_t & state) -> uint64_t
        {
            uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }
    }

    CycleSearch::CycleSearch(const Multigraph & g, const std::optional<LengthList> & lengths,
            const SearchBudget & budget, Options options) :
        _n(g.order()),
        _any_length(! lengths.has_value()),
        _options(options),
        _budget(budget),
        _mult(static_cast<std::size_t>(_n) * _n, 0),
        _nbr(_n, 0),
        _deg(_n, 0),
        _counts(_n + 1, 0),
        _touched(_n, 0),
        _on_path(_n, 0),
        _rng(budget.seed)
    {
        if (_n > max_order)
            throw std::invalid_argument("exact search supports at most 64 vertices");
        _max_mult = std::max(g.max_mult(), 1);
        uint64_t state = 0x1234567ULL;
        _zmult_a.resize(_mult.size() * (_max_mult + 1));
        _zmult_b.resize(_zmult_a.size());
        for (std::size_t i = 0 ; i < _zmult_a.size() ; ++i) {
            _zmult_a[i] = splitmix(state);
            _zmult_b[i] = splitmix(state);
        }
        int max_count = 0;
        if (lengths)
            for (int v : lengths->values())
                if (v >= 2 && v <= _n)
                    max_count = std::max(max_count, lengths->nu(v));
        _zcount_a.resize((_n + 1) * (max_count + 1));
        _zcount_b.resize(_zcount_a.size());
        for (std::size_t i = 0 ; i < _zcount_a.size() ; ++i) {
            _zcount_a[i] = splitmix(state);
            _zcount_b[i] = splitmix(state);
        }

        for (Vertex u = 0 ; u < _n ; ++u)
            for (Vertex v = u + 1 ; v < _n ; ++v)
                if (g.mult(u, v) > 0)
                    set_mult(u, v, g.mult(u, v));

        if (lengths) {
            for (int v : lengths->values()) {
                if (v < 2 || v > _n) {
                    _cycles_left = -1;
                    continue;
                }
                ++_counts[v];
            }
            if (_cycles_left == 0) {
                for (int l = 2 ; l <= _n ; ++l) {
                    int c = _counts[l];
                    _counts[l] = 0;
                    set_count(l, c);
                }
                _cycles_left = lengths->size();
            }
        }

        if (budget.max_time.count() > 0) {
            _has_deadline = true;
            _deadline = std::chrono::steady_clock::now() + budget.max_time;
        }
    }

    auto CycleSearch::set_mult(Vertex u, Vertex v, int m) -> void
    {
        int a = std::min(u, v), b = std::max(u, v);
        std::size_t pair = static_cast<std::size_t>(a) * _n + b;
        int old = _mult[pair];
        if (m > _max_mult)
            throw std::logic_error("multiplicity above hashed range");
        _ha ^= _zmult_a[pair * (_max_mult + 1) + old] ^ _zmult_a[pair * (_max_mult + 1) + m];
        _hb ^= _zmult_b[pair * (_max_mult + 1) + old] ^ _zmult_b[pair * (_max_mult + 1) + m];
        _mult[pair] = m;
        _mult[static_cast<std::size_t>(b) * _n + a] = m;
        _deg[a] += m - old;
        _deg[b] += m - old;
        _edges += m - old;
        if (m > 0) {
            _nbr[a] |= uint64_t{ 1 } << b;
            _nbr[b] |= uint64_t{ 1 } << a;
        }
        else {
            _nbr[a] &= ~(uint64_t{ 1 } << b);
            _nbr[b] &= ~(uint64_t{ 1 } << a);
        }
    }

    auto CycleSearch::set_count(int length, int c) -> void
    {
        if (_any_length)
            return;
        int stride = static_cast<int>(_zcount_a.size() / (_n + 1));
        int old = _counts[length];
        _ha ^= _zcount_a[length * stride + old] ^ _zcount_a[length * stride + c];
        _hb ^= _zcount_b[length * stride + old] ^ _zcount_b[length * stride + c];
        _counts[length] = c;
    }

    auto CycleSearch::out_of_budget() -> bool
    {
        if (_budget.max_nodes != 0 && _nodes > _budget.max_nodes)
            return true;
        if (_has_deadline && (_nodes & 255) == 0 && std::chrono::steady_clock::now() > _deadline)
            return true;
        return false;
    }

    auto CycleSearch::run(const std::function<bool (std::span<const Cycle>)> & visit) -> SearchStatus
    {
        _visit = &visit;
        if (_cycles_left < 0)
            return SearchStatus::Infeasible;
        if (! _any_length) {
            long total = 0;
            for (int l = 2 ; l <= _n ; ++l)
                total += static_cast<long>(l) * _counts[l];
            if (total != _edges)
                return SearchStatus::Infeasible;
        }
        for (Vertex v = 0 ; v < _n ; ++v)
            if (_deg[v] % 2 != 0)
                return SearchStatus::Infeasible;
        Outcome r = search(-1, -1, nullptr);
        switch (r) {
            case Outcome::Stop: return SearchStatus::Found;
            case Outcome::Budget: return SearchStatus::BudgetExhausted;
            default: return SearchStatus::Infeasible;
        }
    }

    auto CycleSearch::feasible(Vertex u) -> bool
    {
        if (_any_length)
            return true;
        // Each nontrivial component must be an achievable sum of remaining lengths.
        uint64_t active = 0;
        for (Vertex v = 0 ; v < _n ; ++v)
            if (_deg[v] > 0)
                active |= uint64_t{ 1 } << v;
        std::bitset<512> reach;
        bool check_sums = _edges < 512;
        if (check_sums) {
            reach[0] = true;
            for (int l = 2 ; l <= _n ; ++l)
                for (int c = 0 ; c < _counts[l] ; ++c)
                    reach |= reach << l;
        }
        int components = 0;
        int pivot_size = 0;
        while (active) {
            int s = std::countr_zero(active);
            uint64_t comp = uint64_t{ 1 } << s, frontier = comp;
            while (frontier) {
                int v = std::countr_zero(frontier);
                frontier &= frontier - 1;
                uint64_t fresh = _nbr[v] & ~comp;
                comp |= fresh;
                frontier |= fresh;
            }
            active &= ~comp;
            long deg_sum = 0;
            for (uint64_t c = comp ; c ; c &= c - 1)
                deg_sum += _deg[std::countr_zero(c)];
            if (check_sums && ! reach[deg_sum / 2])
                return false;
            if (comp & (uint64_t{ 1 } << u))
                pivot_size = std::popcount(comp);
            ++components;
        }
        if (components > _cycles_left)
            return false;
        int smallest = 0;
        for (int l = 2 ; l <= _n ; ++l)
            if (_counts[l] > 0) {
                smallest = l;
                break;
            }
        return smallest <= pivot_size;
    }

    auto CycleSearch::search(Vertex prev_u, Vertex prev_v, const vector<Vertex> * bound) -> Outcome
    {
        if (_edges == 0) {
            if (! _any_length && _cycles_left != 0)
                return Outcome::None;
            return (*_visit)(_placed) ? Outcome::Found : Outcome::Stop;
        }
        ++_nodes;
        if (out_of_budget())
            return Outcome::Budget;
        std::pair<uint64_t, uint64_t> key{ _ha, _hb };
        if (_options.memo && _failed.contains(key))
            return Outcome::None;

        Vertex u = 0;
        while (_deg[u] == 0)
            ++u;
        Vertex v = std::countr_zero(_nbr[u]);
        bool constrained = bound && prev_u == u && prev_v == v;

        if (! feasible(u)) {
            if (_options.memo && ! constrained && _failed.size() < max_failed_states)
                _failed.insert(key);
            return Outcome::None;
        }

        Outcome result = Outcome::None;
        for (int length = _n ; length >= 2 ; --length) {
            if (! _any_length && _counts[length] == 0)
                continue;
            if (constrained && length > static_cast<int>(bound->size()))
                continue;
            if (length == 2 && _mult[u * _n + v] < 2)
                continue;
            // Sequence order is only sound without vertex symmetry.
            bool tight = constrained && ! _options.fresh_symmetry && length == static_cast<int>(bound->size());
            _path.assign({ u, v });
            _on_path[u] = _on_path[v] = 1;
            Outcome r;
            if (length == 2)
                r = place_and_recurse(u, v, constrained, bound);
            else
                r = extend(u, length, tight, bound);
            _on_path[u] = _on_path[v] = 0;
            if (r == Outcome::Stop || r == Outcome::Budget)
                return r;
            if (r == Outcome::Found)
                result = Outcome::Found;
        }
        if (result == Outcome::None && _options.memo && ! constrained && _failed.size() < max_failed_states)
            _failed.insert(key);
        return result;
    }

    auto CycleSearch::fresh(Vertex x) const -> bool
    {
        if (_touched[x] != 0 || _on_path[x])
            return false;
        if (_options.partner.empty() || _options.partner[x] < 0)
            return true;
        Vertex y = _options.partner[x];
        return _touched[y] == 0 && ! _on_path[y];
    }

    auto CycleSearch::extend(Vertex u, int length, bool tight, const vector<Vertex> * bound) -> Outcome
    {
        int k = static_cast<int>(_path.size());
        Vertex w = _path.back();
        ++_nodes;
        if (out_of_budget())
            return Outcome::Budget;
        if (k == length) {
            if (_mult[w * _n + u] == 0)
                return Outcome::None;
            return place_and_recurse(u, _path[1], false, bound);
        }
        uint64_t cand = _nbr[w];
        for (Vertex p : _path)
            cand &= ~(uint64_t{ 1 } << p);
        if (k + 1 == length)
            cand &= _nbr[u];
        if (! cand)
            return Outcome::None;

        vector<Vertex> order;
        bool fresh_taken = false;
        for (uint64_t c = cand ; c ; c &= c - 1) {
            Vertex x = std::countr_zero(c);
            if (_options.fresh_symmetry && fresh(x)) {
                if (fresh_taken)
                    continue;
                fresh_taken = true;
            }
            order.push_back(x);
        }
        if (_budget.seed != 0)
            std::shuffle(order.begin(), order.end(), _rng);

        Outcome result = Outcome::None;
        for (Vertex x : order) {
            bool next_tight = false;
            if (tight) {
                Vertex b = (*bound)[k];
                if (x > b)
                    continue;
                next_tight = (x == b);
            }
            _path.push_back(x);
            _on_path[x] = 1;
            Outcome r = extend(u, length, next_tight, bound);
            _on_path[x] = 0;
            _path.pop_back();
            if (r == Outcome::Stop || r == Outcome::Budget)
                return r;
            if (r == Outcome::Found)
                result = Outcome::Found;
        }
        return result;
    }

    auto CycleSearch::place_and_recurse(Vertex u, Vertex v, bool, const vector<Vertex> *) -> Outcome
    {
        int length = static_cast<int>(_path.size());
        vector<Vertex> seq = _path;
        if (length == 2)
            set_mult(seq[0], seq[1], _mult[seq[0] * _n + seq[1]] - 2);
        else
            for (int i = 0 ; i < length ; ++i) {
                Vertex a = seq[i], b = seq[(i + 1) % length];
                set_mult(a, b, _mult[a * _n + b] - 1);
            }
        for (Vertex x : seq)
            ++_touched[x];
        if (! _any_length)
            set_count(length, _counts[length] - 1);
        --_cycles_left;
        _placed.emplace_back(seq);

        // Path must be cleared for the subtree and restored afterwards.
        vector<Vertex> saved_path;
        saved_path.swap(_path);
        for (Vertex x : saved_path)
            _on_path[x] = 0;

        Outcome r = search(u, v, &seq);

        _path.swap(saved_path);
        for (Vertex x : _path)
            _on_path[x] = 1;
        _placed.pop_back();
        ++_cycles_left;
        if (! _any_length)
            set_count(length, _counts[length] + 1);
        for (Vertex x : seq)
            --_touched[x];
        if (length == 2)
            set_mult(seq[0], seq[1], _mult[seq[0] * _n + seq[1]] + 2);
        else
            for (int i = 0 ; i < length ; ++i) {
                Vertex a = seq[i], b = seq[(i + 1) % length];
                set_mult(a, b, _mult[a * _n + b] + 1);
            }
        return r;
    }
}
