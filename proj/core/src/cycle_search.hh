#ifndef CYCDEC_CYCLE_SEARCH_HH
#define CYCDEC_CYCLE_SEARCH_HH

#include <cycdec/oracle.hh>

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <unordered_set>
#include <vector>

namespace cycdec::detail
{
    // Backtracking cycle decomposition on the lowest remaining edge.
    class CycleSearch
    {
        public:
            struct Options
            {
                // Vertices untouched by placed cycles are interchangeable.
                bool fresh_symmetry = false;
                bool memo = true;
                // Matching partner of each vertex (removed edge), or empty.
                std::vector<Vertex> partner;
            };

            CycleSearch(const Multigraph & g, const std::optional<LengthList> & lengths,
                    const SearchBudget & budget, Options options);

            // Visitor returns false to stop.
            auto run(const std::function<bool (std::span<const Cycle>)> & visit) -> SearchStatus;

            auto nodes() const -> std::uint64_t { return _nodes; }

        private:
            enum class Outcome { None, Found, Stop, Budget };

            struct Hash
            {
                auto operator()(const std::pair<std::uint64_t, std::uint64_t> & p) const -> std::size_t
                {
                    return p.first ^ (p.second * 0x9e3779b97f4a7c15ULL);
                }
            };

            auto search(Vertex prev_u, Vertex prev_v, const std::vector<Vertex> * bound) -> Outcome;
            auto extend(Vertex u, int length, bool constrained, const std::vector<Vertex> * bound) -> Outcome;
            auto place_and_recurse(Vertex u, Vertex v, bool constrained, const std::vector<Vertex> * bound) -> Outcome;
            auto feasible(Vertex u) -> bool;
            auto fresh(Vertex x) const -> bool;
            auto set_mult(Vertex u, Vertex v, int m) -> void;
            auto set_count(int length, int c) -> void;
            auto out_of_budget() -> bool;

            int _n;
            bool _any_length;
            Options _options;
            SearchBudget _budget;
            std::vector<int> _mult;
            std::vector<std::uint64_t> _nbr;
            std::vector<int> _deg;
            long _edges = 0;
            std::vector<int> _counts;
            int _cycles_left = 0;
            std::vector<int> _touched;
            std::vector<char> _on_path;
            std::vector<Vertex> _path;
            std::vector<Cycle> _placed;
            std::uint64_t _nodes = 0;
            std::chrono::steady_clock::time_point _deadline;
            bool _has_deadline = false;
            std::mt19937_64 _rng;
            const std::function<bool (std::span<const Cycle>)> * _visit = nullptr;

            int _max_mult;
            std::vector<std::uint64_t> _zmult_a, _zmult_b, _zcount_a, _zcount_b;
            std::uint64_t _ha = 0, _hb = 0;
            std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, Hash> _failed;
            Outcome _found_outcome = Outcome::None;
            std::vector<int> _candidates;
    };
}

#endif
