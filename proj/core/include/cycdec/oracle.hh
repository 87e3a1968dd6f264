#ifndef CYCDEC_ORACLE_HH
#define CYCDEC_ORACLE_HH

#include <cycdec/length_list.hh>
#include <cycdec/multigraph.hh>
#include <cycdec/packing.hh>

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycdec
{
    struct SearchBudget
    {
        std::uint64_t max_nodes = 0;                // 0: unlimited
        std::chrono::milliseconds max_time{ 0 };    // 0: unlimited
        std::uint64_t seed = 0;                     // 0: natural order

        static auto unlimited() -> SearchBudget { return SearchBudget{}; }
        static auto nodes(std::uint64_t k) -> SearchBudget { return SearchBudget{ k, std::chrono::milliseconds{ 0 }, 0 }; }
    };

    enum class SearchStatus { Found, Infeasible, BudgetExhausted };

    // A search that ran out of budget where an answer is known to exist.
    class BudgetExceeded : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    auto status_name(SearchStatus s) -> const char *;

    struct ExactResult
    {
        SearchStatus status = SearchStatus::Infeasible;
        std::optional<Certificate> certificate;
        std::uint64_t nodes = 0;
    };

    struct UnionResult
    {
        SearchStatus status = SearchStatus::Infeasible;
        std::vector<Cycle> cycles;
        std::uint64_t nodes = 0;
    };

    // Return true to accept a complete decomposition; false keeps searching.
    using DecompositionFilter = std::function<bool (std::span<const Cycle>)>;

    // Certificate for (M) in lambda K_n, with matching {01,23,...} when one is needed.
    auto solve_exact(int lambda, int n, const LengthList & m, const SearchBudget & budget) -> ExactResult;

    auto decompose_union_into_lengths(const Multigraph & g, const LengthList & lengths,
            const SearchBudget & budget, const DecompositionFilter & accept = {}) -> UnionResult;

    // Visits each cycle decomposition of g exactly once (as a multiset of cycles).
    // When lengths is given only decompositions realising it are visited.
    // The visitor returns false to stop. Returns Found if stopped early,
    // Infeasible once the space is exhausted, BudgetExhausted otherwise.
    auto for_each_decomposition(const Multigraph & g, const std::optional<LengthList> & lengths,
            const SearchBudget & budget, const std::function<bool (std::span<const Cycle>)> & visit,
            std::uint64_t * nodes_out = nullptr) -> SearchStatus;

    struct HamiltonDecomposition
    {
        std::vector<Cycle> cycles;
        std::optional<Matching> matching;
    };

    // Thread-safe cache of circulant Hamilton decompositions, optionally backed by a JSON file.
    class HamiltonCache
    {
        public:
            HamiltonCache() = default;
            explicit HamiltonCache(std::string path);

            auto lookup(int n, const std::vector<int> & distances) const -> std::optional<HamiltonDecomposition>;
            auto store(int n, const std::vector<int> & distances, const HamiltonDecomposition & d) -> void;
            auto path() const -> const std::string & { return _path; }

            // Process-wide instance; the file path comes from CYCDEC_CACHE when set.
            static auto global() -> HamiltonCache &;
            static auto set_global_path(const std::string & path) -> void;

        private:
            auto load() -> void;
            auto save_locked() const -> void;

            std::string _path;
            mutable std::shared_mutex _mutex;
            std::map<std::pair<int, std::vector<int>>, HamiltonDecomposition> _entries;
    };

    // Hamilton cycles (plus a 1-factor when the degree is odd) decomposing the circulant.
    auto hamilton_decompose_circulant(int n, std::vector<int> distances, const SearchBudget & budget,
            HamiltonCache * cache = &HamiltonCache::global()) -> std::optional<HamiltonDecomposition>;
}

#endif
