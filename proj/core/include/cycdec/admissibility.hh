#ifndef CYCDEC_ADMISSIBILITY_HH
#define CYCDEC_ADMISSIBILITY_HH

#include <cycdec/cycle.hh>
#include <cycdec/length_list.hh>
#include <cycdec/multigraph.hh>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycdec
{
    enum class Condition { A1, A2, A3, A4, A5 };

    auto condition_name(Condition c) -> const char *;

    struct AdmissibilityReport
    {
        bool admissible = false;
        std::vector<Condition> failed;
        bool odd_parity = false;    // lambda(n-1) odd

        auto to_string() const -> std::string;
    };

    class PreconditionError : public std::invalid_argument
    {
        public:
            using std::invalid_argument::invalid_argument;
    };

    auto binom2(long n) -> long;

    // Sum a decomposition of lambda K_n must have.
    auto required_sum(int lambda, int n) -> long;

    auto check_admissible(int lambda, int n, const LengthList & m) -> AdmissibilityReport;
    auto is_admissible(int lambda, int n, const LengthList & m) -> bool;

    // Admissible and (N1)-(N5).
    auto is_ancestor(int lambda, int n, const LengthList & m) -> bool;

    // The easy sufficient condition: nu_2 < n, or lambda even and the two largest
    // entries equal. Requires lambda >= 2 and (A1)-(A3).
    auto sufficient_admissible(int lambda, int n, const LengthList & m) -> bool;

    // |E(g)|/2 - |E(c)| + 2 for g with all multiplicities even.
    auto bmbs_bound(const Multigraph & g, const Cycle & c) -> long;

    enum class EqualityCase { None, EvenMaxPlusCount, OddTwos };

    // Admissible lists meeting (A4) or (A5) with equality.
    auto equality_case(int lambda, int n, const LengthList & m) -> EqualityCase;

    class EnumerationBudgetExceeded : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    struct EnumerateOptions
    {
        bool ancestors_only = false;
        std::uint64_t max_count = 0;     // 0: unlimited
    };

    // Streams every admissible list in decreasing lexicographic order. The visitor
    // returns false to stop early. Throws EnumerationBudgetExceeded past max_count.
    auto for_each_admissible(int lambda, int n, const EnumerateOptions & options,
            const std::function<bool (const LengthList &)> & visit) -> std::uint64_t;

    auto enumerate_admissible(int lambda, int n, const EnumerateOptions & options = {}) -> std::vector<LengthList>;

    // Every list with parts in [lo, hi] summing to total, decreasing lexicographic order.
    auto for_each_partition(long total, int lo, int hi,
            const std::function<bool (const LengthList &)> & visit) -> void;
}

#endif
