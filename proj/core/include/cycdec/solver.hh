#ifndef CYCDEC_SOLVER_HH
#define CYCDEC_SOLVER_HH

#include <cycdec/admissibility.hh>
#include <cycdec/oracle.hh>
#include <cycdec/transforms.hh>
#include <cycdec/packing.hh>

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

namespace cycdec
{
    // One move of the ancestor reduction: from list to the larger list parent.
    struct ReductionStep
    {
        LengthList list;
        LengthList parent;
        std::string rule;           // "1", "2", "3a", "3b", "3b*", "4", "5a", "5b"
        std::string transform;      // transform that rebuilds list from parent
        int x = 0, y = 0;           // the entries the rule acted on
    };

    struct ReductionTrace
    {
        std::vector<ReductionStep> steps;
        LengthList terminal;
        std::vector<std::string> substitutions;     // oracle calls standing in for cited results
        auto to_strings() const -> std::vector<std::string>;
    };

    // The larger list the reduction moves to, or nullopt for ancestors, equality
    // lists and lambda = 1. Requires an admissible list.
    auto reduction_parent(int lambda, int n, const LengthList & m) -> std::optional<ReductionStep>;

    // Lists whose reduction parent is m.
    auto reduction_children(int lambda, int n, const LengthList & m) -> std::vector<ReductionStep>;

    // Rebuild a certificate for step.list from one for step.parent.
    auto apply_reduction(const Certificate & parent, const ReductionStep & step) -> Certificate;

    auto reduction_trace(int lambda, int n, const LengthList & m) -> ReductionTrace;

    // Certificate for an equality list (A4 or A5 tight).
    auto exact_bound_case(int lambda, int n, const LengthList & m, const SearchBudget & budget) -> Certificate;

    // Failed: a construction or transform gave up; never a wrong verdict.
    enum class SolveStatus { Solved, NotAdmissible, BudgetExhausted, Failed };

    auto solve_status_name(SolveStatus s) -> const char *;

    struct SolveResult
    {
        SolveStatus status = SolveStatus::NotAdmissible;
        std::optional<Certificate> certificate;
        AdmissibilityReport report;
        ReductionTrace trace;
        std::string detail;
    };

    struct SolverOptions
    {
        SearchBudget budget = SearchBudget::nodes(5'000'000);
        HamiltonCache * cache = &HamiltonCache::global();
    };

    // The split of lambda used by the induction step: lambda1 in {1,2}, lambda2 even.
    auto lambda_split(int lambda) -> std::pair<int, int>;

    // Which of the induction cases (i), (ii), (iii) hold for an ancestor list.
    struct InductionCases
    {
        bool hamilton = false, twos = false, triangles = false;
        long slack = 0;     // sum M - 2 nu_2 - 3 nu_3 - n nu_n
    };

    auto induction_cases(int lambda, int n, const LengthList & m) -> InductionCases;

    // Memoising solver. Thread-safe; sub-certificates are shared across queries.
    class Solver
    {
        public:
            explicit Solver(SolverOptions options = {});

            auto solve(int lambda, int n, const LengthList & m) -> SolveResult;

            // Certificate for an admissible list; throws BudgetExceeded or TransformError.
            auto certificate(int lambda, int n, const LengthList & m) -> Certificate;

            // Certificate for an ancestor list (or equality list), without reduction.
            auto root_certificate(int lambda, int n, const LengthList & m) -> Certificate;

            auto lambda_induction(int lambda, int n, const LengthList & m) -> Certificate;
            auto solve_2fold(int n, const LengthList & m) -> Certificate;
            auto many_hams(int n, const LengthList & m) -> Certificate;
            auto few_hams(int n, const LengthList & m) -> Certificate;

            auto options() const -> const SolverOptions & { return _options; }
            auto memo_size() const -> std::size_t;

            // Drop memoised certificates for (lambda, n) pairs with lambda >= 3.
            auto trim() -> void;

        private:
            auto compute(int lambda, int n, const LengthList & m) -> Certificate;
            auto one_fold(int n, const LengthList & m) -> Certificate;
            auto many_twos_many_hams(int n, const LengthList & m) -> Certificate;
            auto few_twos_many_hams(int n, const LengthList & m) -> Certificate;
            auto note(const std::string & what) -> void;
            auto lookup(int lambda, int n, const LengthList & m) const -> std::optional<Certificate>;
            auto store(int lambda, int n, const LengthList & m, const Certificate & c) -> void;

            SolverOptions _options;
            mutable std::shared_mutex _mutex;
            std::map<std::tuple<int, int, std::vector<int>>, Certificate> _memo;
    };

    struct SweepEntry
    {
        LengthList list;
        const Certificate * certificate = nullptr;
        std::chrono::nanoseconds elapsed{ 0 };     // time to build this list from its parent (or root)
        int depth = 0;                             // reduction steps from the root
        std::string error;                         // non-empty on failure
    };

    // Visits every admissible list of (lambda, n) exactly once by walking the
    // reduction forest from its roots. Returns the number of lists visited.
    // With jobs > 1 the trees are built on worker threads and visit calls are
    // serialised, in no fixed order.
    auto sweep_admissible(Solver & solver, int lambda, int n, const std::function<void (const SweepEntry &)> & visit,
            int jobs = 1) -> std::uint64_t;
}

#endif
