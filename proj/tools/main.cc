#include <cycdec/admissibility.hh>
#include <cycdec/certificate_io.hh>
#include <cycdec/oracle.hh>
#include <cycdec/solver.hh>

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using std::string;
using std::vector;

using namespace cycdec;

namespace
{
    enum ExitCode { Ok = 0, BadInput = 1, NotAdmissibleExit = 2, BudgetExit = 3 };

    struct RunConfig
    {
        int lambda = 0;
        int n = 0;
        string list;
        string format = "json";
        std::uint64_t seed = 0;
        std::uint64_t max_nodes = 5'000'000;
        string cache_path;
        int jobs = 1;
        string file;
    };

    auto budget_of(const RunConfig & cfg) -> SearchBudget
    {
        SearchBudget b = SearchBudget::nodes(cfg.max_nodes);
        b.seed = cfg.seed;
        return b;
    }

    auto check_graph(const RunConfig & cfg) -> void
    {
        if (cfg.lambda < 1)
            throw std::invalid_argument("--lambda must be positive");
        if (cfg.n < 1)
            throw std::invalid_argument("--n must be positive");
    }

    auto report_json(const AdmissibilityReport & r) -> nlohmann::json
    {
        nlohmann::json j;
        j["admissible"] = r.admissible;
        j["failed"] = nlohmann::json::array();
        for (auto c : r.failed)
            j["failed"].push_back(condition_name(c));
        return j;
    }

    auto cmd_solve(const RunConfig & cfg) -> int
    {
        check_graph(cfg);
        auto m = LengthList::parse(cfg.list);
        Solver solver(SolverOptions{ budget_of(cfg), &HamiltonCache::global() });
        auto r = solver.solve(cfg.lambda, cfg.n, m);
        bool json = cfg.format == "json";
        switch (r.status) {
            case SolveStatus::Solved:
                if (json)
                    std::cout << to_json(r.certificate->packing) << "\n";
                else
                    std::cout << to_text(r.certificate->packing);
                return Ok;
            case SolveStatus::NotAdmissible:
                if (json)
                    std::cout << report_json(r.report).dump() << "\n";
                else
                    std::cout << r.report.to_string() << "\n";
                return NotAdmissibleExit;
            case SolveStatus::BudgetExhausted:
            case SolveStatus::Failed:
                if (json)
                    std::cout << nlohmann::json{ { "status", solve_status_name(r.status) }, { "detail", r.detail } }.dump() << "\n";
                else
                    std::cout << solve_status_name(r.status) << ": " << r.detail << "\n";
                return BudgetExit;
        }
        return BadInput;
    }

    auto read_input(const RunConfig & cfg) -> string
    {
        if (cfg.file.empty() || cfg.file == "-")
            return string(std::istreambuf_iterator<char>(std::cin), {});
        std::ifstream in(cfg.file);
        if (! in)
            throw std::invalid_argument("cannot open " + cfg.file);
        return string(std::istreambuf_iterator<char>(in), {});
    }

    auto cmd_verify(const RunConfig & cfg) -> int
    {
        Certificate c;
        try {
            c = certificate_from_json(read_input(cfg));
        }
        catch (const ParseError & e) {
            std::cerr << "parse error: " << e.what() << "\n";
            return BadInput;
        }
        auto v = verify(c);
        if (cfg.format == "json")
            std::cout << nlohmann::json{ { "accepted", v.accepted }, { "reason", reason_name(v.reason) }, { "detail", v.detail } }.dump() << "\n";
        else
            std::cout << (v.accepted ? "accepted" : string("rejected: ") + reason_name(v.reason) + " " + v.detail) << "\n";
        return v ? Ok : NotAdmissibleExit;
    }

    auto cmd_admissible(const RunConfig & cfg) -> int
    {
        check_graph(cfg);
        auto r = check_admissible(cfg.lambda, cfg.n, LengthList::parse(cfg.list));
        if (cfg.format == "json")
            std::cout << report_json(r).dump() << "\n";
        else {
            std::cout << (r.admissible ? "true" : "false");
            for (auto c : r.failed)
                std::cout << " " << condition_name(c);
            std::cout << "\n";
        }
        return r.admissible ? Ok : NotAdmissibleExit;
    }

    auto cmd_enumerate(const RunConfig & cfg, bool ancestors) -> int
    {
        check_graph(cfg);
        EnumerateOptions options;
        options.ancestors_only = ancestors;
        bool json = cfg.format == "json";
        bool first = true;
        if (json)
            std::cout << "[";
        for_each_admissible(cfg.lambda, cfg.n, options, [&] (const LengthList & m) {
            if (json)
                std::cout << (first ? "" : ",") << nlohmann::json(vector<int>(m.values().begin(), m.values().end())).dump();
            else
                std::cout << m.to_string() << "\n";
            first = false;
            return true;
        });
        if (json)
            std::cout << "]\n";
        return Ok;
    }

    auto cmd_bench(const RunConfig & cfg, bool cold) -> int
    {
        check_graph(cfg);
        std::cout << "lambda,n,list,outcome,millis,trace_depth\n";
        auto row = [&] (const LengthList & m, const char * outcome, double millis, int depth) {
            auto text = m.to_string();
            text = text.substr(1, text.size() - 2);
            std::printf("%d,%d,\"%s\",%s,%.3f,%d\n", cfg.lambda, cfg.n, text.c_str(), outcome, millis, depth);
        };
        Solver solver(SolverOptions{ budget_of(cfg), &HamiltonCache::global() });
        if (! cold) {
            sweep_admissible(solver, cfg.lambda, cfg.n, [&] (const SweepEntry & e) {
                row(e.list, e.error.empty() ? "solved" : "failed",
                        std::chrono::duration<double, std::milli>(e.elapsed).count(), e.depth);
            }, cfg.jobs);
            return Ok;
        }

        // Independent solves, each with a fresh memo table.
        auto lists = enumerate_admissible(cfg.lambda, cfg.n);
        struct Result { const char * outcome; double millis; int depth; };
        vector<Result> results(lists.size());
        std::atomic<std::size_t> next{ 0 };
        auto work = [&] {
            for (std::size_t i = next++ ; i < lists.size() ; i = next++) {
                Solver fresh(SolverOptions{ budget_of(cfg), &HamiltonCache::global() });
                auto start = std::chrono::steady_clock::now();
                auto r = fresh.solve(cfg.lambda, cfg.n, lists[i]);
                double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                results[i] = { solve_status_name(r.status), ms, static_cast<int>(r.trace.steps.size()) };
            }
        };
        {
            vector<std::jthread> workers;
            for (int j = 1 ; j < cfg.jobs ; ++j)
                workers.emplace_back(work);
            work();
        }
        for (std::size_t i = 0 ; i < lists.size() ; ++i)
            row(lists[i], results[i].outcome, results[i].millis, results[i].depth);
        return Ok;
    }
}

auto main(int argc, char ** argv) -> int
{
    CLI::App app{ "Cycle decompositions of complete multigraphs" };
    app.require_subcommand(1);
    RunConfig cfg;

    auto graph_flags = [&] (CLI::App * sub, bool with_list) {
        sub->add_option("--lambda", cfg.lambda, "Edge multiplicity")->required();
        sub->add_option("--n", cfg.n, "Number of vertices")->required();
        if (with_list)
            sub->add_option("--list", cfg.list, "Cycle lengths, comma separated")->required();
    };
    auto common_flags = [&] (CLI::App * sub) {
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({ "json", "text" }))->capture_default_str();
        sub->add_option("--seed", cfg.seed, "Search seed (0: natural order)")->capture_default_str();
        sub->add_option("--max-nodes", cfg.max_nodes, "Search node budget per oracle call")->capture_default_str();
        sub->add_option("--cache", cfg.cache_path, "Hamilton decomposition cache file (overrides CYCDEC_CACHE)");
        sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    };

    auto * solve = app.add_subcommand("solve", "Decide and construct a decomposition");
    graph_flags(solve, true);
    common_flags(solve);
    auto * verify_cmd = app.add_subcommand("verify", "Check a certificate (JSON on stdin or --file)");
    verify_cmd->add_option("--file", cfg.file, "Certificate file, - for stdin");
    common_flags(verify_cmd);
    auto * admissible = app.add_subcommand("admissible", "Evaluate the admissibility conditions");
    graph_flags(admissible, true);
    common_flags(admissible);
    auto * enumerate = app.add_subcommand("enumerate", "List every admissible length list");
    graph_flags(enumerate, false);
    common_flags(enumerate);
    bool ancestors = false;
    enumerate->add_flag("--ancestors", ancestors, "Only ancestor lists");
    auto * bench = app.add_subcommand("bench", "Solve every admissible list and report timings as CSV");
    graph_flags(bench, false);
    common_flags(bench);
    bool cold = false;
    bench->add_flag("--cold", cold, "Solve each list independently instead of walking the reduction forest");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        int code = app.exit(e);
        return code == 0 ? Ok : BadInput;
    }

    try {
        if (! cfg.cache_path.empty())
            HamiltonCache::set_global_path(cfg.cache_path);
        if (*solve)
            return cmd_solve(cfg);
        if (*verify_cmd)
            return cmd_verify(cfg);
        if (*admissible)
            return cmd_admissible(cfg);
        if (*enumerate)
            return cmd_enumerate(cfg, ancestors);
        if (*bench)
            return cmd_bench(cfg, cold);
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return BadInput;
    }
    return BadInput;
}
