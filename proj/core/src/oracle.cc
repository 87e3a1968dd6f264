#include <cycdec/oracle.hh>
#include <cycdec/admissibility.hh>

#include "cycle_search.hh"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

using nlohmann::json;
using std::optional;
using std::string;
using std::vector;

namespace cycdec
{
    auto status_name(SearchStatus s) -> const char *
    {
        switch (s) {
            case SearchStatus::Found: return "found";
            case SearchStatus::Infeasible: return "infeasible";
            case SearchStatus::BudgetExhausted: return "budget_exhausted";
        }
        return "?";
    }

    auto solve_exact(int lambda, int n, const LengthList & m, const SearchBudget & budget) -> ExactResult
    {
        ExactResult result;
        if (lambda < 1 || n < 1)
            return result;
        if (m.sum() != required_sum(lambda, n) || (! m.empty() && (m.min() < 2 || m.max() > n)))
            return result;

        Packing p;
        p.lambda = lambda;
        p.n = n;
        Multigraph g = complete_multigraph(lambda, n);
        detail::CycleSearch::Options options;
        options.fresh_symmetry = true;
        if (needs_matching(lambda, n)) {
            Matching matching;
            options.partner.assign(n, -1);
            for (Vertex v = 0 ; v + 1 < n ; v += 2) {
                matching.emplace_back(v, v + 1);
                g.remove_edge(v, v + 1);
                options.partner[v] = v + 1;
                options.partner[v + 1] = v;
            }
            p.matching = std::move(matching);
        }

        detail::CycleSearch search(g, m, budget, options);
        vector<Cycle> found;
        result.status = search.run([&] (std::span<const Cycle> cycles) {
            found.assign(cycles.begin(), cycles.end());
            return false;
        });
        result.nodes = search.nodes();
        if (result.status == SearchStatus::Found) {
            p.cycles = std::move(found);
            auto cert = make_certificate(std::move(p));
            if (! verify(cert))
                throw std::logic_error("exact search produced an invalid certificate");
            result.certificate = std::move(cert);
        }
        return result;
    }

    auto decompose_union_into_lengths(const Multigraph & g, const LengthList & lengths,
            const SearchBudget & budget, const DecompositionFilter & accept) -> UnionResult
    {
        UnionResult result;
        if (lengths.sum() != g.edge_count())
            return result;
        // Each cycle adds at most 2 to a degree and needs max(lengths) distinct vertices.
        int support = 0;
        for (Vertex v = 0 ; v < g.order() ; ++v) {
            if (g.degree(v) > 2 * lengths.size() || g.degree(v) % 2 != 0)
                return result;
            support += g.degree(v) > 0;
        }
        if (support < lengths.max())
            return result;
        detail::CycleSearch search(g, lengths, budget, {});
        result.status = search.run([&] (std::span<const Cycle> cycles) {
            if (accept && ! accept(cycles))
                return true;
            result.cycles.assign(cycles.begin(), cycles.end());
            return false;
        });
        result.nodes = search.nodes();
        return result;
    }

    auto for_each_decomposition(const Multigraph & g, const optional<LengthList> & lengths,
            const SearchBudget & budget, const std::function<bool (std::span<const Cycle>)> & visit,
            std::uint64_t * nodes_out) -> SearchStatus
    {
        detail::CycleSearch::Options options;
        detail::CycleSearch search(g, lengths, budget, options);
        auto status = search.run(visit);
        if (nodes_out)
            *nodes_out = search.nodes();
        return status;
    }

    namespace
    {
        auto decomposition_to_json(const HamiltonDecomposition & d) -> json
        {
            json j;
            json cycles = json::array();
            for (const auto & c : d.cycles)
                cycles.push_back(vector<int>(c.vertices().begin(), c.vertices().end()));
            j["cycles"] = std::move(cycles);
            if (d.matching) {
                json m = json::array();
                for (auto [u, v] : *d.matching)
                    m.push_back({ u, v });
                j["matching"] = std::move(m);
            }
            else
                j["matching"] = nullptr;
            return j;
        }

        auto decomposition_from_json(const json & j) -> HamiltonDecomposition
        {
            HamiltonDecomposition d;
            for (const auto & c : j.at("cycles"))
                d.cycles.emplace_back(c.get<vector<int>>());
            if (! j.at("matching").is_null()) {
                Matching m;
                for (const auto & e : j.at("matching"))
                    m.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
                d.matching = std::move(m);
            }
            return d;
        }

        auto decomposes_circulant(int n, const vector<int> & distances, const HamiltonDecomposition & d) -> bool
        {
            Multigraph g = circulant(n, distances);
            Multigraph used(n);
            for (const auto & c : d.cycles) {
                if (! c.valid(n) || c.length() != n)
                    return false;
                c.add_to(used);
            }
            if (d.matching) {
                vector<bool> seen(n, false);
                for (auto [u, v] : *d.matching) {
                    if (u < 0 || v < 0 || u >= n || v >= n || u == v || seen[u] || seen[v])
                        return false;
                    seen[u] = seen[v] = true;
                    used.add_edge(u, v);
                }
            }
            return used == g;
        }
    }

    HamiltonCache::HamiltonCache(string path) :
        _path(std::move(path))
    {
        load();
    }

    auto HamiltonCache::load() -> void
    {
        if (_path.empty())
            return;
        std::ifstream in(_path);
        if (! in)
            return;
        try {
            json j = json::parse(in);
            for (const auto & e : j.at("entries")) {
                int n = e.at("n").get<int>();
                auto s = e.at("distances").get<vector<int>>();
                auto d = decomposition_from_json(e.at("decomposition"));
                if (decomposes_circulant(n, s, d))
                    _entries[{ n, s }] = std::move(d);
            }
        }
        catch (const json::exception &) {
            // A corrupt cache is ignored and rebuilt.
        }
    }

    auto HamiltonCache::save_locked() const -> void
    {
        if (_path.empty())
            return;
        json entries = json::array();
        for (const auto & [key, d] : _entries)
            entries.push_back({ { "n", key.first }, { "distances", key.second }, { "decomposition", decomposition_to_json(d) } });
        json j;
        j["entries"] = std::move(entries);
        string tmp = _path + ".tmp";
        {
            std::ofstream out(tmp);
            if (! out)
                return;
            out << j.dump(1) << "\n";
        }
        std::rename(tmp.c_str(), _path.c_str());
    }

    auto HamiltonCache::lookup(int n, const vector<int> & distances) const -> optional<HamiltonDecomposition>
    {
        std::shared_lock lock(_mutex);
        auto it = _entries.find({ n, distances });
        if (it == _entries.end())
            return std::nullopt;
        return it->second;
    }

    auto HamiltonCache::store(int n, const vector<int> & distances, const HamiltonDecomposition & d) -> void
    {
        std::unique_lock lock(_mutex);
        _entries[{ n, distances }] = d;
        save_locked();
    }

    namespace
    {
        std::mutex global_mutex;
        std::unique_ptr<HamiltonCache> global_cache;
    }

    auto HamiltonCache::global() -> HamiltonCache &
    {
        std::lock_guard lock(global_mutex);
        if (! global_cache) {
            const char * env = std::getenv("CYCDEC_CACHE");
            global_cache = std::make_unique<HamiltonCache>(env ? string(env) : string());
        }
        return *global_cache;
    }

    auto HamiltonCache::set_global_path(const string & path) -> void
    {
        std::lock_guard lock(global_mutex);
        global_cache = std::make_unique<HamiltonCache>(path);
    }

    auto hamilton_decompose_circulant(int n, vector<int> distances, const SearchBudget & budget,
            HamiltonCache * cache) -> optional<HamiltonDecomposition>
    {
        std::sort(distances.begin(), distances.end());
        distances.erase(std::unique(distances.begin(), distances.end()), distances.end());
        if (cache)
            if (auto hit = cache->lookup(n, distances))
                return hit;

        Multigraph g = circulant(n, distances);
        HamiltonDecomposition d;
        int degree = g.degree(0);
        if (degree % 2 != 0) {
            if (n % 2 != 0 || std::find(distances.begin(), distances.end(), n / 2) == distances.end())
                return std::nullopt;
            Matching m;
            for (Vertex v = 0 ; v < n / 2 ; ++v) {
                m.emplace_back(v, v + n / 2);
                g.remove_edge(v, v + n / 2);
            }
            d.matching = std::move(m);
        }
        if (! g.empty()) {
            auto components = g.nontrivial_components();
            if (components.size() != 1 || static_cast<int>(components.front().size()) != n)
                return std::nullopt;
            auto r = decompose_union_into_lengths(g, LengthList::repeated(n, degree / 2), budget);
            if (r.status != SearchStatus::Found)
                return std::nullopt;
            d.cycles = std::move(r.cycles);
        }
        for (auto & c : d.cycles)
            c = c.canonical();
        if (! decomposes_circulant(n, distances, d))
            throw std::logic_error("circulant Hamilton decomposition failed verification");
        if (cache)
            cache->store(n, distances, d);
        return d;
    }
}
