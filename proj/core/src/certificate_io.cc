#include <cycdec/certificate_io.hh>

#include <json.hpp>

using nlohmann::json;
using std::string;
using std::vector;

namespace cycdec
{
    auto to_json(const Packing & p) -> string
    {
        json j;
        j["lambda"] = p.lambda;
        j["n"] = p.n;
        json cycles = json::array();
        for (const auto & c : p.cycles)
            cycles.push_back(vector<int>(c.vertices().begin(), c.vertices().end()));
        j["cycles"] = std::move(cycles);
        if (p.matching) {
            json m = json::array();
            for (auto [u, v] : *p.matching)
                m.push_back({ u, v });
            j["matching"] = std::move(m);
        }
        else
            j["matching"] = nullptr;
        return j.dump();
    }

    auto certificate_from_json(std::string_view text) -> Certificate
    {
        try {
            json j = json::parse(text);
            Packing p;
            p.lambda = j.at("lambda").get<int>();
            p.n = j.at("n").get<int>();
            for (const auto & c : j.at("cycles"))
                p.cycles.emplace_back(c.get<vector<int>>());
            const auto & m = j.at("matching");
            if (! m.is_null()) {
                Matching matching;
                for (const auto & e : m) {
                    if (! e.is_array() || e.size() != 2)
                        throw ParseError("matching entries must be vertex pairs");
                    matching.emplace_back(e[0].get<int>(), e[1].get<int>());
                }
                p.matching = std::move(matching);
            }
            LengthList claimed = j.contains("lengths")
                ? LengthList(j.at("lengths").get<vector<int>>())
                : p.lengths();
            return Certificate{ std::move(p), std::move(claimed) };
        }
        catch (const json::exception & e) {
            throw ParseError(e.what());
        }
    }

    auto to_text(const Packing & p) -> string
    {
        string s;
        for (const auto & c : p.cycles)
            s += c.to_string() + "\n";
        if (p.matching)
            for (auto [u, v] : *p.matching)
                s += std::to_string(u) + " " + std::to_string(v) + "\n";
        return s;
    }
}
