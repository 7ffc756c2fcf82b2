#include "ruelle/ifs_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ruelle/symbolic.hpp"

namespace ruelle {

using nlohmann::json;

namespace {

MobiusMap mobius_from_row(const json &row) {
    if (!row.is_array() || row.size() != 4)
        throw ConfigError("config: a generator must be a row-major [a,b,c,d] array");
    return MobiusMap(row[0].get<double>(), row[1].get<double>(),
                     row[2].get<double>(), row[3].get<double>());
}

std::vector<Interval> intervals_from(const json &arr) {
    std::vector<Interval> out;
    for (const auto &p : arr) {
        if (!p.is_array() || p.size() != 2)
            throw ConfigError("config: an interval must be a [lo, hi] pair");
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

} // namespace

IfsSystem ifs_from_json_text(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception &e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    const std::string kind = j.value("kind", "");
    if (kind == "gauss") {
        if (!j.contains("n_branches")) throw ConfigError("config: gauss requires n_branches");
        return build_gauss_ifs(j["n_branches"].get<int>());
    }
    if (kind == "schottky") {
        if (!j.contains("generators") || !j.contains("intervals"))
            throw ConfigError("config: schottky requires generators and intervals");
        std::vector<MobiusMap> gens;
        for (const auto &row : j["generators"]) gens.push_back(mobius_from_row(row));
        return build_schottky_ifs(gens, intervals_from(j["intervals"]));
    }
    if (kind == "custom") {
        if (!j.contains("generators") || !j.contains("intervals"))
            throw ConfigError("config: custom requires generators and intervals");
        std::vector<MobiusMap> gens;
        for (const auto &row : j["generators"]) gens.push_back(mobius_from_row(row));
        std::vector<Interval> ivs = intervals_from(j["intervals"]);
        const int N = static_cast<int>(ivs.size());
        if (static_cast<int>(gens.size()) != N)
            throw ConfigError("config: custom needs one generator per interval");
        std::vector<std::vector<int>> adj(N, std::vector<int>(N, 1));
        if (j.contains("adjacency")) {
            adj.clear();
            for (const auto &row : j["adjacency"]) adj.push_back(row.get<std::vector<int>>());
        }
        std::vector<BranchMap> branches;
        double sup = 0.0;
        for (int i = 0; i < N; ++i)
            for (int jj = 0; jj < N; ++jj) {
                if (!adj[i][jj]) continue;
                gens[jj].require_unimodular();
                branches.push_back(BranchMap::from_mobius(i, jj, gens[jj]));
                sup = std::max(sup, std::max(std::abs(gens[jj].deriv(ivs[i].lo)),
                                             std::abs(gens[jj].deriv(ivs[i].hi))));
            }
        if (!(sup < 1.0)) throw ConfigError("config: custom system is not contracting");
        IfsSystem ifs(std::move(ivs), std::move(adj), std::move(branches),
                      std::min(1.02 * sup, 0.999), "custom");
        ifs.set_generators(gens);
        return ifs;
    }
    throw ConfigError("config: kind must be \"gauss\", \"schottky\" or \"custom\"");
}

IfsSystem ifs_from_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ifs_from_json_text(ss.str());
}

std::string ifs_to_json_text(const IfsSystem &ifs) {
    json j;
    j["kind"] = ifs.kind();
    if (ifs.kind() == "gauss") {
        j["n_branches"] = ifs.meta_n();
    } else {
        json gens = json::array();
        for (const auto &g : ifs.generators())
            gens.push_back(json::array({g.a, g.b, g.c, g.d}));
        j["generators"] = gens;
        json ivs = json::array();
        for (const auto &iv : ifs.intervals()) ivs.push_back(json::array({iv.lo, iv.hi}));
        j["intervals"] = ivs;
        if (ifs.kind() == "custom") j["adjacency"] = ifs.adjacency();
    }
    return j.dump(2);
}

} // namespace ruelle
