/*
   Copyright 2026 gmsim authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "gmsim/chimera.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "gmsim/errors.hpp"
#include "gmsim/random.hpp"
#include "json.hpp"

namespace gmsim {

namespace {

Edge ordered(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::vector<Edge> full_chimera_edges(int L) {
    std::vector<Edge> edges;
    edges.reserve(full_chimera_edge_count(L));
    for (int r = 0; r < L; ++r) {
        for (int c = 0; c < L; ++c) {
            // intra-cell K4,4
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    edges.push_back(ordered(chimera_site(L, r, c, 0, a), chimera_site(L, r, c, 1, b)));
            // vertical partition couples to the cell below, same leg
            if (r + 1 < L)
                for (int a = 0; a < 4; ++a)
                    edges.push_back(ordered(chimera_site(L, r, c, 0, a), chimera_site(L, r + 1, c, 0, a)));
            // horizontal partition couples to the cell to the right, same leg
            if (c + 1 < L)
                for (int a = 0; a < 4; ++a)
                    edges.push_back(ordered(chimera_site(L, r, c, 1, a), chimera_site(L, r, c + 1, 1, a)));
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

}  // namespace

ChimeraGraph build_diluted_chimera(int L, const DilutionSpec& pattern) {
    if (L < 1) throw ValidationError("build_diluted_chimera: L must be >= 1");
    ChimeraGraph g;
    g.L = L;
    g.pattern = pattern.kind;
    std::vector<Edge> full = full_chimera_edges(L);

    if (pattern.kind == "none") {
        g.edges = std::move(full);
        return g;
    }
    if (pattern.kind == "default-diluted") {
        // Stand-in for the published diluted pattern: every vertical-partition
        // site keeps two staggered intra-cell couplers (leg a -> legs a and
        // (a+1) mod 4); all inter-cell couplers are kept.
        std::set<Edge> keep;
        for (int r = 0; r < L; ++r)
            for (int c = 0; c < L; ++c)
                for (int a = 0; a < 4; ++a) {
                    keep.insert(ordered(chimera_site(L, r, c, 0, a), chimera_site(L, r, c, 1, a)));
                    keep.insert(ordered(chimera_site(L, r, c, 0, a), chimera_site(L, r, c, 1, (a + 1) % 4)));
                }
        for (const Edge& e : full) {
            bool intra = (e.first / 8) == (e.second / 8);
            if (!intra || keep.count(e)) g.edges.push_back(e);
        }
        return g;
    }
    if (pattern.kind == "mask") {
        std::set<Edge> full_set(full.begin(), full.end());
        std::set<Edge> removed;
        const int n = 8 * L * L;
        for (const Edge& e : pattern.removed) {
            Edge eo = ordered(e.first, e.second);
            if (eo.first < 0 || eo.second >= n)
                throw ValidationError("dilution mask: site index out of range [0," + std::to_string(n) + ")");
            if (eo.first == eo.second) throw ValidationError("dilution mask: self edge");
            if (!full_set.count(eo))
                throw ValidationError("dilution mask: (" + std::to_string(eo.first) + "," +
                                      std::to_string(eo.second) + ") is not a Chimera edge");
            removed.insert(eo);
        }
        for (const Edge& e : full)
            if (!removed.count(e)) g.edges.push_back(e);
        return g;
    }
    throw ValidationError("unknown dilution pattern kind: " + pattern.kind);
}

const std::vector<double>& distribution_support(const std::string& distribution_id) {
    static const std::vector<double> qmc = {0.0, -0.2, -0.4, -0.6, -0.8, -1.0};
    static const std::vector<double> dwave = {0.0, -0.1, -0.2, -0.3, -0.4, -0.5};
    if (distribution_id == "qmc-six-level") return qmc;
    if (distribution_id == "dwave-six-level") return dwave;
    throw ValidationError("unknown distribution_id: " + distribution_id);
}

DisorderInstance sample_disorder(const ChimeraGraph& graph, const std::string& distribution_id,
                                 std::uint64_t seed) {
    const std::vector<double>& support = distribution_support(distribution_id);
    DisorderInstance inst;
    inst.graph = graph;
    inst.seed = seed;
    inst.distribution_id = distribution_id;
    inst.id = "seed-" + std::to_string(seed);
    Rng rng(derive_seed(seed, {0x64697364ULL /*"disd"*/}));
    inst.couplings.reserve(graph.edges.size());
    for (std::size_t e = 0; e < graph.edges.size(); ++e)
        inst.couplings.push_back(support[rng.below(support.size())]);
    return inst;
}

std::string instance_to_json(const DisorderInstance& inst) {
    nlohmann::ordered_json j;
    j["L"] = inst.graph.L;
    j["pattern"] = inst.graph.pattern;
    j["seed"] = inst.seed;
    j["distribution_id"] = inst.distribution_id;
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (std::size_t e = 0; e < inst.graph.edges.size(); ++e)
        edges.push_back({inst.graph.edges[e].first, inst.graph.edges[e].second, inst.couplings[e]});
    j["edges"] = std::move(edges);
    return j.dump();
}

DisorderInstance instance_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("instance file: ") + e.what());
    }
    DisorderInstance inst;
    inst.graph.L = j.at("L").get<int>();
    inst.graph.pattern = j.at("pattern").get<std::string>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.distribution_id = j.at("distribution_id").get<std::string>();
    inst.id = "seed-" + std::to_string(inst.seed);
    for (const auto& e : j.at("edges")) {
        inst.graph.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        inst.couplings.push_back(e.at(2).get<double>());
    }
    return inst;
}

void write_instance_file(const DisorderInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for write: " + path);
    out << instance_to_json(inst) << '\n';
}

DisorderInstance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return instance_from_json(ss.str());
}

}  // namespace gmsim
