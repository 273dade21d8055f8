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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "doctest.h"
#include "gmsim/chimera.hpp"
#include "gmsim/errors.hpp"

using namespace gmsim;

TEST_CASE("full chimera edge counts") {
    // 16 L^2 intra-cell + 8 L (L-1) inter-cell
    CHECK(full_chimera_edge_count(1) == 16);
    CHECK(full_chimera_edge_count(2) == 80);
    for (int L : {1, 2, 3, 4}) {
        const ChimeraGraph g = build_diluted_chimera(L, DilutionSpec::none());
        CHECK(g.num_sites() == 8 * L * L);
        CHECK(g.num_edges() == full_chimera_edge_count(L));
    }
}

TEST_CASE("edges are sorted, unique, in range") {
    const ChimeraGraph g = build_diluted_chimera(3, DilutionSpec::none());
    std::set<Edge> seen;
    for (const Edge& e : g.edges) {
        CHECK(e.first < e.second);
        CHECK(e.first >= 0);
        CHECK(e.second < g.num_sites());
        CHECK(seen.insert(e).second);
    }
    CHECK(std::is_sorted(g.edges.begin(), g.edges.end()));
}

TEST_CASE("site indexing is cell-major") {
    CHECK(chimera_site(4, 0, 0, 0, 0) == 0);
    CHECK(chimera_site(4, 0, 0, 1, 0) == 4);
    CHECK(chimera_site(4, 0, 1, 0, 0) == 8);
    CHECK(chimera_site(4, 1, 0, 0, 3) == 35);
}

TEST_CASE("intra-cell structure is a K44") {
    const ChimeraGraph g = build_diluted_chimera(1, DilutionSpec::none());
    // L = 1: all 16 edges are intra-cell, vertical leg x horizontal leg.
    for (const Edge& e : g.edges) {
        CHECK(e.first < 4);
        CHECK(e.second >= 4);
    }
}

TEST_CASE("default dilution removes intra-cell edges only") {
    for (int L : {2, 3}) {
        const ChimeraGraph full = build_diluted_chimera(L, DilutionSpec::none());
        const ChimeraGraph dil = build_diluted_chimera(L, DilutionSpec::default_diluted());
        CHECK(dil.num_sites() == full.num_sites());
        CHECK(dil.num_edges() < full.num_edges());
        const std::set<Edge> full_set(full.edges.begin(), full.edges.end());
        int inter_full = 0, inter_dil = 0;
        for (const Edge& e : full.edges)
            if (e.second - e.first >= 8) ++inter_full;
        for (const Edge& e : dil.edges) {
            CHECK(full_set.count(e) == 1);  // a subgraph of the full lattice
            if (e.second - e.first >= 8) ++inter_dil;
        }
        CHECK(inter_dil == inter_full);  // only intra-cell edges are dropped
        // each vertical leg keeps exactly 2 of its 4 intra-cell edges
        std::map<int, int> intra_degree;
        for (const Edge& e : dil.edges)
            if (e.second - e.first < 8) ++intra_degree[e.first];
        for (int cell = 0; cell < L * L; ++cell)
            for (int leg = 0; leg < 4; ++leg) CHECK(intra_degree[8 * cell + leg] == 2);
    }
}

TEST_CASE("mask dilution removes the listed edges") {
    const ChimeraGraph full = build_diluted_chimera(2, DilutionSpec::none());
    const std::vector<Edge> removed = {full.edges[0], full.edges[5]};
    const ChimeraGraph g = build_diluted_chimera(2, DilutionSpec::mask(removed));
    CHECK(g.num_edges() == full.num_edges() - 2);
    for (const Edge& e : removed)
        CHECK(std::find(g.edges.begin(), g.edges.end(), e) == g.edges.end());
    CHECK_THROWS_AS(build_diluted_chimera(2, DilutionSpec::mask({{0, 1}})), ValidationError);
}

TEST_CASE("six-level supports") {
    const auto& qmc = distribution_support("qmc-six-level");
    const auto& dev = distribution_support("dwave-six-level");
    REQUIRE(qmc.size() == 6);
    REQUIRE(dev.size() == 6);
    for (int k = 0; k < 6; ++k) {
        CHECK(qmc[k] == doctest::Approx(-0.2 * k));
        CHECK(dev[k] == doctest::Approx(-0.1 * k));
    }
    CHECK_THROWS_AS(distribution_support("no-such-law"), ValidationError);
}

TEST_CASE("disorder draws follow the declared law (chi-square at 1%)") {
    // >= 1e5 draws per law; 6 equiprobable levels, chi2_{0.99, df=5} = 15.086
    const ChimeraGraph g = build_diluted_chimera(8, DilutionSpec::none());
    REQUIRE(g.num_edges() >= 1000);
    for (const char* law : {"qmc-six-level", "dwave-six-level"}) {
        const auto& support = distribution_support(law);
        std::map<double, long> counts;
        long n = 0;
        for (std::uint64_t seed = 1; n < 100000; ++seed) {
            const DisorderInstance inst = sample_disorder(g, law, seed);
            for (double j : inst.couplings) {
                ++counts[j];
                ++n;
            }
        }
        REQUIRE(counts.size() == 6);
        const double expected = double(n) / 6.0;
        double chi2 = 0;
        for (double v : support) {
            const double d = counts.at(v) - expected;
            chi2 += d * d / expected;
        }
        INFO(law, " chi2 = ", chi2, " over n = ", n);
        CHECK(chi2 < 15.086);
    }
}

TEST_CASE("device couplings stay in [-0.5, 0]") {
    const ChimeraGraph g = build_diluted_chimera(4, DilutionSpec::default_diluted());
    const DisorderInstance inst = sample_disorder(g, "dwave-six-level", 7);
    for (double j : inst.couplings) {
        CHECK(j <= 0.0);
        CHECK(j >= -0.5);
    }
}

TEST_CASE("disorder is reproducible and seed-sensitive") {
    const ChimeraGraph g = build_diluted_chimera(2, DilutionSpec::default_diluted());
    const DisorderInstance a = sample_disorder(g, "qmc-six-level", 11);
    const DisorderInstance b = sample_disorder(g, "qmc-six-level", 11);
    const DisorderInstance c = sample_disorder(g, "qmc-six-level", 12);
    CHECK(a.couplings == b.couplings);
    CHECK(a.couplings != c.couplings);
}

TEST_CASE("instance JSON round-trip") {
    const ChimeraGraph g = build_diluted_chimera(2, DilutionSpec::default_diluted());
    const DisorderInstance inst = sample_disorder(g, "qmc-six-level", 42);
    const std::string text = instance_to_json(inst);
    const DisorderInstance back = instance_from_json(text);
    CHECK(back.graph.L == inst.graph.L);
    CHECK(back.graph.pattern == inst.graph.pattern);
    CHECK(back.seed == inst.seed);
    CHECK(back.distribution_id == inst.distribution_id);
    CHECK(back.graph.edges == inst.graph.edges);
    CHECK(back.couplings == inst.couplings);

    const std::string path = "/tmp/gmsim-test-instance.json";
    write_instance_file(inst, path);
    const DisorderInstance file_back = read_instance_file(path);
    CHECK(file_back.couplings == inst.couplings);
    std::remove(path.c_str());
}
