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

#include <filesystem>

#include "doctest.h"
#include "gmsim/grid.hpp"

using namespace gmsim;

namespace {

GridSpec small_spec() {
    const ChimeraGraph g = build_diluted_chimera(1, DilutionSpec::default_diluted());
    GridSpec spec;
    spec.instances = {sample_disorder(g, "qmc-six-level", 1),
                      sample_disorder(g, "qmc-six-level", 2)};
    spec.betas = {1.0, 2.0};
    spec.gammas = {1.5};
    spec.M = 8;
    spec.n_sweeps = 512;
    spec.measure_interval = 4;
    spec.master_seed = 99;
    return spec;
}

}  // namespace

TEST_CASE("grid runs every cell in deterministic order") {
    const GridSpec spec = small_spec();
    const GridResult res = run_grid(spec);
    REQUIRE(res.records.size() == 4);
    CHECK(res.failures.empty());
    CHECK(res.n_resumed == 0);
    // ordered by (instance, beta, gamma)
    CHECK(res.records[0].instance_id == spec.instances[0].id);
    CHECK(res.records[0].beta == 1.0);
    CHECK(res.records[1].beta == 2.0);
    CHECK(res.records[2].instance_id == spec.instances[1].id);

    // cell streams are derived from indices: a second run is identical
    const GridResult res2 = run_grid(spec);
    for (std::size_t k = 0; k < 4; ++k) CHECK(res2.records[k].m2 == res.records[k].m2);
}

TEST_CASE("grid checkpointing resumes completed cells") {
    namespace fs = std::filesystem;
    const std::string dir = "/tmp/gmsim-test-ckpt";
    fs::remove_all(dir);
    GridSpec spec = small_spec();
    spec.checkpoint_dir = dir;
    const GridResult first = run_grid(spec);
    CHECK(first.n_resumed == 0);
    const GridResult second = run_grid(spec);
    CHECK(second.n_resumed == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(second.records[k].m2 == first.records[k].m2);
        CHECK(second.records[k].mi2 == first.records[k].mi2);
    }
    fs::remove_all(dir);
}

TEST_CASE("grid reports per-record callbacks") {
    int calls = 0;
    const GridResult res = run_grid(small_spec(), [&](const MomentRecord&) { ++calls; });
    CHECK(calls == 4);
    CHECK(res.records.size() == 4);
}
