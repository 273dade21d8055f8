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

#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "gmsim/config.hpp"
#include "gmsim/errors.hpp"
#include "gmsim/record_io.hpp"
#include "gmsim/toml.hpp"

using namespace gmsim;

static const char* kSampleToml = R"(
# sample experiment
[experiment]
mode = "qmc"
out_dir = "/tmp/gmsim-out"
master_seed = 12345

[lattice]
L = 4
pattern = "default-diluted"

[disorder]
distribution_id = "qmc-six-level"
n_instances = 3

[grid]
betas = [10.0, 20.0]
gammas = [1.6, 1.79, 2.0]

[run]
M = 32
n_sweeps = 4096
measure_interval = 4

[analysis]
recipes = ["fig4", "fig11"]
)";

TEST_CASE("toml subset parser") {
    const auto doc = toml::Document::parse_string(R"(
title = "hello \"world\""
count = 42
ratio = -1.5e-2
flag = true
items = [1.0, 2.5, 3.0]
names = ["a", "b"]
[table]
key = 7
[table.sub]
deep = "yes"
)");
    CHECK(doc.at("title").as_string() == "hello \"world\"");
    CHECK(doc.at("count").as_int() == 42);
    CHECK(doc.at("count").as_double() == doctest::Approx(42.0));  // ints promote
    CHECK(doc.at("ratio").as_double() == doctest::Approx(-0.015));
    CHECK(doc.at("flag").as_bool());
    CHECK(doc.at("items").as_double_array() == std::vector<double>({1.0, 2.5, 3.0}));
    CHECK(doc.at("names").as_string_array() == std::vector<std::string>({"a", "b"}));
    CHECK(doc.at("table.key").as_int() == 7);
    CHECK(doc.at("table.sub.deep").as_string() == "yes");
    CHECK_FALSE(doc.contains("missing"));
    CHECK(doc.get_int("missing", -1) == -1);
    CHECK_THROWS_AS(doc.at("missing"), ValidationError);
}

TEST_CASE("toml parser rejects malformed input") {
    CHECK_THROWS_AS(toml::Document::parse_string("key ="), ValidationError);
    CHECK_THROWS_AS(toml::Document::parse_string("= 3"), ValidationError);
    CHECK_THROWS_AS(toml::Document::parse_string("a = 1\na = 2"), ValidationError);
    CHECK_THROWS_AS(toml::Document::parse_string("a = [1, 2"), ValidationError);
}

TEST_CASE("experiment config parses and validates") {
    const ExperimentConfig cfg = ExperimentConfig::from_toml_string(kSampleToml);
    CHECK(cfg.mode == "qmc");
    CHECK(cfg.master_seed == 12345);
    CHECK(cfg.seed_set);
    CHECK(cfg.L == 4);
    CHECK(cfg.pattern == "default-diluted");
    CHECK(cfg.n_instances == 3);
    CHECK(cfg.betas == std::vector<double>({10.0, 20.0}));
    CHECK(cfg.gammas.size() == 3);
    CHECK(cfg.M == 32);
    CHECK(cfg.n_sweeps == 4096);
    CHECK(cfg.recipes == std::vector<std::string>({"fig4", "fig11"}));
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config validation flags the offending field") {
    ExperimentConfig cfg = ExperimentConfig::from_toml_string(kSampleToml);
    cfg.betas.clear();
    try {
        cfg.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("grid.betas") != std::string::npos);
    }

    ExperimentConfig no_seed = ExperimentConfig::from_toml_string(kSampleToml);
    no_seed.seed_set = false;
    CHECK_THROWS_AS(no_seed.validate(), ValidationError);

    ExperimentConfig odd_m = ExperimentConfig::from_toml_string(kSampleToml);
    odd_m.M = 15;
    CHECK_THROWS_AS(odd_m.validate(), ValidationError);

    ExperimentConfig bad_recipe = ExperimentConfig::from_toml_string(kSampleToml);
    bad_recipe.recipes = {"fig999"};
    CHECK_THROWS_AS(bad_recipe.validate(), ValidationError);
}

TEST_CASE("config digest is stable and content-sensitive") {
    const ExperimentConfig a = ExperimentConfig::from_toml_string(kSampleToml);
    const ExperimentConfig b = ExperimentConfig::from_toml_string(kSampleToml);
    CHECK(a.digest() == b.digest());
    CHECK(a.digest_hex().size() == 16);
    ExperimentConfig c = a;
    c.master_seed += 1;
    CHECK(a.digest() != c.digest());
}

TEST_CASE("known recipes cover both pipelines") {
    const auto& recipes = known_recipes();
    for (const char* r : {"fig2a", "fig4", "fig11", "fig25", "dfig15", "dfig17", "dfig26"})
        CHECK(std::find(recipes.begin(), recipes.end(), r) != recipes.end());
}

TEST_CASE("moment record NDJSON round-trip") {
    MomentRecord rec;
    rec.instance_id = "seed-7";
    rec.beta = 20.0;
    rec.gamma = 1.79;
    rec.M = 64;
    rec.n_meas = 1000;
    rec.m_abs = 0.41;
    rec.m2 = 0.2;
    rec.m4 = 0.07;
    rec.mi2 = {0.1, 0.2};
    rec.mi4 = {0.03, 0.05};
    rec.m_abs_err = 0.01;
    rec.m2_err = 0.004;
    rec.m4_err = 0.002;
    rec.mi2_err = {0.003, 0.005};
    const MomentRecord back = record_from_json(record_to_json(rec));
    CHECK(back.instance_id == rec.instance_id);
    CHECK(back.beta == rec.beta);
    CHECK(back.gamma == rec.gamma);
    CHECK(back.M == rec.M);
    CHECK(back.n_meas == rec.n_meas);
    CHECK(back.m2 == rec.m2);
    CHECK(back.mi2 == rec.mi2);
    CHECK(back.mi2_err == rec.mi2_err);

    const std::string path = "/tmp/gmsim-test-records.ndjson";
    write_records_ndjson({rec, rec}, path);
    const auto recs = read_records_ndjson(path);
    REQUIRE(recs.size() == 2);
    CHECK(recs[1].m4 == rec.m4);
    std::remove(path.c_str());
}
