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

#include "gmsim/record_io.hpp"

#include <fstream>

#include "gmsim/errors.hpp"
#include "json.hpp"

namespace gmsim {

std::string record_to_json(const MomentRecord& rec) {
    nlohmann::ordered_json j;
    j["instance"] = rec.instance_id;
    j["beta"] = rec.beta;
    j["gamma"] = rec.gamma;
    j["M"] = rec.M;
    j["n_meas"] = rec.n_meas;
    j["m_abs"] = rec.m_abs;
    j["m2"] = rec.m2;
    j["m4"] = rec.m4;
    j["mi2"] = rec.mi2;
    j["mi4"] = rec.mi4;
    j["m_abs_err"] = rec.m_abs_err;
    j["m2_err"] = rec.m2_err;
    j["m4_err"] = rec.m4_err;
    j["mi2_err"] = rec.mi2_err;
    return j.dump();
}

MomentRecord record_from_json(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("record: ") + e.what());
    }
    MomentRecord rec;
    rec.instance_id = j.at("instance").get<std::string>();
    rec.beta = j.at("beta").get<double>();
    rec.gamma = j.at("gamma").get<double>();
    rec.M = j.at("M").get<int>();
    rec.n_meas = j.at("n_meas").get<std::int64_t>();
    rec.m_abs = j.at("m_abs").get<double>();
    rec.m2 = j.at("m2").get<double>();
    rec.m4 = j.at("m4").get<double>();
    rec.mi2 = j.at("mi2").get<std::vector<double>>();
    rec.mi4 = j.at("mi4").get<std::vector<double>>();
    rec.m_abs_err = j.value("m_abs_err", 0.0);
    rec.m2_err = j.value("m2_err", 0.0);
    rec.m4_err = j.value("m4_err", 0.0);
    if (j.contains("mi2_err")) rec.mi2_err = j.at("mi2_err").get<std::vector<double>>();
    return rec;
}

void write_records_ndjson(const std::vector<MomentRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for write: " + path);
    for (const auto& rec : records) out << record_to_json(rec) << '\n';
}

std::vector<MomentRecord> read_records_ndjson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open: " + path);
    std::vector<MomentRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_json(line));
    }
    return records;
}

}  // namespace gmsim
