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

#ifndef GMSIM_RECORD_IO_HPP
#define GMSIM_RECORD_IO_HPP

#include <string>
#include <vector>

#include "gmsim/qmc.hpp"

namespace gmsim {

/// One record per line:
/// {"instance":..,"beta":..,"gamma":..,"M":..,"n_meas":..,"m_abs":..,"m2":..,
///  "m4":..,"mi2":[..],"mi4":[..],"m_abs_err":..,"m2_err":..,"m4_err":..,
///  "mi2_err":[..]}
std::string record_to_json(const MomentRecord& rec);
MomentRecord record_from_json(const std::string& line);

void write_records_ndjson(const std::vector<MomentRecord>& records, const std::string& path);
std::vector<MomentRecord> read_records_ndjson(const std::string& path);

}  // namespace gmsim

#endif
