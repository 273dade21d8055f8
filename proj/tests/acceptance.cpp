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

// Acceptance battery: one pass/fail line per criterion, nonzero exit if any
// criterion fails.
//
//   acceptance           all eight criteria at full size (hours; criterion 4
//                        checkpoints under $GMSIM_VERIFY_CACHE and resumes)
//   acceptance quick     reduced sizes, criterion 4 skipped (minutes)

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "gmsim/verify.hpp"

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "quick") == 0;
    const std::vector<gmsim::CheckResult> results =
        quick ? gmsim::quick_battery() : gmsim::full_battery();
    int n_fail = 0;
    for (const auto& r : results) {
        std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++n_fail;
    }
    std::printf("%d/%zu criteria passed%s\n", int(results.size()) - n_fail, results.size(),
                quick ? " (quick battery; long-run trend criterion not included)" : "");
    return n_fail == 0 ? 0 : 1;
}
