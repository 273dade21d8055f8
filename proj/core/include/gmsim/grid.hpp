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

#ifndef GMSIM_GRID_HPP
#define GMSIM_GRID_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gmsim/chimera.hpp"
#include "gmsim/qmc.hpp"

namespace gmsim {

/// Sweep over (instance, beta, gamma) cells. Each cell runs one chain with
/// an RNG stream derived from (master_seed, instance index, beta index,
/// gamma index), so results are independent of worker count and order.
struct GridSpec {
    std::vector<DisorderInstance> instances;
    std::vector<double> betas;
    std::vector<double> gammas;
    int M = 64;
    std::int64_t n_sweeps = 1 << 16;
    std::int64_t n_thermalize = -1;
    int measure_interval = 8;
    std::uint64_t master_seed = 0;
    InitKind init = InitKind::Random;
    bool cluster_updates = false;
    int workers = 1;
    /// Checkpoint directory; empty disables checkpointing. Layout:
    /// <dir>/<instance_id>/b<bi>_g<gi>.json, one MomentRecord per file,
    /// written atomically (tmp + rename).
    std::string checkpoint_dir;
};

struct GridResult {
    std::vector<MomentRecord> records;  // ordered by (instance, beta, gamma) index
    std::vector<std::string> failures;  // per-cell error messages, non-fatal
    int n_resumed = 0;                  // cells restored from checkpoint
};

GridResult run_grid(const GridSpec& spec,
                    const std::function<void(const MomentRecord&)>& on_record = {});

}  // namespace gmsim

#endif
