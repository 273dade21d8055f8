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

#include "gmsim/grid.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gmsim/errors.hpp"
#include "gmsim/record_io.hpp"

namespace fs = std::filesystem;

namespace gmsim {

namespace {

std::string cell_path(const std::string& dir, const std::string& instance_id, int bi, int gi) {
    return dir + "/" + instance_id + "/b" + std::to_string(bi) + "_g" + std::to_string(gi) + ".json";
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        out << content << '\n';
    }
    fs::rename(tmp, path);
}

}  // namespace

GridResult run_grid(const GridSpec& spec, const std::function<void(const MomentRecord&)>& on_record) {
    if (spec.instances.empty() || spec.betas.empty() || spec.gammas.empty())
        throw ValidationError("run_grid: instances, betas, and gammas must be non-empty");

    const std::size_t n_inst = spec.instances.size();
    const std::size_t n_beta = spec.betas.size();
    const std::size_t n_gamma = spec.gammas.size();
    const std::size_t n_cells = n_inst * n_beta * n_gamma;

    GridResult result;
    result.records.resize(n_cells);
    std::vector<std::uint8_t> ok(n_cells, 0);

    if (!spec.checkpoint_dir.empty())
        for (const auto& inst : spec.instances)
            fs::create_directories(spec.checkpoint_dir + "/" + inst.id);

    std::mutex mu;
    std::atomic<std::size_t> next{0};
    int n_resumed = 0;

    auto work = [&]() {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= n_cells) return;
            const std::size_t ii = cell / (n_beta * n_gamma);
            const std::size_t bi = (cell / n_gamma) % n_beta;
            const std::size_t gi = cell % n_gamma;
            const DisorderInstance& inst = spec.instances[ii];

            std::string ckpt;
            if (!spec.checkpoint_dir.empty()) {
                ckpt = cell_path(spec.checkpoint_dir, inst.id, static_cast<int>(bi), static_cast<int>(gi));
                if (fs::exists(ckpt)) {
                    try {
                        std::ifstream in(ckpt);
                        std::stringstream ss;
                        ss << in.rdbuf();
                        std::string text = ss.str();
                        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
                        MomentRecord rec = record_from_json(text);
                        std::lock_guard<std::mutex> lock(mu);
                        result.records[cell] = std::move(rec);
                        ok[cell] = 1;
                        ++n_resumed;
                        continue;
                    } catch (const std::exception& e) {
                        // corrupt checkpoint: recompute the cell
                        std::lock_guard<std::mutex> lock(mu);
                        result.failures.push_back("checkpoint " + ckpt + ": " + e.what() + " (recomputed)");
                    }
                }
            }

            try {
                RunParams params;
                params.beta = spec.betas[bi];
                params.gamma = spec.gammas[gi];
                params.M = spec.M;
                params.n_sweeps = spec.n_sweeps;
                params.n_thermalize = spec.n_thermalize;
                params.measure_interval = spec.measure_interval;
                params.init = spec.init;
                params.cluster_updates = spec.cluster_updates;
                params.seed = derive_seed(spec.master_seed, {ii, bi, gi});
                MomentRecord rec = run_chain(inst, params);
                if (!ckpt.empty()) write_atomic(ckpt, record_to_json(rec));
                std::lock_guard<std::mutex> lock(mu);
                result.records[cell] = std::move(rec);
                ok[cell] = 1;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mu);
                result.failures.push_back(inst.id + " beta=" + std::to_string(spec.betas[bi]) +
                                          " gamma=" + std::to_string(spec.gammas[gi]) + ": " + e.what());
            }
        }
    };

    const int workers = std::max(1, spec.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // drop failed cells, keep deterministic order
    std::vector<MomentRecord> kept;
    kept.reserve(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c)
        if (ok[c]) kept.push_back(std::move(result.records[c]));
    result.records = std::move(kept);
    result.n_resumed = n_resumed;
    if (on_record)
        for (const auto& rec : result.records) on_record(rec);
    return result;
}

}  // namespace gmsim
