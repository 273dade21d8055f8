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

#ifndef GMSIM_CHIMERA_HPP
#define GMSIM_CHIMERA_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gmsim {

using Edge = std::pair<int, int>;

/// L x L grid of unit cells, each a K4,4 between a "vertical" partition
/// (couples to the cell above/below) and a "horizontal" partition (couples
/// to the cell left/right).
///
/// Site indexing is cell-major:
///   index = 8*(cell_row*L + cell_col) + 4*partition + leg
/// with partition 0 = vertical, partition 1 = horizontal, leg in 0..3.
struct ChimeraGraph {
    int L = 0;
    std::string pattern;           // "none", "default-diluted", "mask", or "custom"
    std::vector<Edge> edges;       // sorted, i < j per edge
    int n_sites = 0;               // 0: derived from L (8 L^2); set for custom graphs

    int num_sites() const { return n_sites > 0 ? n_sites : 8 * L * L; }
    int num_edges() const { return static_cast<int>(edges.size()); }
};

inline int chimera_site(int L, int row, int col, int partition, int leg) {
    return 8 * (row * L + col) + 4 * partition + leg;
}

/// Full Chimera edge count: 16 L^2 intra-cell + 8 L (L-1) inter-cell.
inline int full_chimera_edge_count(int L) { return 16 * L * L + 8 * L * (L - 1); }

/// Dilution spec. kind "none" and "default-diluted" are built in;
/// kind "mask" removes the listed edges (all must be valid Chimera edges).
struct DilutionSpec {
    std::string kind = "none";
    std::vector<Edge> removed;  // used only for kind == "mask"

    static DilutionSpec none() { return {}; }
    static DilutionSpec default_diluted() { return {"default-diluted", {}}; }
    static DilutionSpec mask(std::vector<Edge> removed_edges) {
        return {"mask", std::move(removed_edges)};
    }
};

ChimeraGraph build_diluted_chimera(int L, const DilutionSpec& pattern);

/// Quenched couplings on a graph. couplings[e] pairs with graph.edges[e].
/// Couplings are ferromagnetic (J <= 0); J = 0 bonds stay in the edge list
/// so one graph serves every instance.
struct DisorderInstance {
    ChimeraGraph graph;
    std::vector<double> couplings;
    std::uint64_t seed = 0;
    std::string distribution_id;
    std::string id;  // label used in records; defaults to "seed-<seed>"

    int num_sites() const { return graph.num_sites(); }
};

/// Six-level coupling laws: "qmc-six-level" draws from {0,-0.2,...,-1.0},
/// "dwave-six-level" from {0,-0.1,...,-0.5}, each value with weight 1/6.
const std::vector<double>& distribution_support(const std::string& distribution_id);

DisorderInstance sample_disorder(const ChimeraGraph& graph, const std::string& distribution_id,
                                 std::uint64_t seed);

/// Instance file round-trip, one JSON document per instance:
/// {L, pattern, seed, distribution_id, edges:[[i,j,J],...]} in that order.
std::string instance_to_json(const DisorderInstance& inst);
DisorderInstance instance_from_json(const std::string& text);
void write_instance_file(const DisorderInstance& inst, const std::string& path);
DisorderInstance read_instance_file(const std::string& path);

}  // namespace gmsim

#endif
