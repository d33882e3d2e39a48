#pragma once

#include "linkdyn/diagram.hpp"

#include <cstdint>
#include <vector>

namespace linkdyn {

enum class Mode { Finite, Affine, Nonroot };

// Edge ids in the underlying multigraph: solid edges first (in d.edges()
// order), then dotted links (in d.links() order).
struct GraphEdge {
    int id;
    int u, v;
    bool dotted;
    EdgeKind kind;  // meaningful for solid edges only
};
std::vector<GraphEdge> multigraph_edges(const Diagram& d);

// A closed walk: edges[k] joins vertices[k] and vertices[k+1 mod len].
struct Cycle {
    std::vector<int> vertices;
    std::vector<int> edges;
    bool operator==(const Cycle&) const = default;
};

struct CycleMetrics {
    int l = 0;   // dotted edges
    int w2 = 0;  // |with - against| over double edges
    int w3 = 0;  // same over triple edges (affine mode)
    bool orientations_coincide = true;
    BigInt genus_finite = 0;
    BigInt genus_affine = 0;
    bool forward_natural = true;  // natural orientation equals the stored direction
    std::vector<int> level0;      // sorted
};

struct HeightTrace {
    std::vector<int> values;  // h after each step, values[0] = 0 at the start
    int final_height() const { return values.back(); }
};

constexpr std::uint64_t kDefaultCycleBudget = 1000000;

std::vector<Cycle> enumerate_cycles(const Diagram& d, std::uint64_t budget = kDefaultCycleBudget);
CycleMetrics cycle_metrics(const Diagram& d, const Cycle& c, Mode mode);
Cycle reversed(const Cycle& c);

// Height of the last vertex over the first along a path. When `edges` is
// empty the connecting edges are inferred, preferring solid ones.
HeightTrace height(const Diagram& d, const std::vector<int>& path, const std::vector<int>& edges = {});
std::vector<int> level0_vertices(const Diagram& d, const Cycle& c);

// gcd of all cycle genera; 0 when every genus vanishes or there are no cycles.
BigInt genus_gcd(const Diagram& d, Mode mode, std::uint64_t budget = kDefaultCycleBudget);

}  // namespace linkdyn
