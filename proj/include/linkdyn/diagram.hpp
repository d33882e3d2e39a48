#pragma once

#include "linkdyn/qcalc.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace linkdyn {

// Vertices are 0-based internally; every text format is 1-based.
struct EdgeKind {
    int multiplicity = 1;  // 1..4
    int arrow = -1;        // arrow target for multiplicity >= 2, -1 otherwise
    bool a1aff = false;    // symmetric affine A1(1) edge, both entries -2

    static EdgeKind single() { return {}; }
    static EdgeKind arrowed(int mult, int target) { return {mult, target, false}; }
    static EdgeKind affine_a1() { return {2, -1, true}; }
    bool operator==(const EdgeKind&) const = default;
};

struct SolidEdge {
    int i, j;  // i < j
    EdgeKind kind;
    bool operator==(const SolidEdge&) const = default;
};

using CartanMatrix = std::vector<std::vector<int>>;

class Diagram {
public:
    Diagram() = default;
    explicit Diagram(int n, bool allow_self_links = false);

    void add_edge(int i, int j, EdgeKind kind);
    void add_link(int i, int j);
    // Throws ValidationError unless the diagram satisfies every invariant.
    void validate() const;

    int size() const { return n_; }
    bool allow_self_links() const { return allow_self_; }
    const std::vector<SolidEdge>& edges() const { return edges_; }
    const std::vector<std::pair<int, int>>& links() const { return links_; }

    const SolidEdge* edge_between(int i, int j) const;
    int partner(int v) const;  // linked vertex or -1
    // Solid components, each sorted, ordered by least vertex.
    std::vector<std::vector<int>> components() const;
    std::vector<int> component_index() const;
    bool link_connected() const;
    bool has_self_link() const;

    bool operator==(const Diagram& o) const;

private:
    int n_ = 0;
    bool allow_self_ = false;
    std::vector<SolidEdge> edges_;
    std::vector<std::pair<int, int>> links_;
    std::vector<int> partner_;
};

struct ComponentType {
    std::string family;  // "A".."G"
    int rank = 0;
    int twist = 0;  // 0 finite, 1 untwisted affine, 2 or 3 twisted affine

    bool affine() const { return twist > 0; }
    int vertex_count() const;

    std::string name() const;  // "B3", "A1(1)", "A4(2)", ...
    long long positive_root_count() const;  // finite families only
    bool operator==(const ComponentType&) const = default;
};

struct ClassifiedComponent {
    std::vector<int> vertices;
    ComponentType type;
};

Diagram parse_diagram(const std::string& text, bool allow_self_links = false);
std::string print_diagram(const Diagram& d);
std::string to_dot(const Diagram& d);

CartanMatrix to_cartan(const Diagram& d);
Diagram from_cartan(const CartanMatrix& a);

// Catalog lookup for a single connected Cartan matrix.
std::optional<ComponentType> identify_cartan(const CartanMatrix& a);
std::vector<ClassifiedComponent> classify_components(const Diagram& d);
// Catalog Cartan matrix in the catalog's own vertex order.
CartanMatrix catalog_cartan(const ComponentType& t);
std::vector<ComponentType> catalog_types(int vertex_count);

// group_order * prod N_I^{|Phi_I^+|}; one N per component in classify order.
BigInt hopf_dimension(const Diagram& d, const BigInt& group_order, const std::vector<int>& n_per_component);

}  // namespace linkdyn
