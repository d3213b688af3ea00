#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/cmatrix.hpp"

namespace alcc {

// Polynomial function of a matrix, either as a structural expression tree over
// matrix ops or as explicit per-entry multivariate polynomials. Evaluation
// extends polynomially to complex inputs: transposition never conjugates.
class PolyFn {
public:
    enum class Op { input, add, matmul, transpose, scale, const_mul };

    struct Node {
        Op op = Op::input;
        double factor = 1.0;            // scale
        RMatrix constant;               // const_mul, left multiplier
        std::vector<Node> args;
    };

    // One (variable, power) list per term; variables are flat row-major
    // indices into the input matrix.
    struct Monomial {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> vars; // sorted by index
        bool operator<(const Monomial& o) const { return vars < o.vars; }
        std::uint32_t total_degree() const;
    };

    struct EntryPoly {
        std::vector<std::pair<double, Monomial>> terms;
    };

    static PolyFn preset(const std::string& name); // identity | gram | square
    static PolyFn from_tree(Node root);
    static PolyFn from_entrywise(std::size_t in_rows, std::size_t in_cols,
                                 std::size_t out_rows, std::size_t out_cols,
                                 std::vector<EntryPoly> entries);
    static PolyFn from_json(const std::string& text);
    std::string to_json() const;

    bool is_tree() const noexcept { return tree_ != nullptr; }
    const Node& tree() const;

    // Output shape for an in_rows x in_cols input; raises on shape conflicts
    // inside the tree.
    std::pair<std::size_t, std::size_t> output_dims(std::size_t in_rows, std::size_t in_cols) const;

    CMatrix eval(const CMatrix& x) const;

    // Total degree plus the coefficient bounds (max |coefficient| and max
    // absolute coefficient sum over output entries) used by the error and
    // overflow analyses. For trees the values come from a structural recursion
    // that is exact whenever the expansion has no repeated monomials, which
    // holds for all shipped presets; otherwise they are safe for s_a while c
    // tracks the unmerged terms.
    struct Bounds {
        std::uint32_t degree = 0;
        double c = 0.0;
        double s_a = 0.0;
    };
    Bounds degree_and_bounds(std::size_t in_rows, std::size_t in_cols) const;

    // Full symbolic expansion; intended for small instances (oracles and
    // cross-checks), cost grows with the number of expanded terms.
    PolyFn expand(std::size_t in_rows, std::size_t in_cols) const;

    const std::vector<EntryPoly>& entries() const;
    std::pair<std::size_t, std::size_t> entrywise_in_dims() const;

private:
    PolyFn() = default;
    std::shared_ptr<Node> tree_;
    // general_entrywise payload
    std::size_t in_rows_ = 0, in_cols_ = 0, out_rows_ = 0, out_cols_ = 0;
    std::shared_ptr<std::vector<EntryPoly>> entries_;
};

} // namespace alcc
