#include "core/polyfun.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace alcc {

using nlohmann::json;

std::uint32_t PolyFn::Monomial::total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [idx, pow] : vars) d += pow;
    return d;
}

PolyFn PolyFn::from_tree(Node root) {
    PolyFn f;
    f.tree_ = std::make_shared<Node>(std::move(root));
    return f;
}

PolyFn PolyFn::from_entrywise(std::size_t in_rows, std::size_t in_cols,
                              std::size_t out_rows, std::size_t out_cols,
                              std::vector<EntryPoly> entries) {
    if (entries.size() != out_rows * out_cols)
        fail(errc::invalid_argument, "entrywise polyfn: entry count mismatch");
    PolyFn f;
    f.in_rows_ = in_rows;
    f.in_cols_ = in_cols;
    f.out_rows_ = out_rows;
    f.out_cols_ = out_cols;
    f.entries_ = std::make_shared<std::vector<EntryPoly>>(std::move(entries));
    return f;
}

PolyFn PolyFn::preset(const std::string& name) {
    Node input{Op::input, 1.0, {}, {}};
    if (name == "identity") return from_tree(input);
    if (name == "gram") {
        Node t{Op::transpose, 1.0, {}, {input}};
        return from_tree(Node{Op::matmul, 1.0, {}, {t, input}});
    }
    if (name == "square") return from_tree(Node{Op::matmul, 1.0, {}, {input, input}});
    fail(errc::invalid_argument, "unknown polyfn preset: " + name);
}

const PolyFn::Node& PolyFn::tree() const {
    if (!tree_) fail(errc::invalid_argument, "polyfn: not a tree form");
    return *tree_;
}

const std::vector<PolyFn::EntryPoly>& PolyFn::entries() const {
    if (!entries_) fail(errc::invalid_argument, "polyfn: not entrywise form");
    return *entries_;
}

std::pair<std::size_t, std::size_t> PolyFn::entrywise_in_dims() const {
    if (!entries_) fail(errc::invalid_argument, "polyfn: not entrywise form");
    return {in_rows_, in_cols_};
}

namespace {

using Node = PolyFn::Node;
using Op = PolyFn::Op;

std::pair<std::size_t, std::size_t> tree_dims(const Node& n, std::size_t m, std::size_t c) {
    switch (n.op) {
        case Op::input:
            return {m, c};
        case Op::transpose: {
            auto d = tree_dims(n.args.at(0), m, c);
            return {d.second, d.first};
        }
        case Op::scale:
            return tree_dims(n.args.at(0), m, c);
        case Op::add: {
            auto a = tree_dims(n.args.at(0), m, c);
            auto b = tree_dims(n.args.at(1), m, c);
            if (a != b) fail(errc::dimension_mismatch, "polyfn add: operand shapes differ");
            return a;
        }
        case Op::matmul: {
            auto a = tree_dims(n.args.at(0), m, c);
            auto b = tree_dims(n.args.at(1), m, c);
            if (a.second != b.first) fail(errc::dimension_mismatch, "polyfn matmul: inner dims differ");
            return {a.first, b.second};
        }
        case Op::const_mul: {
            auto a = tree_dims(n.args.at(0), m, c);
            if (n.constant.cols() != a.first)
                fail(errc::dimension_mismatch, "polyfn const_mul: matrix width mismatch");
            return {n.constant.rows(), a.second};
        }
    }
    fail(errc::runtime, "polyfn: bad node");
}

std::uint32_t tree_degree(const Node& n) {
    switch (n.op) {
        case Op::input: return 1;
        case Op::transpose:
        case Op::scale:
        case Op::const_mul: return tree_degree(n.args.at(0));
        case Op::add: return std::max(tree_degree(n.args.at(0)), tree_degree(n.args.at(1)));
        case Op::matmul: return tree_degree(n.args.at(0)) + tree_degree(n.args.at(1));
    }
    fail(errc::runtime, "polyfn: bad node");
}

CMatrix tree_eval(const Node& n, const CMatrix& x) {
    switch (n.op) {
        case Op::input:
            return x;
        case Op::transpose:
            return tree_eval(n.args.at(0), x).transpose();
        case Op::scale: {
            CMatrix a = tree_eval(n.args.at(0), x);
            a.scale(cplx(n.factor, 0.0));
            return a;
        }
        case Op::add: {
            CMatrix a = tree_eval(n.args.at(0), x);
            a.add_scaled(tree_eval(n.args.at(1), x), cplx(1.0, 0.0));
            return a;
        }
        case Op::matmul:
            return matmul(tree_eval(n.args.at(0), x), tree_eval(n.args.at(1), x));
        case Op::const_mul:
            return matmul(to_complex(n.constant), tree_eval(n.args.at(0), x));
    }
    fail(errc::runtime, "polyfn: bad node");
}

// Per-entry coefficient statistics: C holds max |coefficient|, S the absolute
// coefficient sum, under the no-repeated-monomial assumption.
struct CoeffStats {
    RMatrix c, s;
};

CoeffStats tree_stats(const Node& n, std::size_t m, std::size_t cdim) {
    switch (n.op) {
        case Op::input: {
            CoeffStats st{RMatrix(m, cdim), RMatrix(m, cdim)};
            for (std::size_t i = 0; i < st.c.size(); ++i) {
                st.c.data()[i] = 1.0;
                st.s.data()[i] = 1.0;
            }
            return st;
        }
        case Op::transpose: {
            CoeffStats a = tree_stats(n.args.at(0), m, cdim);
            CoeffStats st{RMatrix(a.c.cols(), a.c.rows()), RMatrix(a.s.cols(), a.s.rows())};
            for (std::size_t i = 0; i < a.c.rows(); ++i)
                for (std::size_t j = 0; j < a.c.cols(); ++j) {
                    st.c(j, i) = a.c(i, j);
                    st.s(j, i) = a.s(i, j);
                }
            return st;
        }
        case Op::scale: {
            CoeffStats a = tree_stats(n.args.at(0), m, cdim);
            const double f = std::abs(n.factor);
            for (std::size_t i = 0; i < a.c.size(); ++i) {
                a.c.data()[i] *= f;
                a.s.data()[i] *= f;
            }
            return a;
        }
        case Op::add: {
            CoeffStats a = tree_stats(n.args.at(0), m, cdim);
            CoeffStats b = tree_stats(n.args.at(1), m, cdim);
            for (std::size_t i = 0; i < a.c.size(); ++i) {
                a.c.data()[i] = std::max(a.c.data()[i], b.c.data()[i]);
                a.s.data()[i] += b.s.data()[i];
            }
            return a;
        }
        case Op::matmul: {
            CoeffStats a = tree_stats(n.args.at(0), m, cdim);
            CoeffStats b = tree_stats(n.args.at(1), m, cdim);
            const std::size_t rows = a.c.rows(), inner = a.c.cols(), cols = b.c.cols();
            CoeffStats st{RMatrix(rows, cols), RMatrix(rows, cols)};
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t l = 0; l < inner; ++l) {
                    const double ac = a.c(i, l), as = a.s(i, l);
                    for (std::size_t j = 0; j < cols; ++j) {
                        st.c(i, j) = std::max(st.c(i, j), ac * b.c(l, j));
                        st.s(i, j) += as * b.s(l, j);
                    }
                }
            return st;
        }
        case Op::const_mul: {
            CoeffStats a = tree_stats(n.args.at(0), m, cdim);
            const RMatrix& w = n.constant;
            const std::size_t rows = w.rows(), inner = w.cols(), cols = a.c.cols();
            CoeffStats st{RMatrix(rows, cols), RMatrix(rows, cols)};
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t l = 0; l < inner; ++l) {
                    const double wv = std::abs(w(i, l));
                    if (wv == 0.0) continue;
                    for (std::size_t j = 0; j < cols; ++j) {
                        st.c(i, j) = std::max(st.c(i, j), wv * a.c(l, j));
                        st.s(i, j) += wv * a.s(l, j);
                    }
                }
            return st;
        }
    }
    fail(errc::runtime, "polyfn: bad node");
}

// Symbolic expansion support.
using PolyMap = std::map<PolyFn::Monomial, double>;

PolyMap poly_mul(const PolyMap& a, const PolyMap& b) {
    PolyMap out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            PolyFn::Monomial m;
            auto ia = ma.vars.begin(), ib = mb.vars.begin();
            while (ia != ma.vars.end() || ib != mb.vars.end()) {
                if (ib == mb.vars.end() || (ia != ma.vars.end() && ia->first < ib->first)) {
                    m.vars.push_back(*ia++);
                } else if (ia == ma.vars.end() || ib->first < ia->first) {
                    m.vars.push_back(*ib++);
                } else {
                    m.vars.emplace_back(ia->first, ia->second + ib->second);
                    ++ia;
                    ++ib;
                }
            }
            out[m] += ca * cb;
        }
    return out;
}

std::vector<PolyMap> tree_expand(const Node& n, std::size_t m, std::size_t cdim,
                                 std::size_t& out_rows, std::size_t& out_cols) {
    switch (n.op) {
        case Op::input: {
            out_rows = m;
            out_cols = cdim;
            std::vector<PolyMap> e(m * cdim);
            for (std::size_t i = 0; i < m * cdim; ++i) {
                PolyFn::Monomial mono;
                mono.vars.emplace_back(static_cast<std::uint32_t>(i), 1u);
                e[i][mono] = 1.0;
            }
            return e;
        }
        case Op::transpose: {
            std::size_t r, c;
            auto a = tree_expand(n.args.at(0), m, cdim, r, c);
            out_rows = c;
            out_cols = r;
            std::vector<PolyMap> e(r * c);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j) e[j * r + i] = a[i * c + j];
            return e;
        }
        case Op::scale: {
            auto a = tree_expand(n.args.at(0), m, cdim, out_rows, out_cols);
            for (auto& p : a)
                for (auto& [mono, coeff] : p) coeff *= n.factor;
            return a;
        }
        case Op::add: {
            std::size_t r2, c2;
            auto a = tree_expand(n.args.at(0), m, cdim, out_rows, out_cols);
            auto b = tree_expand(n.args.at(1), m, cdim, r2, c2);
            for (std::size_t i = 0; i < a.size(); ++i)
                for (const auto& [mono, coeff] : b[i]) a[i][mono] += coeff;
            return a;
        }
        case Op::matmul: {
            std::size_t r1, c1, r2, c2;
            auto a = tree_expand(n.args.at(0), m, cdim, r1, c1);
            auto b = tree_expand(n.args.at(1), m, cdim, r2, c2);
            out_rows = r1;
            out_cols = c2;
            std::vector<PolyMap> e(r1 * c2);
            for (std::size_t i = 0; i < r1; ++i)
                for (std::size_t l = 0; l < c1; ++l)
                    for (std::size_t j = 0; j < c2; ++j) {
                        auto prod = poly_mul(a[i * c1 + l], b[l * c2 + j]);
                        for (const auto& [mono, coeff] : prod) e[i * c2 + j][mono] += coeff;
                    }
            return e;
        }
        case Op::const_mul: {
            std::size_t r1, c1;
            auto a = tree_expand(n.args.at(0), m, cdim, r1, c1);
            const RMatrix& w = n.constant;
            out_rows = w.rows();
            out_cols = c1;
            std::vector<PolyMap> e(out_rows * c1);
            for (std::size_t i = 0; i < out_rows; ++i)
                for (std::size_t l = 0; l < r1; ++l) {
                    if (w(i, l) == 0.0) continue;
                    for (std::size_t j = 0; j < c1; ++j)
                        for (const auto& [mono, coeff] : a[l * c1 + j])
                            e[i * c1 + j][mono] += w(i, l) * coeff;
                }
            return e;
        }
    }
    fail(errc::runtime, "polyfn: bad node");
}

json tree_to_json(const Node& n) {
    json j;
    switch (n.op) {
        case Op::input:
            j["op"] = "input";
            break;
        case Op::transpose:
            j["op"] = "transpose";
            j["arg"] = tree_to_json(n.args.at(0));
            break;
        case Op::scale:
            j["op"] = "scale";
            j["factor"] = n.factor;
            j["arg"] = tree_to_json(n.args.at(0));
            break;
        case Op::add:
        case Op::matmul:
            j["op"] = n.op == Op::add ? "add" : "matmul";
            j["lhs"] = tree_to_json(n.args.at(0));
            j["rhs"] = tree_to_json(n.args.at(1));
            break;
        case Op::const_mul: {
            j["op"] = "const_mul";
            json rows = json::array();
            for (std::size_t i = 0; i < n.constant.rows(); ++i) {
                json row = json::array();
                for (std::size_t c = 0; c < n.constant.cols(); ++c) row.push_back(n.constant(i, c));
                rows.push_back(row);
            }
            j["matrix"] = rows;
            j["arg"] = tree_to_json(n.args.at(0));
            break;
        }
    }
    return j;
}

Node tree_from_json(const json& j) {
    const std::string op = j.at("op").get<std::string>();
    if (op == "input") return Node{Op::input, 1.0, {}, {}};
    if (op == "transpose") return Node{Op::transpose, 1.0, {}, {tree_from_json(j.at("arg"))}};
    if (op == "scale")
        return Node{Op::scale, j.at("factor").get<double>(), {}, {tree_from_json(j.at("arg"))}};
    if (op == "add" || op == "matmul")
        return Node{op == "add" ? Op::add : Op::matmul, 1.0, {},
                    {tree_from_json(j.at("lhs")), tree_from_json(j.at("rhs"))}};
    if (op == "const_mul") {
        const json& rows = j.at("matrix");
        if (!rows.is_array() || rows.empty())
            fail(errc::config, "polyfn const_mul: matrix must be a nonempty array");
        const std::size_t r = rows.size(), c = rows.at(0).size();
        RMatrix w(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows.at(i).size() != c) fail(errc::config, "polyfn const_mul: ragged matrix");
            for (std::size_t k = 0; k < c; ++k) w(i, k) = rows.at(i).at(k).get<double>();
        }
        return Node{Op::const_mul, 1.0, std::move(w), {tree_from_json(j.at("arg"))}};
    }
    fail(errc::config, "polyfn: unknown op '" + op + "'");
}

} // namespace

std::pair<std::size_t, std::size_t> PolyFn::output_dims(std::size_t in_rows, std::size_t in_cols) const {
    if (tree_) return tree_dims(*tree_, in_rows, in_cols);
    if (in_rows != in_rows_ || in_cols != in_cols_)
        fail(errc::dimension_mismatch, "entrywise polyfn: fixed input dims differ");
    return {out_rows_, out_cols_};
}

CMatrix PolyFn::eval(const CMatrix& x) const {
    if (tree_) {
        tree_dims(*tree_, x.rows(), x.cols());
        return tree_eval(*tree_, x);
    }
    if (x.rows() != in_rows_ || x.cols() != in_cols_)
        fail(errc::dimension_mismatch, "entrywise polyfn: input dims differ");
    CMatrix out(out_rows_, out_cols_);
    const auto& es = *entries_;
    for (std::size_t e = 0; e < es.size(); ++e) {
        cplx acc(0.0, 0.0);
        for (const auto& [coeff, mono] : es[e].terms) {
            cplx term(coeff, 0.0);
            for (const auto& [idx, pow] : mono.vars) {
                const cplx v = x.data()[idx];
                for (std::uint32_t p = 0; p < pow; ++p) term *= v;
            }
            acc += term;
        }
        out.data()[e] = acc;
    }
    return out;
}

PolyFn::Bounds PolyFn::degree_and_bounds(std::size_t in_rows, std::size_t in_cols) const {
    Bounds b;
    if (tree_) {
        tree_dims(*tree_, in_rows, in_cols);
        b.degree = tree_degree(*tree_);
        const CoeffStats st = tree_stats(*tree_, in_rows, in_cols);
        for (std::size_t i = 0; i < st.c.size(); ++i) {
            b.c = std::max(b.c, st.c.data()[i]);
            b.s_a = std::max(b.s_a, st.s.data()[i]);
        }
        return b;
    }
    if (in_rows != in_rows_ || in_cols != in_cols_)
        fail(errc::dimension_mismatch, "entrywise polyfn: fixed input dims differ");
    for (const auto& ep : *entries_) {
        double s = 0.0;
        for (const auto& [coeff, mono] : ep.terms) {
            b.degree = std::max(b.degree, mono.total_degree());
            b.c = std::max(b.c, std::abs(coeff));
            s += std::abs(coeff);
        }
        b.s_a = std::max(b.s_a, s);
    }
    return b;
}

PolyFn PolyFn::expand(std::size_t in_rows, std::size_t in_cols) const {
    if (!tree_) return *this;
    std::size_t r = 0, c = 0;
    auto maps = tree_expand(*tree_, in_rows, in_cols, r, c);
    std::vector<EntryPoly> entries(maps.size());
    for (std::size_t e = 0; e < maps.size(); ++e)
        for (const auto& [mono, coeff] : maps[e])
            if (coeff != 0.0) entries[e].terms.emplace_back(coeff, mono);
    return from_entrywise(in_rows, in_cols, r, c, std::move(entries));
}

std::string PolyFn::to_json() const {
    if (!tree_) fail(errc::invalid_argument, "polyfn: only tree form serializes to JSON");
    json j;
    j["kind"] = "matrix_poly";
    j["expr"] = tree_to_json(*tree_);
    return j.dump();
}

PolyFn PolyFn::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail(errc::config, std::string("polyfn json: ") + e.what());
    }
    if (j.is_string()) return preset(j.get<std::string>());
    if (j.contains("preset")) return preset(j.at("preset").get<std::string>());
    if (j.at("kind").get<std::string>() != "matrix_poly")
        fail(errc::config, "polyfn json: unsupported kind");
    try {
        return from_tree(tree_from_json(j.at("expr")));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(errc::config, std::string("polyfn json: ") + e.what());
    }
}

} // namespace alcc
