#include "modspace/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "modspace/rng.hpp"

namespace modspace {

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

} // namespace

struct Weight::Node {
    enum class Kind { constant, poly_bracket, sub_exp, block_lift, product, reciprocal };

    Kind kind = Kind::constant;
    double a = 1.0;                       // constant value | s | r
    double b = 0.0;                       // theta for sub_exp
    std::vector<int> offsets, lengths;    // block_lift
    std::vector<std::shared_ptr<const Node>> children;

    double log_eval(std::span<const double> x) const {
        switch (kind) {
            case Kind::constant:
                return std::log(a);
            case Kind::poly_bracket:
                return 0.5 * a * std::log1p(norm2(x));
            case Kind::sub_exp:
                return a * std::pow(std::sqrt(norm2(x)), b);
            case Kind::block_lift: {
                std::vector<double> sub;
                for (std::size_t j = 0; j < offsets.size(); ++j) {
                    require(offsets[j] + lengths[j] <= static_cast<int>(x.size()), ErrorCode::bad_argument,
                            "block lift exceeds ambient dimension");
                    for (int k = 0; k < lengths[j]; ++k) sub.push_back(x[offsets[j] + k]);
                }
                return children[0]->log_eval(sub);
            }
            case Kind::product: {
                double s = 0.0;
                for (const auto& c : children) s += c->log_eval(x);
                return s;
            }
            case Kind::reciprocal:
                return -children[0]->log_eval(x);
        }
        fail(ErrorCode::internal, "unreachable weight node kind");
    }

    int min_dim() const {
        switch (kind) {
            case Kind::block_lift: {
                int m = 0;
                for (std::size_t j = 0; j < offsets.size(); ++j) m = std::max(m, offsets[j] + lengths[j]);
                return m;
            }
            case Kind::product: {
                int m = 0;
                for (const auto& c : children) m = std::max(m, c->min_dim());
                return m;
            }
            case Kind::reciprocal:
                return children[0]->min_dim();
            default:
                return 0;
        }
    }
};

Weight::Weight() : node_(std::make_shared<Node>()) {}

Weight Weight::constant(double c) {
    require(c > 0.0 && std::isfinite(c), ErrorCode::bad_argument, "weight constant must be positive");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::constant;
    n->a = c;
    return Weight(n);
}

Weight Weight::poly_bracket(double s) {
    require(std::isfinite(s), ErrorCode::bad_argument, "poly bracket exponent must be finite");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::poly_bracket;
    n->a = s;
    return Weight(n);
}

Weight Weight::sub_exp(double r, double theta) {
    require(std::isfinite(r), ErrorCode::bad_argument, "sub_exp rate must be finite");
    require(theta > 0.0 && theta <= 1.0, ErrorCode::bad_argument, "sub_exp exponent must lie in (0,1]");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::sub_exp;
    n->a = r;
    n->b = theta;
    return Weight(n);
}

Weight Weight::block_lift(std::vector<int> offsets, std::vector<int> lengths, const Weight& inner) {
    require(offsets.size() == lengths.size() && !offsets.empty(), ErrorCode::bad_argument,
            "block lift needs matching offsets/lengths");
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        require(offsets[i] >= 0 && lengths[i] >= 1, ErrorCode::bad_argument, "invalid block range");
        for (std::size_t j = i + 1; j < offsets.size(); ++j) {
            bool disjoint = offsets[i] + lengths[i] <= offsets[j] || offsets[j] + lengths[j] <= offsets[i];
            require(disjoint, ErrorCode::bad_argument, "block lift ranges must be disjoint");
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::block_lift;
    n->offsets = std::move(offsets);
    n->lengths = std::move(lengths);
    n->children.push_back(inner.node_);
    return Weight(n);
}

Weight Weight::product(std::vector<Weight> factors) {
    require(!factors.empty(), ErrorCode::bad_argument, "weight product needs at least one factor");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::product;
    for (auto& f : factors) n->children.push_back(f.node_);
    return Weight(n);
}

Weight Weight::reciprocal(const Weight& inner) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::reciprocal;
    n->children.push_back(inner.node_);
    return Weight(n);
}

double Weight::log_eval(std::span<const double> x) const {
    require(static_cast<int>(x.size()) >= min_dim(), ErrorCode::bad_argument,
            "weight evaluated below its ambient dimension");
    return node_->log_eval(x);
}

double Weight::eval(std::span<const double> x) const { return std::exp(log_eval(x)); }

int Weight::min_dim() const { return node_->min_dim(); }

namespace {

bool node_is_trivial(const Weight::Node& n) {
    using Node = Weight::Node;
    switch (n.kind) {
        case Node::Kind::constant:
            return n.a == 1.0;
        case Node::Kind::poly_bracket:
            return n.a == 0.0;
        case Node::Kind::sub_exp:
            return n.a == 0.0;
        case Node::Kind::block_lift:
        case Node::Kind::reciprocal:
            return node_is_trivial(*n.children[0]);
        case Node::Kind::product:
            for (const auto& c : n.children)
                if (!node_is_trivial(*c)) return false;
            return true;
    }
    return false;
}

} // namespace

bool Weight::is_trivial() const { return node_is_trivial(*node_); }

namespace {

std::shared_ptr<const Weight::Node> moderator_node(const Weight::Node& n) {
    using Node = Weight::Node;
    auto out = std::make_shared<Node>();
    switch (n.kind) {
        case Node::Kind::constant:
            out->kind = Node::Kind::constant;
            out->a = 1.0;
            break;
        case Node::Kind::poly_bracket: {
            // Peetre: <x+y>^s <= 2^{|s|/2} <x>^s <y>^{|s|}; fold the constant
            // into v so the moderate inequality holds with constant one.
            auto poly = std::make_shared<Node>();
            poly->kind = Node::Kind::poly_bracket;
            poly->a = std::abs(n.a);
            auto cst = std::make_shared<Node>();
            cst->kind = Node::Kind::constant;
            cst->a = std::pow(2.0, std::abs(n.a) / 2.0);
            out->kind = Node::Kind::product;
            out->children.push_back(cst);
            out->children.push_back(poly);
            break;
        }
        case Node::Kind::sub_exp:
            out->kind = Node::Kind::sub_exp;
            out->a = std::abs(n.a);
            out->b = n.b;
            break;
        case Node::Kind::block_lift:
            out->kind = Node::Kind::block_lift;
            out->offsets = n.offsets;
            out->lengths = n.lengths;
            out->children.push_back(moderator_node(*n.children[0]));
            break;
        case Node::Kind::product:
            out->kind = Node::Kind::product;
            for (const auto& c : n.children) out->children.push_back(moderator_node(*c));
            break;
        case Node::Kind::reciprocal:
            // 1/w is v-moderate for the same v as w.
            return moderator_node(*n.children[0]);
    }
    return out;
}

} // namespace

Weight Weight::certified_moderator() const { return Weight(moderator_node(*node_)); }

namespace {

nlohmann::ordered_json node_to_json(const Weight::Node& n) {
    using Node = Weight::Node;
    nlohmann::ordered_json j;
    switch (n.kind) {
        case Node::Kind::constant:
            j["kind"] = "constant";
            j["value"] = n.a;
            break;
        case Node::Kind::poly_bracket:
            j["kind"] = "poly_bracket";
            j["s"] = n.a;
            break;
        case Node::Kind::sub_exp:
            j["kind"] = "sub_exp";
            j["r"] = n.a;
            j["theta"] = n.b;
            break;
        case Node::Kind::block_lift:
            j["kind"] = "block_lift";
            j["offsets"] = n.offsets;
            j["lengths"] = n.lengths;
            j["inner"] = node_to_json(*n.children[0]);
            break;
        case Node::Kind::product: {
            j["kind"] = "product";
            auto arr = nlohmann::ordered_json::array();
            for (const auto& c : n.children) arr.push_back(node_to_json(*c));
            j["factors"] = arr;
            break;
        }
        case Node::Kind::reciprocal:
            j["kind"] = "reciprocal";
            j["inner"] = node_to_json(*n.children[0]);
            break;
    }
    return j;
}

Weight weight_from_json(const nlohmann::json& j) {
    require(j.is_object() && j.contains("kind"), ErrorCode::bad_argument, "weight json needs a kind");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return Weight::constant(j.at("value").get<double>());
    if (kind == "poly_bracket") return Weight::poly_bracket(j.at("s").get<double>());
    if (kind == "sub_exp") return Weight::sub_exp(j.at("r").get<double>(), j.at("theta").get<double>());
    if (kind == "block_lift")
        return Weight::block_lift(j.at("offsets").get<std::vector<int>>(), j.at("lengths").get<std::vector<int>>(),
                                  weight_from_json(j.at("inner")));
    if (kind == "product") {
        std::vector<Weight> factors;
        for (const auto& f : j.at("factors")) factors.push_back(weight_from_json(f));
        return Weight::product(std::move(factors));
    }
    if (kind == "reciprocal") return Weight::reciprocal(weight_from_json(j.at("inner")));
    fail(ErrorCode::bad_argument, "unknown weight kind: " + kind);
}

} // namespace

std::string Weight::to_json() const { return node_to_json(*node_).dump(); }

Weight Weight::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    require(!j.is_discarded(), ErrorCode::bad_argument, "weight json does not parse");
    return weight_from_json(j);
}

double moderateness_ratio(const Weight& w, double r, int dim, long sample_count, double box_radius,
                          std::uint64_t seed) {
    require(r >= 0.0, ErrorCode::bad_argument, "moderateness rate must be nonnegative");
    require(sample_count >= 1, ErrorCode::bad_argument, "need at least one sample");
    require(dim >= 1, ErrorCode::bad_argument, "dimension must be positive");

    std::vector<double> x(dim), y(dim), xy(dim);
    double best = -std::numeric_limits<double>::infinity();

    auto consider = [&]() {
        for (int k = 0; k < dim; ++k) xy[k] = x[k] + y[k];
        double log_ratio = w.log_eval(xy) - w.log_eval(x) - r * std::sqrt(norm2(y));
        best = std::max(best, log_ratio);
    };

    if (seed == 0) {
        // Deterministic sweep: floor(sqrt(sample_count)) points per
        // coordinate of the (x, y) pair, each coordinate on [-R, R]; the
        // count is kept odd so the lattice contains the origin.
        long per = std::max(3L, static_cast<long>(std::floor(std::sqrt(static_cast<double>(sample_count)))));
        if (per % 2 == 0) --per;
        std::vector<long> idx(2 * dim, 0);
        bool done = false;
        while (!done) {
            for (int k = 0; k < dim; ++k) {
                x[k] = -box_radius + 2.0 * box_radius * idx[k] / static_cast<double>(per - 1);
                y[k] = -box_radius + 2.0 * box_radius * idx[dim + k] / static_cast<double>(per - 1);
            }
            consider();
            int pos = 0;
            while (pos < 2 * dim && ++idx[pos] == per) idx[pos++] = 0;
            done = pos == 2 * dim;
        }
    } else {
        Rng rng(seed);
        for (long i = 0; i < sample_count; ++i) {
            for (int k = 0; k < dim; ++k) x[k] = rng.uniform(-box_radius, box_radius);
            for (int k = 0; k < dim; ++k) y[k] = rng.uniform(-box_radius, box_radius);
            consider();
        }
    }
    return std::exp(best);
}

namespace {

double theta_lattice_norm(const Weight& theta, double r, const GridSpec& xi3_grid, const GridSpec& xi2_grid) {
    const int d2 = xi2_grid.dim;
    const int d3 = xi3_grid.dim;
    std::vector<double> pt(d2 + d3);
    std::vector<int> i2(d2), i3(d3);

    double sup = -std::numeric_limits<double>::infinity();
    const std::size_t n3 = xi3_grid.size();
    const std::size_t n2 = xi2_grid.size();
    const double log_cell = d2 * std::log(xi2_grid.step);

    for (std::size_t f3 = 0; f3 < n3; ++f3) {
        unflatten(f3, d3, xi3_grid.n, i3);
        for (int k = 0; k < d3; ++k) pt[d2 + k] = xi3_grid.coord(i3[k]);

        double val;
        if (std::isinf(r)) {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t f2 = 0; f2 < n2; ++f2) {
                unflatten(f2, d2, xi2_grid.n, i2);
                for (int k = 0; k < d2; ++k) pt[k] = xi2_grid.coord(i2[k]);
                m = std::max(m, theta.log_eval(pt));
            }
            val = m;
        } else {
            // log-sum-exp of r * log(theta) + log cell volume
            double m = -std::numeric_limits<double>::infinity();
            std::vector<double> logs(n2);
            for (std::size_t f2 = 0; f2 < n2; ++f2) {
                unflatten(f2, d2, xi2_grid.n, i2);
                for (int k = 0; k < d2; ++k) pt[k] = xi2_grid.coord(i2[k]);
                logs[f2] = r * theta.log_eval(pt) + log_cell;
                m = std::max(m, logs[f2]);
            }
            long double acc = 0.0L;
            for (double lv : logs) acc += std::exp(static_cast<long double>(lv - m));
            val = (m + std::log(static_cast<double>(acc))) / r;
        }
        sup = std::max(sup, val);
    }
    return std::exp(sup);
}

} // namespace

TraceWeightReport trace_weight_constant(const Weight& theta, double r, const GridSpec& xi3_grid,
                                        const GridSpec& xi2_grid) {
    require(r > 0.0, ErrorCode::bad_argument, "trace weight exponent r must be positive");
    require(theta.min_dim() <= xi2_grid.dim + xi3_grid.dim, ErrorCode::bad_argument,
            "theta ambient dimension exceeds xi2 + xi3 grid");

    TraceWeightReport rep;
    rep.r_exponent = r;
    rep.c_theta = theta_lattice_norm(theta, r, xi3_grid, xi2_grid);

    GridSpec doubled(xi2_grid.dim, 2 * xi2_grid.n, xi2_grid.step);
    double c2 = theta_lattice_norm(theta, r, xi3_grid, doubled);
    rep.doubling_growth = std::abs(c2 - rep.c_theta) / rep.c_theta;
    rep.finite = rep.doubling_growth < 0.05;
    return rep;
}

} // namespace modspace
