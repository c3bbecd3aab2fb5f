#ifndef MODSPACE_WEIGHT_HPP
#define MODSPACE_WEIGHT_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "modspace/error.hpp"
#include "modspace/grid.hpp"

namespace modspace {

// Evaluable moderate-weight expression tree.  Leaves:
//   constant(c)        : c > 0
//   poly_bracket(s)    : <x>^s = (1 + |x|^2)^{s/2}
//   sub_exp(r, theta)  : e^{r |x|^theta}, theta in (0, 1]
// Combinators: block_lift (apply inner to coordinate sub-blocks), product,
// reciprocal.  Evaluation happens in log space so e^{r|x|} factors cannot
// overflow before cancellation.
class Weight {
public:
    Weight(); // constant 1

    static Weight constant(double c);
    static Weight poly_bracket(double s);
    static Weight sub_exp(double r, double theta);
    static Weight block_lift(std::vector<int> offsets, std::vector<int> lengths, const Weight& inner);
    static Weight product(std::vector<Weight> factors);
    static Weight reciprocal(const Weight& inner);

    double log_eval(std::span<const double> x) const;
    double eval(std::span<const double> x) const;

    // Smallest ambient dimension the tree can be evaluated on (block lifts
    // pin coordinates; plain leaves accept any dimension).
    int min_dim() const;

    // Structurally the constant weight 1 (lets hot loops skip evaluation).
    bool is_trivial() const;

    // A submultiplicative v with omega(x+y) <= omega(x) v(y): signs are
    // flattened and the Peetre constant is folded in, so the inequality
    // holds with constant one.
    Weight certified_moderator() const;

    std::string to_json() const;
    static Weight from_json(const std::string& text);

    struct Node;
    const Node& root() const { return *node_; }

private:
    explicit Weight(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct TraceWeightReport {
    double c_theta = 0.0;
    double r_exponent = 0.0;
    bool finite = false;
    double doubling_growth = 0.0; // relative change under extent doubling
};

// Max over sampled pairs (x, y) in [-box, box]^m of
// omega(x+y) / (omega(x) e^{r |y|}).  seed == 0 enumerates a deterministic
// lattice sweep of floor(sqrt(sample_count)) points per coordinate; any
// other seed draws sample_count uniform pairs.
double moderateness_ratio(const Weight& w, double r, int dim, long sample_count, double box_radius,
                          std::uint64_t seed);

// C_theta: sup over xi3 grid points of the lattice L^r quasi-norm of
// theta(. , xi3) over the xi2 grid (Riemann cell volume step^{d2} for finite
// r, plain sup for r = inf).  The finite flag comes from re-running with the
// xi2 extent doubled at fixed step and requiring < 5% relative growth.
TraceWeightReport trace_weight_constant(const Weight& theta, double r, const GridSpec& xi3_grid,
                                        const GridSpec& xi2_grid);

} // namespace modspace

#endif
