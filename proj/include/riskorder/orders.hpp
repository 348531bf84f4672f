#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskorder/discrete.hpp"

namespace riskorder {

enum class OrderKind { stop_loss, convex, supermodular, tvar };

std::string order_kind_tag(OrderKind k);  // "sl", "cx", "sm", "tvar"

struct OrderWitness {
    std::string kind;               // "stop_loss_kink" | "means" | "tvar_level" |
                                    // "cdf_point" | "marginal" | "test_function"
    std::vector<double> location;   // retention d, level p, or grid point
    double lhs = 0.0;
    double rhs = 0.0;
    std::string detail;
};

/// Outcome of an order check. `margin` is the smallest slack observed, so
/// holds == true implies margin >= -1e-12. `decisive` is false only for the
/// n >= 3 supermodular falsifier, which proves violations but never the order.
struct OrderReport {
    bool holds = false;
    OrderKind order = OrderKind::stop_loss;
    std::optional<OrderWitness> witness;
    double margin = 0.0;
    bool decisive = true;
    std::string method;
};

inline constexpr double kOrderTol = 1e-12;

// X <=sl Y iff E(X-d)+ <= E(Y-d)+ for all d. The stop-loss difference is
// piecewise linear with kinks only on the union of supports, so evaluating
// the kinks plus the d -> -inf limit (mean difference) decides the order
// exactly.
OrderReport check_stop_loss(const DiscreteDistribution& x, const DiscreteDistribution& y);

// X <=cx Y iff X <=sl Y and E[X] = E[Y] (within kOrderTol).
OrderReport check_convex(const DiscreteDistribution& x, const DiscreteDistribution& y);

// TVaR-spectrum characterization of <=sl: compares TVaR at the given grid
// refined by both CDF jump levels (and 0). Must agree with check_stop_loss.
OrderReport check_tvar_spectrum(const DiscreteDistribution& x, const DiscreteDistribution& y,
                                std::span<const double> grid = {});

// Quantile coupling (F1^-1(U), ..., Fn^-1(U)): merges the marginals'
// cumulative breakpoints into segments on which every quantile is constant.
// The coupling's marginals equal the inputs probability-by-probability.
JointDiscreteDistribution comonotonic_joint(std::span<const DiscreteDistribution> marginals);

// Sum of the comonotonic coupling; quantile-additive at non-jump levels.
DiscreteDistribution comonotonic_sum(std::span<const DiscreteDistribution> marginals);

// Bivariate supermodular order via the classical equivalence: identical
// marginals plus pointwise joint-CDF dominance F_X <= F_Y on the union grid
// of support coordinates. Complete in dimension 2.
OrderReport check_supermodular_bivariate(const JointDiscreteDistribution& jx,
                                         const JointDiscreteDistribution& jy);

// Necessary-condition battery for any dimension: evaluates E f over
// supermodular test functions ((sum - d)+ ramps, products of shifted
// nonnegative factors, ramped coordinate minima). Reports "violated" with
// the witness function, or "not falsified" — never a proof of the order.
OrderReport supermodular_falsify(const JointDiscreteDistribution& jx,
                                 const JointDiscreteDistribution& jy, int trials,
                                 std::uint64_t seed);

}  // namespace riskorder
