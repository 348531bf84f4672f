#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "riskorder/discrete.hpp"
#include "riskorder/radon_measure.hpp"

namespace riskorder {

enum class Orientation { convex, concave };

/// Convex (or, via the orientation flag, concave) function represented by an
/// anchor value/slope at 0 plus a curvature measure:
///
///   body(x) = v0 + s0*x + int_(0,inf) (x-t)+ gamma(dt) + int_(-inf,0] (t-x)+ gamma(dt)
///
/// with gamma(x,y] = body'+(y) - body'+(x). A concave function is stored as
/// the negation of this convex body; all evaluation branches on the flag.
/// Exact for atomic curvature and for piecewise-constant densities.
class ConvexFunction {
public:
    ConvexFunction(double anchor_value, double anchor_slope, RadonMeasure curvature,
                   Orientation orientation = Orientation::convex);

    double anchor_value() const { return anchor_value_; }
    double anchor_slope() const { return anchor_slope_; }
    const RadonMeasure& curvature() const { return curvature_; }
    Orientation orientation() const { return orientation_; }
    bool is_concave() const { return orientation_ == Orientation::concave; }

    // Value of the represented function (negated body when concave). Outside
    // the curvature hull the representation continues affinely; a non-null
    // `extrapolated` reports when that happened.
    double eval(double x, bool* extrapolated = nullptr) const;

    // Right-hand derivative of the represented function; nondecreasing for
    // convex orientation, nonincreasing for concave.
    double right_derivative(double x) const;

    // E[u(X)] via the curvature-measure form: stop-loss transforms integrated
    // against gamma, closed-form per atom and per kink-refined density piece.
    // `hull_covered` (optional) reports whether the curvature hull contains
    // the support hull; evaluation proceeds with affine extension regardless.
    double expected_utility(const DiscreteDistribution& d, bool* hull_covered = nullptr) const;

    // Operationalizes "Lebesgue measure << curvature" on [a,b]: true iff the
    // density component is >= eps on all of [a,b]. Atoms never qualify.
    bool covers_lebesgue_gamma(double a, double b, double eps = 1e-12) const;

    // Hull of the curvature support; infinite for affine functions.
    double hull_lo() const;
    double hull_hi() const;
    bool in_hull(double x) const;

    ConvexFunction negated() const;

private:
    double body_eval(double x) const;
    double body_right_derivative(double x) const;

    double anchor_value_;
    double anchor_slope_;
    RadonMeasure curvature_;
    Orientation orientation_;
};

// Convex piecewise-linear function from knots and the slopes of the
// surrounding segments (slopes.size() == knots.size() + 1, nondecreasing).
// The function is anchored to pass through `anchor` (default: value 0 at the
// leftmost knot). Curvature is one atom per knot with mass = slope jump.
struct AnchorPoint {
    double x;
    double y;
};
ConvexFunction from_piecewise_linear(std::span<const double> knots,
                                     std::span<const double> slopes,
                                     std::optional<AnchorPoint> anchor = std::nullopt);

// Purely absolutely-continuous curvature.
ConvexFunction from_density(double anchor_value, double anchor_slope,
                            std::vector<RadonMeasure::DensityPiece> pieces);

// Built-in shapes used across the test corpus and the CLI.
// (x - center)^2, exact on [lo,hi].
ConvexFunction quadratic_utility(double center, double lo, double hi);
// (x - t)+
ConvexFunction ramp_utility(double t);
// |x - center|
ConvexFunction abs_utility(double center);
// exp(x) approximated by a step-density curvature on [lo,hi]; the
// approximation error is O(grid step squared) uniformly on the hull.
ConvexFunction exp_utility(double lo, double hi, double max_step = 1.0 / 64.0);

/// Second-difference convexity test on sampled values.
struct ConvexityCheck {
    bool convex = true;
    // First violating triple (grid indices i, i+1, i+2) when not convex.
    std::size_t witness_index = 0;
    double violation = 0.0;  // most negative slope increment observed
};
ConvexityCheck verify_convexity_grid(std::span<const double> xs, std::span<const double> fs,
                                     double tol = 1e-12);

}  // namespace riskorder
