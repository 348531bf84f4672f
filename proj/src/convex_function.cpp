#include "riskorder/convex_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskorder/numerics.hpp"

namespace riskorder {

namespace {

// Split density pieces at 0 so every piece lies entirely in (-inf,0] or
// [0,inf); the two representation integrals can then be handled per piece.
std::vector<RadonMeasure::DensityPiece> split_at_zero(
    std::vector<RadonMeasure::DensityPiece> pieces) {
    std::vector<RadonMeasure::DensityPiece> out;
    out.reserve(pieces.size() + 1);
    for (const auto& p : pieces) {
        if (p.a < 0.0 && p.b > 0.0) {
            out.push_back({p.a, 0.0, p.value});
            out.push_back({0.0, p.b, p.value});
        } else {
            out.push_back(p);
        }
    }
    return out;
}

// int_a^b (x - t)+ dt, closed form.
double ramp_integral_upper(double a, double b, double x) {
    double hi = std::min(b, x);
    if (hi <= a) return 0.0;
    return 0.5 * ((x - a) * (x - a) - (x - hi) * (x - hi));
}

// int_a^b (t - x)+ dt, closed form.
double ramp_integral_lower(double a, double b, double x) {
    double lo = std::max(a, x);
    if (lo >= b) return 0.0;
    return 0.5 * ((b - x) * (b - x) - (lo - x) * (lo - x));
}

}  // namespace

ConvexFunction::ConvexFunction(double anchor_value, double anchor_slope, RadonMeasure curvature,
                               Orientation orientation)
    : anchor_value_(anchor_value),
      anchor_slope_(anchor_slope),
      curvature_(RadonMeasure(curvature.atoms(), split_at_zero(curvature.pieces()))),
      orientation_(orientation) {
    if (!std::isfinite(anchor_value) || !std::isfinite(anchor_slope))
        throw std::invalid_argument("convexfn: non-finite anchor");
}

double ConvexFunction::body_eval(double x) const {
    CompensatedSum acc;
    acc.add(anchor_value_);
    acc.add(anchor_slope_ * x);
    for (const auto& a : curvature_.atoms()) {
        if (a.location > 0.0)
            acc.add(a.mass * positive_part(x - a.location));
        else
            acc.add(a.mass * positive_part(a.location - x));
    }
    for (const auto& p : curvature_.pieces()) {
        if (p.value == 0.0) continue;
        if (p.a >= 0.0)
            acc.add(p.value * ramp_integral_upper(p.a, p.b, x));
        else
            acc.add(p.value * ramp_integral_lower(p.a, p.b, x));
    }
    return acc.value();
}

double ConvexFunction::body_right_derivative(double x) const {
    if (x >= 0.0) return anchor_slope_ + curvature_.measure_halfopen(0.0, x);
    return anchor_slope_ - curvature_.measure_halfopen(x, 0.0);
}

double ConvexFunction::eval(double x, bool* extrapolated) const {
    if (extrapolated) *extrapolated = !in_hull(x);
    double v = body_eval(x);
    return is_concave() ? -v : v;
}

double ConvexFunction::right_derivative(double x) const {
    double s = body_right_derivative(x);
    return is_concave() ? -s : s;
}

double ConvexFunction::expected_utility(const DiscreteDistribution& d,
                                        bool* hull_covered) const {
    if (hull_covered)
        *hull_covered = in_hull(d.min_support()) && in_hull(d.max_support());

    CompensatedSum acc;
    acc.add(anchor_value_);
    acc.add(anchor_slope_ * d.mean());
    for (const auto& a : curvature_.atoms()) {
        if (a.location > 0.0)
            acc.add(a.mass * d.stop_loss(a.location));
        else
            acc.add(a.mass * d.lower_stop_loss(a.location));
    }
    // Density pieces: the integrand t -> E(X-t)+ (resp. E(t-X)+) is piecewise
    // linear with kinks at the support points, so the trapezoid rule on the
    // support-refined grid is exact.
    const auto& sup = d.support();
    for (const auto& p : curvature_.pieces()) {
        if (p.value == 0.0) continue;
        std::vector<double> cuts{p.a};
        for (double s : sup)
            if (s > p.a && s < p.b) cuts.push_back(s);
        cuts.push_back(p.b);
        const bool upper = p.a >= 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double lo = cuts[i], hi = cuts[i + 1];
            double flo = upper ? d.stop_loss(lo) : d.lower_stop_loss(lo);
            double fhi = upper ? d.stop_loss(hi) : d.lower_stop_loss(hi);
            acc.add(p.value * 0.5 * (flo + fhi) * (hi - lo));
        }
    }
    double v = acc.value();
    return is_concave() ? -v : v;
}

bool ConvexFunction::covers_lebesgue_gamma(double a, double b, double eps) const {
    return curvature_.density_covers(a, b, eps);
}

double ConvexFunction::hull_lo() const {
    return curvature_.empty() ? -std::numeric_limits<double>::infinity()
                              : curvature_.support_lo();
}

double ConvexFunction::hull_hi() const {
    return curvature_.empty() ? std::numeric_limits<double>::infinity()
                              : curvature_.support_hi();
}

bool ConvexFunction::in_hull(double x) const { return x >= hull_lo() && x <= hull_hi(); }

ConvexFunction ConvexFunction::negated() const {
    return ConvexFunction(anchor_value_, anchor_slope_, curvature_,
                          is_concave() ? Orientation::convex : Orientation::concave);
}

ConvexFunction from_piecewise_linear(std::span<const double> knots,
                                     std::span<const double> slopes,
                                     std::optional<AnchorPoint> anchor) {
    if (slopes.size() != knots.size() + 1)
        throw std::invalid_argument("piecewise linear: need one more slope than knots");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1]))
            throw std::invalid_argument("piecewise linear: knots must be strictly increasing");
    std::vector<RadonMeasure::Atom> atoms;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        double jump = slopes[i + 1] - slopes[i];
        if (jump < 0.0) throw std::invalid_argument("piecewise linear: slopes must be nondecreasing");
        if (jump > 0.0) atoms.push_back({knots[i], jump});
    }
    // anchor_slope is the right-hand derivative at 0: the slope of the
    // segment containing 0 from the right (atoms exactly at 0 belong to the
    // lower-branch integral).
    std::size_t seg = 0;
    for (std::size_t i = 0; i < knots.size(); ++i)
        if (knots[i] <= 0.0) seg = i + 1;
    ConvexFunction trial(0.0, slopes[seg], RadonMeasure(atoms, {}));
    double x0 = anchor ? anchor->x : (knots.empty() ? 0.0 : knots.front());
    double y0 = anchor ? anchor->y : 0.0;
    return ConvexFunction(y0 - trial.eval(x0), slopes[seg], RadonMeasure(atoms, {}));
}

ConvexFunction from_density(double anchor_value, double anchor_slope,
                            std::vector<RadonMeasure::DensityPiece> pieces) {
    return ConvexFunction(anchor_value, anchor_slope, RadonMeasure({}, std::move(pieces)));
}

ConvexFunction quadratic_utility(double center, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("quadratic_utility: lo < hi required");
    // (x-center)^2: u(0) = center^2, u'(0) = -2*center, u'' = 2 on the hull.
    // The density must reach 0 for the anchored representation to be exact.
    double a = std::min(lo, 0.0);
    double b = std::max(hi, 0.0);
    return ConvexFunction(center * center, -2.0 * center, RadonMeasure({}, {{a, b, 2.0}}));
}

ConvexFunction ramp_utility(double t) {
    const double knots[] = {t};
    const double slopes[] = {0.0, 1.0};
    return from_piecewise_linear(knots, slopes);
}

ConvexFunction abs_utility(double center) {
    const double knots[] = {center};
    const double slopes[] = {-1.0, 1.0};
    return from_piecewise_linear(knots, slopes);
}

ConvexFunction exp_utility(double lo, double hi, double max_step) {
    if (!(lo < hi)) throw std::invalid_argument("exp_utility: lo < hi required");
    if (!(max_step > 0.0)) throw std::invalid_argument("exp_utility: step must be positive");
    double a = std::min(lo, 0.0);
    double b = std::max(hi, 0.0);
    auto n = static_cast<std::size_t>(std::ceil((b - a) / max_step));
    std::vector<RadonMeasure::DensityPiece> pieces;
    pieces.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x0 = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
        double x1 = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(n);
        pieces.push_back({x0, x1, std::exp(0.5 * (x0 + x1))});
    }
    return ConvexFunction(1.0, 1.0, RadonMeasure({}, std::move(pieces)));
}

ConvexityCheck verify_convexity_grid(std::span<const double> xs, std::span<const double> fs,
                                     double tol) {
    if (xs.size() != fs.size()) throw std::invalid_argument("convexity grid: size mismatch");
    if (xs.size() < 3) throw std::invalid_argument("convexity grid: need at least 3 samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("convexity grid: unsorted grid");
    ConvexityCheck result;
    double worst = 0.0;
    for (std::size_t i = 0; i + 2 < xs.size(); ++i) {
        double left = (fs[i + 1] - fs[i]) / (xs[i + 1] - xs[i]);
        double right = (fs[i + 2] - fs[i + 1]) / (xs[i + 2] - xs[i + 1]);
        double inc = right - left;
        if (inc < -tol && result.convex) {
            result.convex = false;
            result.witness_index = i;
        }
        worst = std::min(worst, inc);
    }
    result.violation = worst;
    return result;
}

}  // namespace riskorder
