#pragma once

#include <array>
#include <string>
#include <vector>

#include "riskorder/discrete.hpp"
#include "riskorder/radon_measure.hpp"

namespace riskorder {

enum class DistortionFamily { piecewise_linear, dual_power, power, wang };

/// Distortion function g: [0,1] -> [0,1], nondecreasing with g(0)=0, g(1)=1,
/// continuous on [0,1] (the parameterizations below cannot express a jump).
/// Carries one-sided derivatives in closed form per family; no numeric
/// differentiation anywhere.
///
/// Built-in families:
///   piecewise_linear  knots (q_i, g(q_i)); must be concave or convex
///   dual_power        g(q) = 1 - (1-q)^kappa   (concave iff kappa >= 1)
///   power             g(q) = q^r               (concave iff r <= 1)
///   wang              g(q) = Phi(Phi^-1(q) + theta)  (concave iff theta >= 0)
class Distortion {
public:
    static Distortion piecewise_linear(std::vector<std::array<double, 2>> knots);
    static Distortion identity();
    // TVaR at level p as a distortion: g(q) = min(q / (1-p), 1).
    static Distortion tvar_level(double p);
    static Distortion dual_power(double kappa);
    static Distortion power(double r);
    static Distortion wang(double theta);

    double operator()(double q) const;

    // One-sided derivatives; right_derivative(0) and left_derivative(1) are
    // the boundary slopes (possibly +inf for right_derivative(0)).
    double right_derivative(double q) const;  // q in [0,1)
    double left_derivative(double q) const;   // q in (0,1]

    bool concave() const { return concave_; }
    bool convex() const { return convex_; }
    // g'+(0) < inf; gates the measure decomposition below.
    bool finite_initial_slope() const;

    // Dual distortion 1 - g(1-q); involutive, swaps concave/convex.
    Distortion dual() const;

    DistortionFamily family() const { return family_; }
    double param() const { return param_; }  // kappa / r / theta
    const std::vector<std::array<double, 2>>& knots() const { return knots_; }

    std::string describe() const;

private:
    Distortion() = default;

    DistortionFamily family_ = DistortionFamily::piecewise_linear;
    double param_ = 0.0;
    std::vector<std::array<double, 2>> knots_;   // piecewise_linear only
    std::vector<double> slopes_;                 // per segment
    bool concave_ = false;
    bool convex_ = false;
};

// Distribution function of nu on [0,1] (right-continuous version of
// q -> g'+(1-q)); nu({0}) = g'-(1), nu([0,1]) = g'+(0). Requires concave g.
double nu_cumulative(const Distortion& g, double q);

// The Radon measure nu with nu([0,q]) = g'+(1-q): exact atoms for
// piecewise-linear g, exact constant density for dual_power kappa=2, and an
// adaptive step-density approximation otherwise whose cumulative deviates
// from the closed form by at most `tol` (exact at its own breakpoints).
// Throws std::domain_error for non-concave g or infinite g'+(0).
RadonMeasure nu_of(const Distortion& g, double tol = 1e-10);

// The probability measure d(mu)(w) = (1-w) d(nu)(w) with the atom at 0
// carried at weight 1; total mass 1 up to the stated tolerance.
RadonMeasure mu_of(const Distortion& g, double tol = 1e-10);

// Distorted expectation, survival form:
//   rho_g[X] = int_0^inf g(S(x)) dx + int_-inf^0 [g(S(x)) - 1] dx.
// Exact: the survival function is a step function.
double rho_survival(const Distortion& g, const DiscreteDistribution& d);

// Quantile (Lebesgue-Stieltjes) form: rho_g[X] = int VaR_{1-q}[X] dg(q).
double rho_quantile(const Distortion& g, const DiscreteDistribution& d);

// Weighted-TVaR decomposition route:
//   rho_g[X] = g'-(1) E[X] + int_(0,1] TVaR_w[X] d(mu)(w).
// (1-w) TVaR_w is piecewise linear on the CDF segments, so the integral
// against nu reduces to closed-form sums of g / g' evaluations; exact.
// Throws std::domain_error for non-concave g or infinite g'+(0).
double rho_tvar(const Distortion& g, const DiscreteDistribution& d);

// Decides "Lebesgue << nu" for the hypothesis of the equality theorems: true
// iff nu has an a.e.-positive density component on [0,1]. Closed-form per
// family (dual_power kappa>1, power r<1, wang theta>0: true; any
// piecewise-linear g: false, the measure is purely atomic).
bool covers_lebesgue_nu(const Distortion& g);

// Standard normal CDF and quantile used by the Wang family (|error| well
// below the 1e-6 Wang tolerances used in the test suites).
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace riskorder
