#include "riskorder/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "riskorder/numerics.hpp"

namespace riskorder {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double q) { return std::min(1.0, std::max(0.0, q)); }

// Acklam's rational approximation with one Halley refinement against erfc;
// accurate to a few ulps over (0,1).
double inverse_normal(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0,1)");
    return inverse_normal(p);
}

Distortion Distortion::piecewise_linear(std::vector<std::array<double, 2>> knots) {
    if (knots.size() < 2) throw std::invalid_argument("distortion: need at least two knots");
    if (knots.front()[0] != 0.0 || knots.front()[1] != 0.0 || knots.back()[0] != 1.0 ||
        knots.back()[1] != 1.0)
        throw std::invalid_argument("distortion: knots must run from (0,0) to (1,1)");
    std::vector<double> slopes;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        double dq = knots[i][0] - knots[i - 1][0];
        double dv = knots[i][1] - knots[i - 1][1];
        if (!(dq > 0.0)) throw std::invalid_argument("distortion: knot abscissae must increase");
        if (dv < 0.0) throw std::invalid_argument("distortion: g must be nondecreasing");
        slopes.push_back(dv / dq);
    }
    bool concave = true, convex = true;
    for (std::size_t i = 1; i < slopes.size(); ++i) {
        if (slopes[i] > slopes[i - 1] + 1e-12) concave = false;
        if (slopes[i] < slopes[i - 1] - 1e-12) convex = false;
    }
    if (!concave && !convex)
        throw std::invalid_argument("distortion: piecewise-linear knots must be concave or convex");
    Distortion g;
    g.family_ = DistortionFamily::piecewise_linear;
    g.knots_ = std::move(knots);
    g.slopes_ = std::move(slopes);
    g.concave_ = concave;
    g.convex_ = convex;
    return g;
}

Distortion Distortion::identity() {
    return piecewise_linear({{0.0, 0.0}, {1.0, 1.0}});
}

Distortion Distortion::tvar_level(double p) {
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("tvar_level: p outside [0,1)");
    if (p == 0.0) return identity();
    return piecewise_linear({{0.0, 0.0}, {1.0 - p, 1.0}, {1.0, 1.0}});
}

Distortion Distortion::dual_power(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("dual_power: kappa must be positive");
    Distortion g;
    g.family_ = DistortionFamily::dual_power;
    g.param_ = kappa;
    g.concave_ = kappa >= 1.0;
    g.convex_ = kappa <= 1.0;
    return g;
}

Distortion Distortion::power(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("power: r must be positive");
    Distortion g;
    g.family_ = DistortionFamily::power;
    g.param_ = r;
    g.concave_ = r <= 1.0;
    g.convex_ = r >= 1.0;
    return g;
}

Distortion Distortion::wang(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("wang: theta must be finite");
    Distortion g;
    g.family_ = DistortionFamily::wang;
    g.param_ = theta;
    g.concave_ = theta >= 0.0;
    g.convex_ = theta <= 0.0;
    return g;
}

double Distortion::operator()(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("distortion: q outside [0,1]");
    switch (family_) {
        case DistortionFamily::piecewise_linear: {
            auto it = std::upper_bound(knots_.begin(), knots_.end(), q,
                                       [](double v, const std::array<double, 2>& k) {
                                           return v < k[0];
                                       });
            if (it == knots_.begin()) return knots_.front()[1];
            if (it == knots_.end()) return knots_.back()[1];
            std::size_t i = static_cast<std::size_t>(it - knots_.begin());
            return knots_[i - 1][1] + slopes_[i - 1] * (q - knots_[i - 1][0]);
        }
        case DistortionFamily::dual_power:
            return 1.0 - std::pow(1.0 - q, param_);
        case DistortionFamily::power:
            return std::pow(q, param_);
        case DistortionFamily::wang: {
            if (q == 0.0) return 0.0;
            if (q == 1.0) return 1.0;
            return normal_cdf(normal_quantile(q) + param_);
        }
    }
    return 0.0;
}

double Distortion::right_derivative(double q) const {
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("distortion: q outside [0,1)");
    switch (family_) {
        case DistortionFamily::piecewise_linear: {
            // slope of the segment to the right of q
            std::size_t i = 0;
            while (i + 1 < knots_.size() && knots_[i + 1][0] <= q) ++i;
            return slopes_[i];
        }
        case DistortionFamily::dual_power:
            return param_ * std::pow(1.0 - q, param_ - 1.0);
        case DistortionFamily::power:
            if (q == 0.0) return param_ >= 1.0 ? (param_ == 1.0 ? 1.0 : 0.0) : kInf;
            return param_ * std::pow(q, param_ - 1.0);
        case DistortionFamily::wang: {
            if (q == 0.0) return param_ > 0.0 ? kInf : (param_ == 0.0 ? 1.0 : 0.0);
            double z = normal_quantile(q);
            return std::exp(-param_ * z - 0.5 * param_ * param_);
        }
    }
    return 0.0;
}

double Distortion::left_derivative(double q) const {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("distortion: q outside (0,1]");
    switch (family_) {
        case DistortionFamily::piecewise_linear: {
            // slope of the segment to the left of q
            std::size_t i = knots_.size() - 2;
            while (i > 0 && knots_[i][0] >= q) --i;
            return slopes_[i];
        }
        case DistortionFamily::dual_power:
            if (q == 1.0) {
                if (param_ > 1.0) return 0.0;
                if (param_ == 1.0) return 1.0;
                return kInf;
            }
            return param_ * std::pow(1.0 - q, param_ - 1.0);
        case DistortionFamily::power:
            return param_ * std::pow(q, param_ - 1.0);
        case DistortionFamily::wang: {
            if (q == 1.0) return param_ > 0.0 ? 0.0 : (param_ == 0.0 ? 1.0 : kInf);
            double z = normal_quantile(q);
            return std::exp(-param_ * z - 0.5 * param_ * param_);
        }
    }
    return 0.0;
}

bool Distortion::finite_initial_slope() const {
    switch (family_) {
        case DistortionFamily::piecewise_linear:
            return true;
        case DistortionFamily::dual_power:
            return true;  // g'(0) = kappa
        case DistortionFamily::power:
            return param_ >= 1.0;
        case DistortionFamily::wang:
            return param_ <= 0.0;
    }
    return false;
}

Distortion Distortion::dual() const {
    switch (family_) {
        case DistortionFamily::piecewise_linear: {
            std::vector<std::array<double, 2>> knots;
            knots.reserve(knots_.size());
            for (auto it = knots_.rbegin(); it != knots_.rend(); ++it)
                knots.push_back({1.0 - (*it)[0], 1.0 - (*it)[1]});
            return piecewise_linear(std::move(knots));
        }
        case DistortionFamily::dual_power:
            return power(param_);  // 1 - g(1-q) = q^kappa
        case DistortionFamily::power:
            return dual_power(param_);
        case DistortionFamily::wang:
            return wang(-param_);
    }
    throw std::logic_error("distortion: unknown family");
}

std::string Distortion::describe() const {
    switch (family_) {
        case DistortionFamily::piecewise_linear:
            return "piecewise_linear(" + std::to_string(knots_.size()) + " knots)";
        case DistortionFamily::dual_power:
            return "dual_power(kappa=" + std::to_string(param_) + ")";
        case DistortionFamily::power:
            return "power(r=" + std::to_string(param_) + ")";
        case DistortionFamily::wang:
            return "wang(theta=" + std::to_string(param_) + ")";
    }
    return "distortion";
}

namespace {

void require_decomposable(const Distortion& g) {
    if (!g.concave()) throw std::domain_error("distortion measure: g must be concave");
    if (!g.finite_initial_slope())
        throw std::domain_error(
            "distortion measure: g'(0) is infinite; the TVaR decomposition is unsupported "
            "for this family");
}

// Adaptive step-density builder: subdivides until the linear interpolant of F
// deviates from F by at most tol on every cell, then stores the cell-average
// density. The resulting cumulative matches F exactly at the breakpoints.
void subdivide_density(const std::function<double(double)>& F, double a, double b, double fa,
                       double fb, double tol, int depth,
                       std::vector<RadonMeasure::DensityPiece>& out) {
    double mid = 0.5 * (a + b);
    double fm = F(mid);
    bool flat_enough = std::abs(fm - 0.5 * (fa + fb)) <= 0.5 * tol;
    if ((flat_enough && depth >= 3) || depth >= 80 || !(mid > a && mid < b)) {
        double v = (fb - fa) / (b - a);
        if (v > 0.0) out.push_back({a, b, v});
        return;
    }
    subdivide_density(F, a, mid, fa, fm, tol, depth + 1, out);
    subdivide_density(F, mid, b, fm, fb, tol, depth + 1, out);
}

}  // namespace

double nu_cumulative(const Distortion& g, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("nu_cumulative: q outside [0,1]");
    if (q == 1.0) return g.right_derivative(0.0);
    return g.left_derivative(1.0 - q);
}

RadonMeasure nu_of(const Distortion& g, double tol) {
    require_decomposable(g);
    std::vector<RadonMeasure::Atom> atoms;
    double mass0 = g.left_derivative(1.0);
    if (mass0 > 0.0) atoms.push_back({0.0, mass0});

    switch (g.family()) {
        case DistortionFamily::piecewise_linear: {
            // g'+ is a step function, so nu is purely atomic: each interior
            // knot q_k contributes mass (left slope - right slope) at 1 - q_k.
            const auto& knots = g.knots();
            for (std::size_t k = 1; k + 1 < knots.size(); ++k) {
                double q = knots[k][0];
                double jump = g.left_derivative(q) - g.right_derivative(q);
                if (jump > 0.0) atoms.push_back({1.0 - q, jump});
            }
            return RadonMeasure(std::move(atoms), {});
        }
        case DistortionFamily::dual_power: {
            double kappa = g.param();
            if (kappa == 1.0) return RadonMeasure(std::move(atoms), {});
            if (kappa == 2.0) return RadonMeasure(std::move(atoms), {{0.0, 1.0, 2.0}});
            // Continuous part of nu([0,q]) is kappa * q^(kappa-1).
            auto F = [kappa](double q) { return kappa * std::pow(q, kappa - 1.0); };
            std::vector<RadonMeasure::DensityPiece> pieces;
            subdivide_density(F, 0.0, 1.0, F(0.0), F(1.0), tol, 0, pieces);
            return RadonMeasure(std::move(atoms), std::move(pieces));
        }
        default:
            throw std::domain_error("distortion measure: unsupported family");
    }
}

RadonMeasure mu_of(const Distortion& g, double tol) {
    RadonMeasure nu = nu_of(g, tol);
    std::vector<RadonMeasure::Atom> atoms;
    for (const auto& a : nu.atoms()) {
        double mass = (1.0 - a.location) * a.mass;
        if (mass > 0.0) atoms.push_back({a.location, mass});
    }
    std::vector<RadonMeasure::DensityPiece> pieces;
    for (const auto& p : nu.pieces()) {
        if (p.value == 0.0) continue;
        // Refine so that the step approximation of the linear weight (1-w)
        // keeps the cumulative within tol on every cell.
        double h_max = std::sqrt(8.0 * tol / p.value);
        auto n = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil((p.b - p.a) / h_max)));
        for (std::size_t i = 0; i < n; ++i) {
            double a = p.a + (p.b - p.a) * static_cast<double>(i) / static_cast<double>(n);
            double b = p.a + (p.b - p.a) * static_cast<double>(i + 1) / static_cast<double>(n);
            double v = p.value * (1.0 - 0.5 * (a + b));
            if (v > 0.0) pieces.push_back({a, b, v});
        }
    }
    return RadonMeasure(std::move(atoms), std::move(pieces));
}

double rho_survival(const Distortion& g, const DiscreteDistribution& d) {
    std::vector<double> cuts = d.support();
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    CompensatedSum acc;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double a = cuts[k], b = cuts[k + 1];
        double gs = g(clamp01(d.survival(a)));
        if (a >= 0.0)
            acc.add((b - a) * gs);
        else
            acc.add((b - a) * (gs - 1.0));
    }
    return acc.value();
}

double rho_quantile(const Distortion& g, const DiscreteDistribution& d) {
    // int VaR_{1-q} dg(q): the quantile takes value x_i on the g-interval
    // between the survival levels around atom i.
    const auto& sup = d.support();
    const auto& cum = d.cumulative();
    CompensatedSum acc;
    double upper = 1.0;  // g(S_{i-1}) with S_{-1} = 1
    for (std::size_t i = 0; i < sup.size(); ++i) {
        double s = (i + 1 == sup.size()) ? 0.0 : clamp01(1.0 - cum[i]);
        double lower = g(s);
        acc.add(sup[i] * (upper - lower));
        upper = lower;
    }
    return acc.value();
}

double rho_tvar(const Distortion& g, const DiscreteDistribution& d) {
    require_decomposable(g);
    const auto& sup = d.support();
    const auto& cum = d.cumulative();
    const std::size_t n = sup.size();

    // Segment ends of the quantile function, last clamped to exactly 1.
    std::vector<double> hi(n);
    for (std::size_t i = 0; i < n; ++i) hi[i] = (i + 1 == n) ? 1.0 : cum[i];

    // R_i = integral of the quantile over (hi_i, 1].
    std::vector<double> tail(n, 0.0);
    {
        CompensatedSum acc;
        for (std::size_t i = n; i-- > 0;) {
            tail[i] = acc.value();
            double lo = (i == 0) ? 0.0 : hi[i - 1];
            acc.add(sup[i] * (hi[i] - lo));
        }
    }

    CompensatedSum rho;
    rho.add(g.left_derivative(1.0) * d.mean());  // atom of mu at 0 carries E[X]
    for (std::size_t i = 0; i < n; ++i) {
        double a = (i == 0) ? 0.0 : hi[i - 1];
        double b = hi[i];
        if (!(b > a)) continue;
        // On (a,b]: (1-w) TVaR_w = x_i (b - w) + R_i, so
        // int TVaR_w dmu = (x_i b + R_i) nu((a,b]) - x_i int w dnu(w).
        double Fa = nu_cumulative(g, a);
        double Fb = nu_cumulative(g, b);
        double seg_mass = Fb - Fa;
        // Integration by parts: int_(a,b] w dnu = b F(b) - a F(a) - int_a^b F,
        // and int_a^b nu([0,w]) dw = g(1-a) - g(1-b).
        double first_moment = b * Fb - a * Fa - (g(1.0 - a) - g(1.0 - b));
        rho.add((sup[i] * b + tail[i]) * seg_mass);
        rho.add(-sup[i] * first_moment);
    }
    return rho.value();
}

bool covers_lebesgue_nu(const Distortion& g) {
    if (!g.concave()) throw std::domain_error("covers_lebesgue_nu: g must be concave");
    switch (g.family()) {
        case DistortionFamily::piecewise_linear:
            return false;  // purely atomic
        case DistortionFamily::dual_power:
            return g.param() > 1.0;
        case DistortionFamily::power:
            return g.param() < 1.0;
        case DistortionFamily::wang:
            return g.param() > 0.0;
    }
    return false;
}

}  // namespace riskorder
