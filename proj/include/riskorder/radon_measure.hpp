#pragma once

#include <limits>
#include <vector>

namespace riskorder {

/// Finite positive Radon measure represented as point atoms plus a
/// piecewise-constant density. This is exactly the class for which both
/// convex-function evaluation and expected utility are closed-form; it also
/// carries the distortion measures derived from a concave distortion.
class RadonMeasure {
public:
    struct Atom {
        double location;
        double mass;  // > 0
    };
    struct DensityPiece {
        double a;
        double b;       // a < b
        double value;   // >= 0, constant density on [a,b)
    };

    RadonMeasure() = default;
    // Validates, sorts, and rejects overlapping pieces / non-positive masses.
    RadonMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityPiece>& pieces() const { return pieces_; }

    bool empty() const { return atoms_.empty() && pieces_.empty(); }

    // Measure of (-inf, x]. Differences of this function give exactly
    // additive interval masses.
    double cumulative(double x) const;

    // Measure of the half-open interval (a, b].
    double measure_halfopen(double a, double b) const;

    // Measure of the closed interval [a, b].
    double measure_closed(double a, double b) const;

    // Mass of the atom exactly at x (0 if none).
    double mass_at(double x) const;

    double total() const;

    // Hull of the measure's support; [+inf, -inf) when empty.
    double support_lo() const;
    double support_hi() const;

    // True iff the density component is >= eps everywhere on [a, b]
    // (atoms never establish coverage).
    bool density_covers(double a, double b, double eps = 1e-12) const;

private:
    std::vector<Atom> atoms_;
    std::vector<DensityPiece> pieces_;
    std::vector<double> atom_cum_;   // compensated prefix masses
    std::vector<double> piece_cum_;  // compensated prefix masses of full pieces
};

}  // namespace riskorder
