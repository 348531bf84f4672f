#include "riskorder/radon_measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskorder/numerics.hpp"

namespace riskorder {

RadonMeasure::RadonMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
    for (const Atom& a : atoms_)
        if (!std::isfinite(a.location) || !(a.mass > 0.0))
            throw std::invalid_argument("radon: atom mass must be positive and finite");
    for (const DensityPiece& p : pieces_) {
        if (!(p.a < p.b)) throw std::invalid_argument("radon: density piece needs a < b");
        if (!(p.value >= 0.0) || !std::isfinite(p.value))
            throw std::invalid_argument("radon: density value must be nonnegative");
    }
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& x, const Atom& y) { return x.location < y.location; });
    for (std::size_t i = 1; i < atoms_.size(); ++i)
        if (atoms_[i].location == atoms_[i - 1].location)
            throw std::invalid_argument("radon: duplicate atom location");
    std::sort(pieces_.begin(), pieces_.end(),
              [](const DensityPiece& x, const DensityPiece& y) { return x.a < y.a; });
    for (std::size_t i = 1; i < pieces_.size(); ++i)
        if (pieces_[i].a < pieces_[i - 1].b - 1e-15)
            throw std::invalid_argument("radon: overlapping density pieces");

    CompensatedSum ac;
    atom_cum_.reserve(atoms_.size());
    for (const Atom& a : atoms_) {
        ac.add(a.mass);
        atom_cum_.push_back(ac.value());
    }
    CompensatedSum pc;
    piece_cum_.reserve(pieces_.size());
    for (const DensityPiece& p : pieces_) {
        pc.add(p.value * (p.b - p.a));
        piece_cum_.push_back(pc.value());
    }
}

double RadonMeasure::cumulative(double x) const {
    double m = 0.0;
    // atoms at locations <= x
    auto ait = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                                [](double v, const Atom& a) { return v < a.location; });
    if (ait != atoms_.begin()) m += atom_cum_[static_cast<std::size_t>(ait - atoms_.begin()) - 1];
    // density up to x
    auto pit = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                                [](double v, const DensityPiece& p) { return v < p.a; });
    if (pit != pieces_.begin()) {
        std::size_t k = static_cast<std::size_t>(pit - pieces_.begin()) - 1;
        double partial = pieces_[k].value * (std::min(x, pieces_[k].b) - pieces_[k].a);
        double full = (k == 0) ? 0.0 : piece_cum_[k - 1];
        if (x >= pieces_[k].b)
            m += piece_cum_[k];
        else
            m += full + partial;
    }
    return m;
}

double RadonMeasure::measure_halfopen(double a, double b) const {
    if (b < a) throw std::invalid_argument("radon: interval needs a <= b");
    return cumulative(b) - cumulative(a);
}

double RadonMeasure::measure_closed(double a, double b) const {
    if (b < a) throw std::invalid_argument("radon: interval needs a <= b");
    return cumulative(b) - cumulative(a) + mass_at(a);
}

double RadonMeasure::mass_at(double x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                               [](const Atom& a, double v) { return a.location < v; });
    if (it != atoms_.end() && it->location == x) return it->mass;
    return 0.0;
}

double RadonMeasure::total() const {
    double m = atoms_.empty() ? 0.0 : atom_cum_.back();
    if (!pieces_.empty()) m += piece_cum_.back();
    return m;
}

double RadonMeasure::support_lo() const {
    double lo = std::numeric_limits<double>::infinity();
    if (!atoms_.empty()) lo = std::min(lo, atoms_.front().location);
    if (!pieces_.empty()) lo = std::min(lo, pieces_.front().a);
    return lo;
}

double RadonMeasure::support_hi() const {
    double hi = -std::numeric_limits<double>::infinity();
    if (!atoms_.empty()) hi = std::max(hi, atoms_.back().location);
    for (const DensityPiece& p : pieces_) hi = std::max(hi, p.b);
    return hi;
}

bool RadonMeasure::density_covers(double a, double b, double eps) const {
    if (!(a < b)) throw std::invalid_argument("radon: coverage interval needs a < b");
    double pos = a;
    for (const DensityPiece& p : pieces_) {
        if (p.b <= pos) continue;
        if (p.a > pos + 1e-12) return false;  // gap
        if (p.value < eps) return false;
        pos = p.b;
        if (pos >= b) return true;
    }
    return pos >= b;
}

}  // namespace riskorder
