#include "riskorder/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riskorder/numerics.hpp"

namespace riskorder {

namespace {

struct Atom {
    double value;
    double weight;
};

// Canonical merge: sort by (value, weight), group values within tolerance of
// the group anchor, accumulate weights in sorted order. Input order never
// affects the result, so identical atom multisets produce bit-identical
// distributions.
std::vector<Atom> merge_atoms(std::vector<Atom> atoms, double tol) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.weight < b.weight;
    });
    std::vector<Atom> merged;
    std::size_t i = 0;
    while (i < atoms.size()) {
        double anchor = atoms[i].value;
        CompensatedSum w;
        std::size_t j = i;
        while (j < atoms.size() && atoms[j].value - anchor <= tol) {
            w.add(atoms[j].weight);
            ++j;
        }
        if (w.value() > 0.0) merged.push_back({anchor, w.value()});
        i = j;
    }
    return merged;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> values,
                                           std::vector<double> weights) {
    if (values.size() != weights.size())
        throw std::invalid_argument("discrete: values/weights length mismatch");
    if (values.empty()) throw std::invalid_argument("discrete: empty input");

    std::vector<Atom> atoms;
    atoms.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw std::invalid_argument("discrete: non-finite value");
        if (!std::isfinite(weights[i]) || weights[i] < 0.0)
            throw std::invalid_argument("discrete: negative or non-finite weight");
        atoms.push_back({values[i], weights[i]});
    }
    atoms = merge_atoms(std::move(atoms), kAtomMergeTol);
    if (atoms.empty()) throw std::invalid_argument("discrete: all weights zero");

    CompensatedSum total;
    for (const Atom& a : atoms) total.add(a.weight);
    const double w = total.value();

    support_.reserve(atoms.size());
    probs_.reserve(atoms.size());
    cum_.reserve(atoms.size());
    CompensatedSum cum;
    CompensatedSum mean;
    for (const Atom& a : atoms) {
        double p = a.weight / w;
        support_.push_back(a.value);
        probs_.push_back(p);
        cum.add(p);
        cum_.push_back(cum.value());
        mean.add(a.value * p);
    }
    mean_ = mean.value();
}

double DiscreteDistribution::cdf(double x) const {
    if (!std::isfinite(x)) throw std::invalid_argument("cdf: non-finite argument");
    auto it = std::upper_bound(support_.begin(), support_.end(), x);
    if (it == support_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

double DiscreteDistribution::quantile_left(double p) const {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("quantile_left: p outside (0,1]");
    auto it = std::lower_bound(cum_.begin(), cum_.end(), p);
    if (it == cum_.end()) return support_.back();  // float deficit near p = 1
    return support_[static_cast<std::size_t>(it - cum_.begin())];
}

double DiscreteDistribution::quantile_right(double p) const {
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("quantile_right: p outside [0,1)");
    // sup{x : F(x) <= p} = first support point whose cumulative exceeds p.
    auto it = std::upper_bound(cum_.begin(), cum_.end(), p);
    if (it == cum_.end()) return support_.back();
    return support_[static_cast<std::size_t>(it - cum_.begin())];
}

double DiscreteDistribution::raw_moment(int k) const {
    if (k < 1) throw std::invalid_argument("raw_moment: k must be positive");
    CompensatedSum acc;
    for (std::size_t i = 0; i < support_.size(); ++i)
        acc.add(std::pow(support_[i], k) * probs_[i]);
    return acc.value();
}

double DiscreteDistribution::stop_loss(double d) const {
    if (!std::isfinite(d)) throw std::invalid_argument("stop_loss: non-finite retention");
    CompensatedSum acc;
    for (std::size_t i = 0; i < support_.size(); ++i)
        if (support_[i] > d) acc.add((support_[i] - d) * probs_[i]);
    return acc.value();
}

double DiscreteDistribution::lower_stop_loss(double d) const {
    if (!std::isfinite(d)) throw std::invalid_argument("lower_stop_loss: non-finite retention");
    CompensatedSum acc;
    for (std::size_t i = 0; i < support_.size(); ++i)
        if (support_[i] < d) acc.add((d - support_[i]) * probs_[i]);
    return acc.value();
}

double DiscreteDistribution::tvar(double p) const {
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("tvar: p outside [0,1)");
    if (p == 0.0) return mean_;  // full-tail average
    // Integrate the quantile step function over (p,1]: the quantile equals
    // support_[i] on the cumulative segment (C_{i-1}, C_i]; the last segment
    // end is taken as exactly 1.
    CompensatedSum acc;
    double lo = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        double hi = (i + 1 == support_.size()) ? 1.0 : cum_[i];
        double a = std::max(lo, p);
        if (hi > a) acc.add(support_[i] * (hi - a));
        lo = hi;
    }
    return acc.value() / (1.0 - p);
}

DiscreteDistribution make_discrete(std::vector<double> values, std::vector<double> weights) {
    return DiscreteDistribution(std::move(values), std::move(weights));
}

DiscreteDistribution from_samples(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("from_samples: empty sample");
    std::vector<double> values(xs.begin(), xs.end());
    std::vector<double> weights(xs.size(), 1.0);
    return DiscreteDistribution(std::move(values), std::move(weights));
}

DiscreteDistribution degenerate_at(double c) { return DiscreteDistribution({c}, {1.0}); }

JointDiscreteDistribution::JointDiscreteDistribution(std::size_t dim,
                                                     std::vector<std::vector<double>> points,
                                                     std::vector<double> weights)
    : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("joint: dimension must be positive");
    if (points.size() != weights.size())
        throw std::invalid_argument("joint: points/weights length mismatch");
    if (points.empty()) throw std::invalid_argument("joint: empty input");

    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim) throw std::invalid_argument("joint: point arity mismatch");
        for (double v : points[i])
            if (!std::isfinite(v)) throw std::invalid_argument("joint: non-finite coordinate");
        if (!std::isfinite(weights[i]) || weights[i] < 0.0)
            throw std::invalid_argument("joint: negative or non-finite weight");
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (points[a] != points[b]) return points[a] < points[b];
        return weights[a] < weights[b];
    });

    auto same_point = [&](const std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t k = 0; k < dim_; ++k)
            if (std::abs(a[k] - b[k]) > kAtomMergeTol) return false;
        return true;
    };

    std::vector<std::vector<double>> merged_pts;
    std::vector<double> merged_w;
    std::size_t i = 0;
    while (i < idx.size()) {
        const std::vector<double>& anchor = points[idx[i]];
        CompensatedSum w;
        std::size_t j = i;
        while (j < idx.size() && same_point(anchor, points[idx[j]])) {
            w.add(weights[idx[j]]);
            ++j;
        }
        if (w.value() > 0.0) {
            merged_pts.push_back(anchor);
            merged_w.push_back(w.value());
        }
        i = j;
    }
    if (merged_pts.empty()) throw std::invalid_argument("joint: all weights zero");

    CompensatedSum total;
    for (double w : merged_w) total.add(w);
    points_ = std::move(merged_pts);
    probs_.reserve(merged_w.size());
    for (double w : merged_w) probs_.push_back(w / total.value());
}

double JointDiscreteDistribution::cdf(std::span<const double> x) const {
    if (x.size() != dim_) throw std::invalid_argument("joint cdf: arity mismatch");
    CompensatedSum acc;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        bool below = true;
        for (std::size_t k = 0; k < dim_; ++k)
            if (points_[i][k] > x[k]) {
                below = false;
                break;
            }
        if (below) acc.add(probs_[i]);
    }
    return acc.value();
}

DiscreteDistribution JointDiscreteDistribution::marginal(std::size_t k) const {
    if (k >= dim_) throw std::invalid_argument("marginal: coordinate out of range");
    std::vector<double> values;
    values.reserve(points_.size());
    for (const auto& pt : points_) values.push_back(pt[k]);
    return DiscreteDistribution(std::move(values), probs_);
}

JointDiscreteDistribution make_joint(std::size_t dim, std::vector<std::vector<double>> points,
                                     std::vector<double> weights) {
    return JointDiscreteDistribution(dim, std::move(points), std::move(weights));
}

DiscreteDistribution distribution_of_sum(const JointDiscreteDistribution& j) {
    std::vector<double> sums;
    sums.reserve(j.size());
    for (const auto& pt : j.points()) {
        CompensatedSum s;
        for (double v : pt) s.add(v);
        sums.push_back(s.value());
    }
    return DiscreteDistribution(std::move(sums), j.probs());
}

DiscreteDistribution independent_sum(std::span<const DiscreteDistribution> ds) {
    if (ds.empty()) throw std::invalid_argument("independent_sum: no marginals");
    DiscreteDistribution acc = degenerate_at(0.0);
    for (const DiscreteDistribution& d : ds) {
        std::vector<double> values;
        std::vector<double> weights;
        values.reserve(acc.size() * d.size());
        weights.reserve(acc.size() * d.size());
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t k = 0; k < d.size(); ++k) {
                values.push_back(acc.support()[i] + d.support()[k]);
                weights.push_back(acc.probs()[i] * d.probs()[k]);
            }
        acc = DiscreteDistribution(std::move(values), std::move(weights));
    }
    return acc;
}

JointDiscreteDistribution independent_joint(std::span<const DiscreteDistribution> ds) {
    if (ds.empty()) throw std::invalid_argument("independent_joint: no marginals");
    std::vector<std::vector<double>> points{{}};
    std::vector<double> weights{1.0};
    for (const DiscreteDistribution& d : ds) {
        std::vector<std::vector<double>> next_points;
        std::vector<double> next_weights;
        next_points.reserve(points.size() * d.size());
        next_weights.reserve(points.size() * d.size());
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t k = 0; k < d.size(); ++k) {
                auto pt = points[i];
                pt.push_back(d.support()[k]);
                next_points.push_back(std::move(pt));
                next_weights.push_back(weights[i] * d.probs()[k]);
            }
        points = std::move(next_points);
        weights = std::move(next_weights);
    }
    return JointDiscreteDistribution(ds.size(), std::move(points), std::move(weights));
}

bool distributions_equal(const DiscreteDistribution& a, const DiscreteDistribution& b,
                         double value_tol, double prob_tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a.support()[i] - b.support()[i]) > value_tol) return false;
        if (std::abs(a.probs()[i] - b.probs()[i]) > prob_tol) return false;
    }
    return true;
}

bool joints_equal(const JointDiscreteDistribution& a, const JointDiscreteDistribution& b,
                  double value_tol, double prob_tol) {
    if (a.dim() != b.dim() || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < a.dim(); ++k)
            if (std::abs(a.points()[i][k] - b.points()[i][k]) > value_tol) return false;
        if (std::abs(a.probs()[i] - b.probs()[i]) > prob_tol) return false;
    }
    return true;
}

double sup_cdf_distance(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    std::vector<double> grid = a.support();
    grid.insert(grid.end(), b.support().begin(), b.support().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    double dist = 0.0;
    for (double x : grid) dist = std::max(dist, std::abs(a.cdf(x) - b.cdf(x)));
    return dist;
}

}  // namespace riskorder
