#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace riskorder {

// Value tolerance used when merging atoms at construction time. Set once
// here; probabilities are normalized at construction and never touched after.
inline constexpr double kAtomMergeTol = 1e-12;
inline constexpr double kProbTol = 1e-12;

/// Finite discrete distribution with strictly increasing support and positive
/// probabilities summing to one. All risk measures and order checks in this
/// library are exact (closed-form) on this class.
class DiscreteDistribution {
public:
    // Normalizing constructor: merges duplicate values (within kAtomMergeTol),
    // drops zero weights, normalizes weights to probabilities, sorts support.
    // Throws std::invalid_argument on empty input, negative weights,
    // non-finite values, or all-zero weights.
    DiscreteDistribution(std::vector<double> values, std::vector<double> weights);

    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return support_.size(); }

    double min_support() const { return support_.front(); }
    double max_support() const { return support_.back(); }

    // Right-continuous distribution function and its complement.
    double cdf(double x) const;
    double survival(double x) const { return 1.0 - cdf(x); }

    // Left-continuous inverse: smallest x with cdf(x) >= p. p in (0,1].
    double quantile_left(double p) const;
    // Sup-form inverse: sup{x : cdf(x) <= p}. p in [0,1).
    double quantile_right(double p) const;

    double mean() const { return mean_; }
    double raw_moment(int k) const;

    // E[(X-d)+] and E[(d-X)+], exact compensated sums.
    double stop_loss(double d) const;
    double lower_stop_loss(double d) const;

    // Tail value-at-risk: average of quantile_left over (p,1], by exact
    // piecewise integration of the quantile step function. p in [0,1);
    // tvar(0) == mean by convention.
    double tvar(double p) const;

    // Cumulative probabilities C_i = P(X <= support_[i]); C_{n-1} ~= 1.
    const std::vector<double>& cumulative() const { return cum_; }

private:
    std::vector<double> support_;
    std::vector<double> probs_;
    std::vector<double> cum_;
    double mean_ = 0.0;
};

DiscreteDistribution make_discrete(std::vector<double> values, std::vector<double> weights);

// Empirical distribution from raw samples: equal weights, duplicates merged.
DiscreteDistribution from_samples(std::span<const double> xs);

DiscreteDistribution degenerate_at(double c);

/// Finite n-dimensional discrete distribution: distinct points with positive
/// probabilities summing to one. Houses the random vectors compared under the
/// supermodular order, and the couplings whose sums are studied.
class JointDiscreteDistribution {
public:
    // Merges duplicate points (componentwise within kAtomMergeTol), drops zero
    // weights, normalizes. Points are sorted lexicographically.
    JointDiscreteDistribution(std::size_t dim, std::vector<std::vector<double>> points,
                              std::vector<double> weights);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<std::vector<double>>& points() const { return points_; }
    const std::vector<double>& probs() const { return probs_; }

    // Joint distribution function P(X_1 <= x_1, ..., X_n <= x_n).
    double cdf(std::span<const double> x) const;

    DiscreteDistribution marginal(std::size_t k) const;

private:
    std::size_t dim_;
    std::vector<std::vector<double>> points_;
    std::vector<double> probs_;
};

JointDiscreteDistribution make_joint(std::size_t dim, std::vector<std::vector<double>> points,
                                     std::vector<double> weights);

// Pushforward of the joint mass under coordinate sum; nearby sums merge.
DiscreteDistribution distribution_of_sum(const JointDiscreteDistribution& j);

// Exact discrete convolution of independent marginals.
DiscreteDistribution independent_sum(std::span<const DiscreteDistribution> ds);

// Product coupling of the marginals (test-fixture plumbing).
JointDiscreteDistribution independent_joint(std::span<const DiscreteDistribution> ds);

// Equality atom-by-atom within the given tolerances.
bool distributions_equal(const DiscreteDistribution& a, const DiscreteDistribution& b,
                         double value_tol = kAtomMergeTol, double prob_tol = kProbTol);

bool joints_equal(const JointDiscreteDistribution& a, const JointDiscreteDistribution& b,
                  double value_tol = kAtomMergeTol, double prob_tol = kProbTol);

// sup_x |F_a(x) - F_b(x)|, evaluated on the union of supports (where the sup
// of two step functions is attained).
double sup_cdf_distance(const DiscreteDistribution& a, const DiscreteDistribution& b);

}  // namespace riskorder
