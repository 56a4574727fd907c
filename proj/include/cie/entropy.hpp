#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

// Entropy primitives shared by every other component: discrete Shannon
// entropy, Bernoulli edge entropy, a Gaussian-fit differential entropy
// estimator, per-state surprisal, and the weighted complex-information-entropy
// (CIE) total. All internal math is in nats; the unit flag converts at the
// boundary.

namespace cie {

enum class Unit { bits, nats };

inline constexpr double kLn2 = 0.6931471805599453094;

// scale a natural-log entropy to the requested unit
inline double from_nats(double nats, Unit unit) {
    return unit == Unit::nats ? nats : nats / kLn2;
}

inline double to_nats(double value, Unit unit) {
    return unit == Unit::nats ? value : value * kLn2;
}

// -sum p_i log p_i over a probability vector. Entries must be in [0,1] and
// sum to 1 within 1e-9; zero entries contribute zero. Throws
// std::invalid_argument otherwise.
double shannon_entropy(std::span<const double> probs, Unit unit);

// binary entropy -p log p - (1-p) log(1-p); exactly 0 at p in {0,1}
double bernoulli_entropy(double p, Unit unit);

// -p_s ln p_s for p_s in (0,1]; zero probability signals an unmodeled state
// and is rejected
double state_surprisal(double p_state);

struct DiffEntropy {
    double nats = 0.0;
    // true when some dimension had zero sample variance; nats is then -inf
    bool degenerate = false;
};

// Gaussian moment fit of a continuous density: sum over dimensions of
// 0.5*ln(2*pi*e*sigma_d^2) with sigma_d the unbiased sample standard
// deviation. Requires >= 2 samples, all of the same dimension d >= 1.
DiffEntropy differential_entropy_gaussian_fit(
    const std::vector<std::vector<double>>& samples);

// convenience for 1-D sample sets
DiffEntropy differential_entropy_gaussian_fit(std::span<const double> samples);

// Terms of the CIE sum: per-object self entropies H(A_i) with coefficients
// c_i, and pairwise coupling entropies H(B_ij) with coefficients d_ij.
// Coefficient lists align one-to-one with the entropy lists.
struct CieTerms {
    std::vector<std::pair<std::string, double>> object_entropies;
    std::vector<std::pair<std::string, double>> coupling_entropies;
    std::vector<double> c;
    std::vector<double> d;
    Unit unit = Unit::nats;
};

// sum c_i H(A_i) + sum d_ij H(B_ij). Callers realize the recursive reading
// by supplying H(A_i) values that are themselves cie_total results.
double cie_total(const CieTerms& terms);

} // namespace cie
