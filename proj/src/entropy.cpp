#include "cie/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cie {

namespace {

double plogp_nats(double p) {
    return p > 0.0 ? -p * std::log(p) : 0.0;
}

} // namespace

double shannon_entropy(std::span<const double> probs, Unit unit) {
    if (probs.empty())
        throw std::invalid_argument("shannon_entropy: empty probability vector");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || p > 1.0)
            throw std::invalid_argument(
                "shannon_entropy: entry outside [0,1]: " + std::to_string(p));
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument(
            "shannon_entropy: entries sum to " + std::to_string(sum) +
            ", expected 1 within 1e-9");
    double h = 0.0;
    for (double p : probs) h += plogp_nats(p);
    return from_nats(h, unit);
}

double bernoulli_entropy(double p, Unit unit) {
    if (!(p >= 0.0) || p > 1.0)
        throw std::invalid_argument("bernoulli_entropy: p outside [0,1]: " +
                                    std::to_string(p));
    return from_nats(plogp_nats(p) + plogp_nats(1.0 - p), unit);
}

double state_surprisal(double p_state) {
    if (!(p_state > 0.0) || p_state > 1.0)
        throw std::invalid_argument("state_surprisal: p outside (0,1]: " +
                                    std::to_string(p_state));
    return -p_state * std::log(p_state);
}

DiffEntropy differential_entropy_gaussian_fit(
    const std::vector<std::vector<double>>& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument(
            "differential_entropy_gaussian_fit: need at least 2 samples");
    const std::size_t dim = samples.front().size();
    if (dim == 0)
        throw std::invalid_argument(
            "differential_entropy_gaussian_fit: zero-dimensional samples");
    for (const auto& s : samples)
        if (s.size() != dim)
            throw std::invalid_argument(
                "differential_entropy_gaussian_fit: mixed sample dimensions");

    const double n = static_cast<double>(samples.size());
    DiffEntropy out;
    for (std::size_t d = 0; d < dim; ++d) {
        double mean = 0.0;
        for (const auto& s : samples) mean += s[d];
        mean /= n;
        double ss = 0.0;
        for (const auto& s : samples) {
            const double dv = s[d] - mean;
            ss += dv * dv;
        }
        const double var = ss / (n - 1.0);
        if (var <= 0.0) {
            out.degenerate = true;
            out.nats = -std::numeric_limits<double>::infinity();
            return out;
        }
        // 0.5 * ln(2*pi*e*var)
        out.nats += 0.5 * std::log(2.0 * 3.14159265358979323846 *
                                   2.71828182845904523536 * var);
    }
    return out;
}

DiffEntropy differential_entropy_gaussian_fit(std::span<const double> samples) {
    std::vector<std::vector<double>> rows;
    rows.reserve(samples.size());
    for (double v : samples) rows.push_back({v});
    return differential_entropy_gaussian_fit(rows);
}

double cie_total(const CieTerms& terms) {
    if (terms.c.size() != terms.object_entropies.size())
        throw std::invalid_argument(
            "cie_total: coefficient list c does not align with object entropies");
    if (terms.d.size() != terms.coupling_entropies.size())
        throw std::invalid_argument(
            "cie_total: coefficient list d does not align with coupling entropies");
    // zero-coefficient terms are excluded outright so they contribute exactly
    // zero even when the entropy is the -inf sentinel
    double total = 0.0;
    for (std::size_t i = 0; i < terms.c.size(); ++i)
        if (terms.c[i] != 0.0) total += terms.c[i] * terms.object_entropies[i].second;
    for (std::size_t i = 0; i < terms.d.size(); ++i)
        if (terms.d[i] != 0.0) total += terms.d[i] * terms.coupling_entropies[i].second;
    return total;
}

} // namespace cie
