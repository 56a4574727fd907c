#pragma once

#include "cie/entropy.hpp"
#include "cie/world.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Hidden-object discovery over trajectory data: annealed hard-EM splitting
// into affine motion-law approximators, max-error seeding of new objects,
// growth with an accept/reject gate, pairwise unification, transition
// (affordance) statistics, CIE scoring of the learned system, and a Bellman
// value trace over boundary moves.

namespace cie::infer {

struct InferenceConfig {
    double min_improvement = 0.05; // relative loss decrease to accept a new object
    int max_objects = 8;
    int max_anneal_iters = 100;
    double seed_fraction = 0.2;    // top-residual fraction seeding a new object
    double temperature0 = 0.0;     // 0 = deterministic hard EM
    double cooling_alpha = 0.95;
    double unify_tolerance = 0.01; // relative loss increase allowed by a merge
    double gamma = 1.1;            // Bellman factor
    // Mean-squared-residual resolution floor: once the model explains the
    // data to this precision, relative-improvement tests are numerical noise
    // and growth proposals are rejected.
    double loss_floor = 1e-12;
    std::uint64_t seed = 0;
    enum class Criterion { loss, cie };
    Criterion criterion = Criterion::loss;
    bool bellman_driver = false;   // drive annealing by CIE-valued moves
    int recursion_depth = 1;       // per-object sub-structure search depth
    double eps_v = 1e-8;
    int min_fit_size = 6;

    void validate() const;
};

// Trajectory rows mapped to regression form: features (1, vx/|v|, vy/|v|),
// target acc / a_mag_hat. Rows with |v| <= eps_v are excluded (the feature
// map is undefined there) and counted.
struct Dataset {
    std::vector<std::array<double, 3>> features;
    std::vector<std::array<double, 2>> targets;
    std::vector<world::Vec2> positions; // carried through for reports/plots
    std::vector<int> region_true;       // ground truth when known, else 0
    std::vector<int> sample_t;          // original time index per row
    double a_mag_hat = 1.0;             // mean |acc| over the input samples
    std::size_t n_excluded = 0;

    std::size_t size() const { return features.size(); }
};

struct FeaturizedSample {
    std::array<double, 3> features{};
    std::array<double, 2> target{};
    bool excluded = false;
};

FeaturizedSample featurize(const world::StateSample& sample, double a_mag_hat,
                           double eps_v = 1e-8);
Dataset featurize(const world::Trajectory& traj, double eps_v = 1e-8);

// affine map from (1, vhat_x, vhat_y) to a predicted unit acceleration
struct ObjectModel {
    std::array<std::array<double, 3>, 2> weights{};
    int n_points = 0;
    double sse = 0.0;
    std::array<double, 2> residual_sigma{};
    bool ridge_fallback = false;

    std::array<double, 2> predict(const std::array<double, 3>& f) const {
        return {weights[0][0] * f[0] + weights[0][1] * f[1] + weights[0][2] * f[2],
                weights[1][0] * f[0] + weights[1][1] * f[1] + weights[1][2] * f[2]};
    }
};

// Ordinary least squares of targets on features over the given rows. Falls
// back to a small ridge (lambda = 1e-8) when the normal equations are rank
// deficient, and records that in the model.
ObjectModel fit_object(const Dataset& data, std::span<const std::int32_t> rows);
ObjectModel fit_object(const Dataset& data); // all rows

struct TraceEvent {
    int iteration = 0;
    double loss = 0.0;
    double c_value = 0.0; // recorded Bellman value C_i
    std::string description;
};

struct SystemModel {
    std::vector<ObjectModel> objects;
    std::vector<std::int32_t> assignment;            // per dataset row
    std::vector<std::vector<int>> transition_counts; // k x k, time-adjacent rows
    double a_mag_hat = 1.0;
    double loss = 0.0; // mean squared residual per row

    int k() const { return static_cast<int>(objects.size()); }
};

struct CieReport {
    std::vector<double> per_object_H;   // nats; -inf when degenerate
    std::vector<char> degenerate;       // per object
    std::vector<std::array<int, 2>> affordance_pairs;
    std::vector<double> affordance_H;   // bits, aligned with affordance_pairs
    std::vector<double> c, d;
    double total = 0.0;                 // nats
    bool total_degenerate = false;
    std::vector<TraceEvent> bellman_trace;
};

// Hard-EM annealing: repeat (assign each row to the best model, refit every
// model) until assignments stop changing, the loss change is < 1e-9
// relative, or max_anneal_iters. temperature0 > 0 enables Metropolis flips
// with schedule T_k = T0 * alpha^k. Objects that fall under min_fit_size
// points are dropped (recorded in the trace).
SystemModel anneal(const Dataset& data, std::vector<std::int32_t> assignment,
                   const InferenceConfig& cfg,
                   std::vector<TraceEvent>* trace = nullptr);

// Random initial split into k_models subsets, then anneal.
SystemModel anneal_split(const Dataset& data, int k_models,
                         const InferenceConfig& cfg,
                         std::vector<TraceEvent>* trace = nullptr);

// Reassign the seed_fraction of rows with the largest residuals to a new
// object and fit it; annealing resumes from the returned model.
SystemModel seed_new_object(const Dataset& data, const SystemModel& model,
                            const InferenceConfig& cfg);

struct CandidateRecord {
    std::string description;
    int k = 0;
    double loss = 0.0;
    double cie = 0.0;
    bool accepted = false;
};

struct GrowthResult {
    SystemModel model;
    std::vector<CandidateRecord> candidates; // every proposal, kept per the
                                             // overinterpretation reading
    std::vector<TraceEvent> trace;
};

// k = 1 baseline, then propose k+1 objects (seed + anneal) until a proposal
// fails the accept test or max_objects is reached.
GrowthResult grow(const Dataset& data, const InferenceConfig& cfg);

// Merge object pairs whose union fit costs at most unify_tolerance relative
// loss increase; re-anneals after each merge and repeats until stable.
SystemModel try_unify(const Dataset& data, SystemModel model,
                      const InferenceConfig& cfg,
                      std::vector<TraceEvent>* trace = nullptr,
                      std::vector<CandidateRecord>* candidates = nullptr);

struct StructureResult {
    SystemModel model;
    CieReport report;
    std::vector<CandidateRecord> ledger; // all candidates with their scores
    std::vector<TraceEvent> trace;
    std::vector<int> sub_object_counts;  // depth-1 recursion result per object
    bool shuffled_input = false;         // no time-adjacent rows: empty affordances
};

// Full outer loop: grow, Pareto verification of each object (its removal
// must worsen the loss beyond tolerance), unification, per-object recursive
// growth (depth 1), affordance graph building and pruning; repeats until a
// pass changes nothing.
StructureResult structure_learning_loop(const Dataset& data,
                                        const InferenceConfig& cfg);

// H(A_i) = Gaussian differential entropy of object i's residuals (nats);
// H(B_ij) = Shannon entropy of the normalized transition mass on the pair
// (i,j)+(j,i) (bits); total = sum c_i H(A_i) + sum d_ij H(B_ij) in nats.
// Empty c/d spans mean all-ones.
CieReport cie_of_model(const Dataset& data, const SystemModel& model,
                       std::span<const double> c = {},
                       std::span<const double> d = {});

struct BellmanChoice {
    int chosen_move = 0; // index into candidate_c
    double c_next = 0.0;
};

// One step of the value update C_{i+1} = min_a [R(s,a,s') + gamma * C_i(s')]
// with R = C(s_a) - C(s'). candidate_c holds C(s_a) for each move (callers
// include "stay" as a candidate equal to c_state_prev). Ties pick the
// lowest index.
BellmanChoice bellman_update(double c_recorded_prev, double c_state_prev,
                             std::span<const double> candidate_c, double gamma);

// model JSON: objects / assignment / transitions / cie / trace
std::string model_to_json(const SystemModel& model, const CieReport& report);

} // namespace cie::infer
