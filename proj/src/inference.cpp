#include "cie/inference.hpp"

#include "cie/kernels.hpp"
#include "cie/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cie::infer {

namespace {

constexpr int kMinFitSizeDefault = 6;
constexpr double kRidgeLambda = 1e-8;

// solve the symmetric 3x3 system A x = b by Cholesky; returns false when a
// pivot collapses (rank-deficient normal equations)
bool solve3(const double A[3][3], const double b[3], double x[3]) {
    const double scale = std::abs(A[0][0]) + std::abs(A[1][1]) + std::abs(A[2][2]);
    const double eps = 1e-12 * (scale > 0.0 ? scale : 1.0);
    double L[3][3] = {};
    double d = A[0][0];
    if (d <= eps) return false;
    L[0][0] = std::sqrt(d);
    L[1][0] = A[1][0] / L[0][0];
    L[2][0] = A[2][0] / L[0][0];
    d = A[1][1] - L[1][0] * L[1][0];
    if (d <= eps) return false;
    L[1][1] = std::sqrt(d);
    L[2][1] = (A[2][1] - L[2][0] * L[1][0]) / L[1][1];
    d = A[2][2] - L[2][0] * L[2][0] - L[2][1] * L[2][1];
    if (d <= eps) return false;
    L[2][2] = std::sqrt(d);

    // forward: L y = b
    double y0 = b[0] / L[0][0];
    double y1 = (b[1] - L[1][0] * y0) / L[1][1];
    double y2 = (b[2] - L[2][0] * y0 - L[2][1] * y1) / L[2][2];
    // back: L^T x = y
    x[2] = y2 / L[2][2];
    x[1] = (y1 - L[2][1] * x[2]) / L[1][1];
    x[0] = (y0 - L[1][0] * x[1] - L[2][0] * x[2]) / L[0][0];
    return true;
}

// least squares over any subset size >= 1; ridge fallback on rank deficiency
ObjectModel fit_rows(const Dataset& data, std::span<const std::int32_t> rows) {
    if (rows.empty())
        throw std::invalid_argument("fit: no rows to fit");

    double A[3][3] = {};
    double B[2][3] = {};
    for (std::int32_t r : rows) {
        const auto& f = data.features[static_cast<std::size_t>(r)];
        const auto& y = data.targets[static_cast<std::size_t>(r)];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) A[i][j] += f[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(j)];
            B[0][i] += y[0] * f[static_cast<std::size_t>(i)];
            B[1][i] += y[1] * f[static_cast<std::size_t>(i)];
        }
    }

    ObjectModel model;
    model.n_points = static_cast<int>(rows.size());
    double x[3];
    bool ok = true;
    for (int out = 0; out < 2 && ok; ++out)
        ok = solve3(A, B[static_cast<std::size_t>(out)], x);
    if (!ok) {
        for (int i = 0; i < 3; ++i) A[i][i] += kRidgeLambda;
        model.ridge_fallback = true;
    }
    for (int out = 0; out < 2; ++out) {
        if (!solve3(A, B[static_cast<std::size_t>(out)], x))
            throw std::runtime_error("fit: normal equations unsolvable even with ridge");
        model.weights[static_cast<std::size_t>(out)] = {x[0], x[1], x[2]};
    }

    double sse = 0.0;
    double mean[2] = {0.0, 0.0};
    std::vector<std::array<double, 2>> resid;
    resid.reserve(rows.size());
    for (std::int32_t r : rows) {
        const auto pred = model.predict(data.features[static_cast<std::size_t>(r)]);
        const auto& y = data.targets[static_cast<std::size_t>(r)];
        const std::array<double, 2> e{y[0] - pred[0], y[1] - pred[1]};
        sse += e[0] * e[0] + e[1] * e[1];
        mean[0] += e[0];
        mean[1] += e[1];
        resid.push_back(e);
    }
    model.sse = sse;
    const double m = static_cast<double>(rows.size());
    if (rows.size() >= 2) {
        mean[0] /= m;
        mean[1] /= m;
        double ss[2] = {0.0, 0.0};
        for (const auto& e : resid) {
            ss[0] += (e[0] - mean[0]) * (e[0] - mean[0]);
            ss[1] += (e[1] - mean[1]) * (e[1] - mean[1]);
        }
        model.residual_sigma = {std::sqrt(ss[0] / (m - 1.0)),
                                std::sqrt(ss[1] / (m - 1.0))};
    }
    return model;
}

std::vector<std::vector<std::int32_t>> rows_per_object(
    const std::vector<std::int32_t>& assignment, int k) {
    std::vector<std::vector<std::int32_t>> rows(static_cast<std::size_t>(k));
    for (std::size_t r = 0; r < assignment.size(); ++r)
        rows[static_cast<std::size_t>(assignment[r])].push_back(
            static_cast<std::int32_t>(r));
    return rows;
}

// drop empty objects, compacting ids; returns true when anything was dropped
bool drop_empty(std::vector<std::int32_t>& assignment, int& k,
                std::vector<TraceEvent>* trace, int iteration) {
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (std::int32_t a : assignment) ++count[static_cast<std::size_t>(a)];
    std::vector<std::int32_t> remap(static_cast<std::size_t>(k), -1);
    int next = 0;
    bool dropped = false;
    for (int i = 0; i < k; ++i) {
        if (count[static_cast<std::size_t>(i)] > 0) {
            remap[static_cast<std::size_t>(i)] = next++;
        } else {
            dropped = true;
            if (trace)
                trace->push_back({iteration, 0.0, 0.0,
                                  "dropped empty object " + std::to_string(i)});
        }
    }
    if (!dropped) return false;
    for (auto& a : assignment) a = remap[static_cast<std::size_t>(a)];
    k = next;
    return true;
}

std::vector<double> flatten_weights(const std::vector<ObjectModel>& objects) {
    std::vector<double> w;
    w.reserve(objects.size() * 6);
    for (const ObjectModel& m : objects)
        for (const auto& row : m.weights)
            for (double v : row) w.push_back(v);
    return w;
}

std::vector<std::vector<int>> count_transitions(
    const Dataset& data, const std::vector<std::int32_t>& assignment, int k) {
    std::vector<std::vector<int>> counts(
        static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k), 0));
    for (std::size_t r = 0; r + 1 < assignment.size(); ++r)
        if (data.sample_t[r + 1] == data.sample_t[r] + 1)
            ++counts[static_cast<std::size_t>(assignment[r])]
                    [static_cast<std::size_t>(assignment[r + 1])];
    return counts;
}

double sq_residual(const ObjectModel& m, const std::array<double, 3>& f,
                   const std::array<double, 2>& y) {
    const auto p = m.predict(f);
    const double ex = y[0] - p[0], ey = y[1] - p[1];
    return ex * ex + ey * ey;
}

SystemModel finalize(const Dataset& data, std::vector<ObjectModel> objects,
                     std::vector<std::int32_t> assignment) {
    SystemModel model;
    model.a_mag_hat = data.a_mag_hat;
    double sse = 0.0;
    for (std::size_t r = 0; r < assignment.size(); ++r)
        sse += sq_residual(objects[static_cast<std::size_t>(assignment[r])],
                           data.features[r], data.targets[r]);
    model.loss = sse / static_cast<double>(data.size());
    model.transition_counts =
        count_transitions(data, assignment, static_cast<int>(objects.size()));
    model.objects = std::move(objects);
    model.assignment = std::move(assignment);
    return model;
}

double relative_change(double value, double reference, double floor) {
    return (value - reference) / std::max(reference, floor);
}

nlohmann::json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

void InferenceConfig::validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in_unit(min_improvement))
        throw std::invalid_argument("inference config: min_improvement must be in (0,1)");
    if (!(seed_fraction > 0.0) || seed_fraction > 1.0)
        throw std::invalid_argument("inference config: seed_fraction must be in (0,1]");
    if (!in_unit(unify_tolerance))
        throw std::invalid_argument("inference config: unify_tolerance must be in (0,1)");
    if (!(gamma > 0.0))
        throw std::invalid_argument("inference config: gamma must be > 0");
    if (max_objects < 1)
        throw std::invalid_argument("inference config: max_objects must be >= 1");
    if (max_anneal_iters < 1)
        throw std::invalid_argument("inference config: max_anneal_iters must be >= 1");
    if (min_fit_size < 3)
        throw std::invalid_argument("inference config: min_fit_size must be >= 3");
}

FeaturizedSample featurize(const world::StateSample& sample, double a_mag_hat,
                           double eps_v) {
    FeaturizedSample out;
    const double speed = sample.vel.norm();
    if (speed <= eps_v) {
        out.excluded = true;
        return out;
    }
    if (!(a_mag_hat > 0.0))
        throw std::invalid_argument("featurize: a_mag_hat must be > 0");
    out.features = {1.0, sample.vel.x / speed, sample.vel.y / speed};
    out.target = {sample.acc.x / a_mag_hat, sample.acc.y / a_mag_hat};
    return out;
}

Dataset featurize(const world::Trajectory& traj, double eps_v) {
    if (traj.samples.empty())
        throw std::invalid_argument("featurize: empty trajectory");
    double a_sum = 0.0;
    for (const auto& s : traj.samples) a_sum += s.acc.norm();
    const double a_mag_hat = a_sum / static_cast<double>(traj.samples.size());
    if (!(a_mag_hat > 0.0))
        throw std::invalid_argument(
            "featurize: acceleration magnitude is zero over the whole input");

    Dataset data;
    data.a_mag_hat = a_mag_hat;
    for (const auto& s : traj.samples) {
        const FeaturizedSample row = featurize(s, a_mag_hat, eps_v);
        if (row.excluded) {
            ++data.n_excluded;
            continue;
        }
        data.features.push_back(row.features);
        data.targets.push_back(row.target);
        data.positions.push_back(s.pos);
        data.region_true.push_back(s.region_true);
        data.sample_t.push_back(s.t);
    }
    if (data.features.empty())
        throw std::invalid_argument("featurize: no usable samples (all below eps_v)");
    return data;
}

ObjectModel fit_object(const Dataset& data, std::span<const std::int32_t> rows) {
    if (rows.size() < kMinFitSizeDefault)
        throw std::invalid_argument("fit_object: need at least " +
                                    std::to_string(kMinFitSizeDefault) +
                                    " samples, got " + std::to_string(rows.size()));
    return fit_rows(data, rows);
}

ObjectModel fit_object(const Dataset& data) {
    std::vector<std::int32_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), 0);
    return fit_object(data, rows);
}

BellmanChoice bellman_update(double c_recorded_prev, double c_state_prev,
                             std::span<const double> candidate_c, double gamma) {
    if (candidate_c.empty())
        throw std::invalid_argument("bellman_update: no candidate moves");
    BellmanChoice choice;
    double best_r = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < candidate_c.size(); ++a) {
        double r = candidate_c[a] - c_state_prev;
        if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
        if (r < best_r) {
            best_r = r;
            choice.chosen_move = static_cast<int>(a);
        }
    }
    if (!std::isfinite(best_r) && best_r > 0.0) best_r = 0.0; // all moves invalid: stay
    choice.c_next = best_r + gamma * c_recorded_prev;
    return choice;
}

SystemModel anneal(const Dataset& data, std::vector<std::int32_t> assignment,
                   const InferenceConfig& cfg, std::vector<TraceEvent>* trace) {
    cfg.validate();
    const int n = static_cast<int>(data.size());
    if (n == 0) throw std::invalid_argument("anneal: empty dataset");
    if (assignment.size() != data.size())
        throw std::invalid_argument("anneal: assignment does not cover the dataset");

    int k = 0;
    for (std::int32_t a : assignment) {
        if (a < 0) throw std::invalid_argument("anneal: negative object id");
        k = std::max(k, a + 1);
    }
    drop_empty(assignment, k, trace, 0);

    auto refit_all = [&](const std::vector<std::int32_t>& assign, int kk) {
        std::vector<ObjectModel> models;
        models.reserve(static_cast<std::size_t>(kk));
        for (auto& rows : rows_per_object(assign, kk))
            models.push_back(fit_rows(data, rows));
        return models;
    };

    std::vector<ObjectModel> models = refit_all(assignment, k);

    auto loss_of = [&](const std::vector<ObjectModel>& ms,
                       const std::vector<std::int32_t>& assign) {
        double sse = 0.0;
        for (std::size_t r = 0; r < assign.size(); ++r)
            sse += sq_residual(ms[static_cast<std::size_t>(assign[r])],
                               data.features[r], data.targets[r]);
        return sse / static_cast<double>(n);
    };

    auto cie_total_of = [&](const std::vector<ObjectModel>& ms,
                            const std::vector<std::int32_t>& assign) {
        const SystemModel snapshot = finalize(data, ms, assign);
        return cie_of_model(data, snapshot).total;
    };

    double loss = loss_of(models, assignment);
    double c_state = cie_total_of(models, assignment);
    double c_recorded = c_state;
    SplitMix64 rng(cfg.seed ^ 0x616e6e65616cULL);

    std::vector<std::int32_t> proposal(static_cast<std::size_t>(n));
    std::vector<double> sqres(static_cast<std::size_t>(n));

    for (int iter = 1; iter <= cfg.max_anneal_iters; ++iter) {
        const std::vector<double> w = flatten_weights(models);
        kernels::assign_step(data.features.front().data(),
                             data.targets.front().data(), w.data(), n, k,
                             proposal.data(), sqres.data());

        if (cfg.temperature0 > 0.0) {
            const double temp =
                cfg.temperature0 * std::pow(cfg.cooling_alpha, iter - 1);
            for (int r = 0; r < n; ++r) {
                const auto alt =
                    static_cast<std::int32_t>(rng.next_below(static_cast<std::uint64_t>(k)));
                if (alt == proposal[static_cast<std::size_t>(r)]) continue;
                const double delta =
                    sq_residual(models[static_cast<std::size_t>(alt)],
                                data.features[static_cast<std::size_t>(r)],
                                data.targets[static_cast<std::size_t>(r)]) -
                    sqres[static_cast<std::size_t>(r)];
                if (delta <= 0.0 || rng.next_double() < std::exp(-delta / temp))
                    proposal[static_cast<std::size_t>(r)] = alt;
            }
        }

        int n_changed = 0;
        for (int r = 0; r < n; ++r)
            if (proposal[static_cast<std::size_t>(r)] !=
                assignment[static_cast<std::size_t>(r)])
                ++n_changed;

        if (n_changed == 0) break;

        // candidate state: adopt the reassignment, drop emptied objects, refit
        std::vector<std::int32_t> cand_assign = proposal;
        int cand_k = k;
        const bool dropped = drop_empty(cand_assign, cand_k, trace, iter);
        std::vector<ObjectModel> cand_models = refit_all(cand_assign, cand_k);
        const double cand_loss = loss_of(cand_models, cand_assign);
        const double cand_c = cie_total_of(cand_models, cand_assign);

        if (cfg.bellman_driver) {
            // move 0 = stay, move 1 = the batch reassignment
            const double candidates[2] = {c_state, cand_c};
            const BellmanChoice choice =
                bellman_update(c_recorded, c_state, candidates, cfg.gamma);
            c_recorded = choice.c_next;
            if (choice.chosen_move == 0) {
                if (trace)
                    trace->push_back({iter, loss, c_recorded,
                                      "bellman: stay (no move lowers C)"});
                break;
            }
            if (trace)
                trace->push_back(
                    {iter, cand_loss, c_recorded,
                     "bellman: moved " + std::to_string(n_changed) + " rows"});
        } else {
            double r = cand_c - c_state;
            if (std::isnan(r)) r = 0.0;
            c_recorded = r + cfg.gamma * c_recorded;
            if (trace)
                trace->push_back(
                    {iter, cand_loss, c_recorded,
                     "anneal: reassigned " + std::to_string(n_changed) +
                         " rows" + (dropped ? ", dropped empty object(s)" : "")});
        }

        const double prev_loss = loss;
        assignment = std::move(cand_assign);
        models = std::move(cand_models);
        k = cand_k;
        loss = cand_loss;
        c_state = cand_c;

        if (std::abs(prev_loss - loss) <
            1e-9 * std::max({prev_loss, loss, 1e-300}))
            break;
        // at the resolution floor the remaining churn is OLS rounding noise
        if (loss <= cfg.loss_floor) break;
    }

    // post-convergence cleanup: objects below the minimum fit size cannot
    // stand as objects; fold them into the remaining models
    while (k > 1) {
        const auto rows = rows_per_object(assignment, k);
        int victim = -1;
        for (int i = 0; i < k; ++i)
            if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) <
                cfg.min_fit_size) {
                victim = i;
                break;
            }
        if (victim < 0) break;
        if (trace)
            trace->push_back({0, loss, c_recorded,
                              "folded undersized object " + std::to_string(victim)});
        std::vector<ObjectModel> kept;
        for (int i = 0; i < k; ++i)
            if (i != victim) kept.push_back(models[static_cast<std::size_t>(i)]);
        for (std::size_t r = 0; r < assignment.size(); ++r) {
            std::int32_t& a = assignment[r];
            if (a == victim) {
                std::int32_t best = 0;
                double best_r = 0.0;
                for (std::size_t m = 0; m < kept.size(); ++m) {
                    const double rr = sq_residual(kept[m], data.features[r],
                                                  data.targets[r]);
                    if (m == 0 || rr < best_r) {
                        best = static_cast<std::int32_t>(m);
                        best_r = rr;
                    }
                }
                a = best;
            } else if (a > victim) {
                --a;
            }
        }
        k = static_cast<int>(kept.size());
        models = refit_all(assignment, k);
        loss = loss_of(models, assignment);
    }

    return finalize(data, std::move(models), std::move(assignment));
}

SystemModel anneal_split(const Dataset& data, int k_models,
                         const InferenceConfig& cfg,
                         std::vector<TraceEvent>* trace) {
    if (k_models < 1)
        throw std::invalid_argument("anneal_split: k_models must be >= 1");
    std::vector<std::int32_t> assignment(data.size(), 0);
    if (k_models > 1) {
        SplitMix64 rng(cfg.seed ^ 0x73706c6974ULL);
        for (auto& a : assignment)
            a = static_cast<std::int32_t>(
                rng.next_below(static_cast<std::uint64_t>(k_models)));
    }
    return anneal(data, std::move(assignment), cfg, trace);
}

SystemModel seed_new_object(const Dataset& data, const SystemModel& model,
                            const InferenceConfig& cfg) {
    const std::size_t n = data.size();
    if (model.assignment.size() != n)
        throw std::invalid_argument("seed_new_object: model does not cover the dataset");

    std::vector<double> resid(n);
    for (std::size_t r = 0; r < n; ++r)
        resid[r] = sq_residual(
            model.objects[static_cast<std::size_t>(model.assignment[r])],
            data.features[r], data.targets[r]);

    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int32_t a, std::int32_t b) {
                         return resid[static_cast<std::size_t>(a)] >
                                resid[static_cast<std::size_t>(b)];
                     });

    std::size_t count = static_cast<std::size_t>(
        std::llround(cfg.seed_fraction * static_cast<double>(n)));
    count = std::clamp<std::size_t>(count, std::min<std::size_t>(
                                               static_cast<std::size_t>(cfg.min_fit_size), n),
                                    n);

    SystemModel seeded = model;
    const auto new_id = static_cast<std::int32_t>(model.k());
    std::vector<std::int32_t> seed_rows(order.begin(),
                                        order.begin() + static_cast<std::ptrdiff_t>(count));
    for (std::int32_t r : seed_rows) seeded.assignment[static_cast<std::size_t>(r)] = new_id;
    seeded.objects.push_back(fit_rows(data, seed_rows));
    return finalize(data, std::move(seeded.objects), std::move(seeded.assignment));
}

// Exploration follows the deduction loop: keep adding objects while the loss
// keeps improving meaningfully. The loss criterion returns the last accepted
// model of that chain; the cie criterion keeps every explored candidate and
// returns the one minimizing total C, the argmin reading of the
// Pareto-optimality equation (candidates "including those that are
// sub-optimal" stay on the ledger).
GrowthResult grow(const Dataset& data, const InferenceConfig& cfg) {
    cfg.validate();
    if (data.size() == 0) throw std::invalid_argument("grow: empty dataset");
    const bool by_cie = cfg.criterion == InferenceConfig::Criterion::cie;

    GrowthResult res;
    SystemModel explorer = anneal(
        data, std::vector<std::int32_t>(data.size(), 0), cfg, &res.trace);
    res.candidates.push_back({"baseline", explorer.k(), explorer.loss,
                              cie_of_model(data, explorer).total, true});

    SystemModel best_c_model = explorer;
    double best_c = res.candidates.back().cie;

    int proposals = 0;
    while (explorer.k() < cfg.max_objects && proposals < 4 * cfg.max_objects) {
        ++proposals;
        SystemModel seeded = seed_new_object(data, explorer, cfg);
        SystemModel proposal =
            anneal(data, std::move(seeded.assignment), cfg, &res.trace);
        const double c_prop = cie_of_model(data, proposal).total;

        bool loss_gate = false;
        std::string reason;
        if (explorer.loss <= cfg.loss_floor) {
            reason = "baseline at numerical loss floor; no improvement possible";
        } else {
            const double gain = (explorer.loss - proposal.loss) / explorer.loss;
            loss_gate = gain >= cfg.min_improvement;
            reason = "relative loss gain " + std::to_string(gain);
        }

        bool accepted = loss_gate;
        if (by_cie) {
            accepted = c_prop < best_c;
            reason += ", CIE " + std::to_string(best_c) + " -> " +
                      std::to_string(c_prop);
            if (accepted) {
                best_c = c_prop;
                best_c_model = proposal;
            }
        }
        res.candidates.push_back(
            {"grow to k=" + std::to_string(proposal.k()) + " (" + reason + ")",
             proposal.k(), proposal.loss, c_prop, accepted});
        res.trace.push_back({0, proposal.loss, 0.0,
                             std::string(accepted ? "accepted" : "rejected") +
                                 " growth proposal k=" + std::to_string(proposal.k())});
        if (!loss_gate) break;
        explorer = std::move(proposal);
    }

    res.model = by_cie ? std::move(best_c_model) : std::move(explorer);
    return res;
}

SystemModel try_unify(const Dataset& data, SystemModel model,
                      const InferenceConfig& cfg, std::vector<TraceEvent>* trace,
                      std::vector<CandidateRecord>* candidates) {
    cfg.validate();
    const double n = static_cast<double>(data.size());
    while (model.k() >= 2) {
        const int k = model.k();
        const auto rows = rows_per_object(model.assignment, k);

        int best_i = -1, best_j = -1;
        double best_rel = std::numeric_limits<double>::infinity();
        double best_loss = 0.0;
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                std::vector<std::int32_t> joint = rows[static_cast<std::size_t>(i)];
                joint.insert(joint.end(), rows[static_cast<std::size_t>(j)].begin(),
                             rows[static_cast<std::size_t>(j)].end());
                const ObjectModel merged = fit_rows(data, joint);
                const double new_sse =
                    model.loss * n -
                    model.objects[static_cast<std::size_t>(i)].sse -
                    model.objects[static_cast<std::size_t>(j)].sse + merged.sse;
                const double new_loss = new_sse / n;
                const double rel =
                    relative_change(new_loss, model.loss, cfg.loss_floor);
                if (rel < best_rel) {
                    best_rel = rel;
                    best_i = i;
                    best_j = j;
                    best_loss = new_loss;
                }
            }
        }

        const bool merge = best_rel <= cfg.unify_tolerance;
        if (candidates)
            candidates->push_back(
                {"unify objects " + std::to_string(best_i) + "+" +
                     std::to_string(best_j) + " (relative loss change " +
                     std::to_string(best_rel) + ")",
                 k - 1, best_loss, 0.0, merge});
        if (!merge) break;

        if (trace)
            trace->push_back({0, best_loss, 0.0,
                              "unified objects " + std::to_string(best_i) + " and " +
                                  std::to_string(best_j)});
        std::vector<std::int32_t> assignment = model.assignment;
        for (auto& a : assignment) {
            if (a == best_j)
                a = best_i;
            else if (a > best_j)
                --a;
        }
        model = anneal(data, std::move(assignment), cfg, trace);
    }
    return model;
}

StructureResult structure_learning_loop(const Dataset& data,
                                        const InferenceConfig& cfg) {
    cfg.validate();
    StructureResult res;

    GrowthResult growth = grow(data, cfg);
    res.ledger = std::move(growth.candidates);
    res.trace = std::move(growth.trace);
    res.model = std::move(growth.model);

    for (int pass = 1; pass <= 16; ++pass) {
        bool changed = false;

        // Pareto verification: an object earns its place only if removing it
        // worsens the loss beyond tolerance
        int i = 0;
        while (res.model.k() >= 2 && i < res.model.k()) {
            std::vector<std::int32_t> assignment = res.model.assignment;
            std::vector<ObjectModel> kept;
            for (int o = 0; o < res.model.k(); ++o)
                if (o != i)
                    kept.push_back(res.model.objects[static_cast<std::size_t>(o)]);
            for (std::size_t r = 0; r < assignment.size(); ++r) {
                if (assignment[r] == i) {
                    std::int32_t best = 0;
                    double best_r = 0.0;
                    for (std::size_t m = 0; m < kept.size(); ++m) {
                        const double rr =
                            sq_residual(kept[m], data.features[r], data.targets[r]);
                        if (m == 0 || rr < best_r) {
                            best = static_cast<std::int32_t>(m);
                            best_r = rr;
                        }
                    }
                    assignment[r] = best;
                } else if (assignment[r] > i) {
                    --assignment[r];
                }
            }
            SystemModel without =
                anneal(data, std::move(assignment), cfg, &res.trace);
            const double worsening =
                relative_change(without.loss, res.model.loss, cfg.loss_floor);
            const bool keep = worsening > cfg.min_improvement;
            res.ledger.push_back(
                {"occam: drop object " + std::to_string(i) +
                     " (relative loss change " + std::to_string(worsening) + ")",
                 without.k(), without.loss, cie_of_model(data, without).total,
                 !keep});
            if (!keep) {
                res.trace.push_back({0, without.loss, 0.0,
                                     "occam: removed redundant object " +
                                         std::to_string(i)});
                res.model = std::move(without);
                changed = true;
            } else {
                ++i;
            }
        }

        const int k_before = res.model.k();
        res.model = try_unify(data, std::move(res.model), cfg, &res.trace,
                              &res.ledger);
        if (res.model.k() != k_before) changed = true;

        if (!changed) break;
    }

    // depth-1 recursion: treat each object as its own system
    res.sub_object_counts.assign(static_cast<std::size_t>(res.model.k()), 1);
    if (cfg.recursion_depth > 0) {
        const auto rows = rows_per_object(res.model.assignment, res.model.k());
        for (int i = 0; i < res.model.k(); ++i) {
            const auto& obj_rows = rows[static_cast<std::size_t>(i)];
            if (static_cast<int>(obj_rows.size()) < 4 * cfg.min_fit_size) continue;
            Dataset sub;
            sub.a_mag_hat = data.a_mag_hat;
            for (std::int32_t r : obj_rows) {
                sub.features.push_back(data.features[static_cast<std::size_t>(r)]);
                sub.targets.push_back(data.targets[static_cast<std::size_t>(r)]);
                sub.positions.push_back(data.positions[static_cast<std::size_t>(r)]);
                sub.region_true.push_back(data.region_true[static_cast<std::size_t>(r)]);
                sub.sample_t.push_back(data.sample_t[static_cast<std::size_t>(r)]);
            }
            InferenceConfig sub_cfg = cfg;
            sub_cfg.recursion_depth = cfg.recursion_depth - 1;
            GrowthResult sub_growth = grow(sub, sub_cfg);
            res.sub_object_counts[static_cast<std::size_t>(i)] = sub_growth.model.k();
            res.ledger.push_back({"recursion inside object " + std::to_string(i),
                                  sub_growth.model.k(), sub_growth.model.loss,
                                  cie_of_model(sub, sub_growth.model).total,
                                  sub_growth.model.k() > 1});
        }
    }

    res.report = cie_of_model(data, res.model);
    res.report.bellman_trace = res.trace;

    int total_transitions = 0;
    for (const auto& row : res.model.transition_counts)
        for (int c : row) total_transitions += c;
    res.shuffled_input = data.size() > 1 && total_transitions == 0;
    return res;
}

CieReport cie_of_model(const Dataset& data, const SystemModel& model,
                       std::span<const double> c, std::span<const double> d) {
    const int k = model.k();
    if (k == 0) throw std::invalid_argument("cie_of_model: model has no objects");
    if (model.assignment.size() != data.size())
        throw std::invalid_argument("cie_of_model: model does not cover the dataset");

    CieReport report;
    const auto rows = rows_per_object(model.assignment, k);
    for (int i = 0; i < k; ++i) {
        std::vector<std::vector<double>> resid;
        resid.reserve(rows[static_cast<std::size_t>(i)].size());
        for (std::int32_t r : rows[static_cast<std::size_t>(i)]) {
            const auto pred = model.objects[static_cast<std::size_t>(i)].predict(
                data.features[static_cast<std::size_t>(r)]);
            const auto& y = data.targets[static_cast<std::size_t>(r)];
            resid.push_back({y[0] - pred[0], y[1] - pred[1]});
        }
        if (resid.size() < 2) {
            report.per_object_H.push_back(-std::numeric_limits<double>::infinity());
            report.degenerate.push_back(1);
            continue;
        }
        const DiffEntropy h = differential_entropy_gaussian_fit(resid);
        report.per_object_H.push_back(h.nats);
        report.degenerate.push_back(h.degenerate ? 1 : 0);
    }

    const auto& counts = model.transition_counts;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const int m = counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                          counts[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            if (m == 0) continue; // pruned: no observed interaction
            const double p =
                static_cast<double>(counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) /
                static_cast<double>(m);
            report.affordance_pairs.push_back({i, j});
            report.affordance_H.push_back(bernoulli_entropy(p, Unit::bits));
        }
    }

    report.c.assign(c.begin(), c.end());
    if (report.c.empty()) report.c.assign(static_cast<std::size_t>(k), 1.0);
    report.d.assign(d.begin(), d.end());
    if (report.d.empty()) report.d.assign(report.affordance_H.size(), 1.0);
    if (report.c.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("cie_of_model: coefficient list c has wrong length");
    if (report.d.size() != report.affordance_H.size())
        throw std::invalid_argument("cie_of_model: coefficient list d has wrong length");

    CieTerms terms;
    terms.unit = Unit::nats;
    for (int i = 0; i < k; ++i)
        terms.object_entropies.emplace_back("A" + std::to_string(i),
                                            report.per_object_H[static_cast<std::size_t>(i)]);
    for (std::size_t l = 0; l < report.affordance_H.size(); ++l)
        terms.coupling_entropies.emplace_back(
            "B" + std::to_string(report.affordance_pairs[l][0]) + "_" +
                std::to_string(report.affordance_pairs[l][1]),
            to_nats(report.affordance_H[l], Unit::bits));
    terms.c = report.c;
    terms.d = report.d;
    report.total = cie_total(terms);
    report.total_degenerate = !std::isfinite(report.total);
    return report;
}

std::string model_to_json(const SystemModel& model, const CieReport& report) {
    nlohmann::json doc;
    nlohmann::json objects = nlohmann::json::array();
    for (const ObjectModel& m : model.objects) {
        objects.push_back({{"weights", {m.weights[0], m.weights[1]}},
                           {"n_points", m.n_points},
                           {"sigma", m.residual_sigma},
                           {"ridge_fallback", m.ridge_fallback}});
    }
    doc["objects"] = std::move(objects);
    doc["assignment"] = model.assignment;
    doc["transitions"] = model.transition_counts;
    doc["a_mag_hat"] = model.a_mag_hat;
    doc["loss"] = model.loss;

    nlohmann::json cie;
    nlohmann::json h = nlohmann::json::array();
    for (double v : report.per_object_H) h.push_back(finite_or_null(v));
    cie["per_object_H_nats"] = std::move(h);
    nlohmann::json degen = nlohmann::json::array();
    for (char f : report.degenerate) degen.push_back(static_cast<bool>(f));
    cie["degenerate"] = std::move(degen);
    nlohmann::json aff = nlohmann::json::array();
    for (std::size_t l = 0; l < report.affordance_H.size(); ++l)
        aff.push_back({{"pair", report.affordance_pairs[l]},
                       {"H_bits", report.affordance_H[l]}});
    cie["affordances"] = std::move(aff);
    cie["c"] = report.c;
    cie["d"] = report.d;
    cie["total_nats"] = finite_or_null(report.total);
    cie["total_degenerate"] = report.total_degenerate;
    doc["cie"] = std::move(cie);

    nlohmann::json trace = nlohmann::json::array();
    for (const TraceEvent& e : report.bellman_trace)
        trace.push_back({{"iteration", e.iteration},
                         {"loss", e.loss},
                         {"C", finite_or_null(e.c_value)},
                         {"description", e.description}});
    doc["trace"] = std::move(trace);
    return doc.dump(2);
}

} // namespace cie::infer
