// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include "lics/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "lics/errors.hpp"

namespace lics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSpreadTolerance = 1e-8;

// Nelder-Mead coefficients: reflection, expansion, contraction, shrink.
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

using Point = std::vector<double>;

struct Evaluation {
    double value = kInf;
    Observables achieved;
    std::string error;
};

class BudgetedObjective {
public:
    BudgetedObjective(const Objective& objective, std::size_t budget)
        : objective_(objective), budget_(budget) {}

    bool exhausted() const { return count_ >= budget_; }
    std::size_t count() const { return count_; }
    const std::vector<double>& history() const { return history_; }

    Point clamp(Point x) const {
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] = std::clamp(x[k], objective_.free[k].min, objective_.free[k].max);
        return x;
    }

    Evaluation operator()(const Point& x) {
        ++count_;
        Evaluation e;
        try {
            e.achieved = evaluate(objective_.apply(x));
            e.value = objective_.score(e.achieved);
        } catch (const Error& err) {
            e.error = err.what();
        }
        history_.push_back(e.value);
        return e;
    }

private:
    const Objective& objective_;
    std::size_t budget_;
    std::size_t count_ = 0;
    std::vector<double> history_;
};

struct StartOutcome {
    StartReport report;
    Observables achieved;
    std::vector<double> history;
};

StartOutcome nelder_mead(const Objective& objective, const Point& start, std::size_t budget) {
    const std::size_t dim = objective.free.size();
    BudgetedObjective f(objective, budget);

    struct Vertex {
        Point x;
        Evaluation e;
    };
    std::vector<Vertex> simplex;
    simplex.push_back({start, f(start)});

    StartOutcome out;
    out.report.start = start;
    std::string last_error = simplex[0].e.error;

    if (simplex[0].e.value == 0.0) {
        out.report.converged = true;
    } else {
        for (std::size_t k = 0; k < dim && !f.exhausted(); ++k) {
            const auto& box = objective.free[k];
            const double step = 0.1 * (box.max - box.min);
            Point x = start;
            x[k] = x[k] + step <= box.max ? x[k] + step : x[k] - step;
            simplex.push_back({x, f(x)});
        }
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.e.value < b.e.value; };
    auto probe = [&](const Point& x) {
        Vertex v{f.clamp(x), {}};
        v.e = f(v.x);
        if (!v.e.error.empty()) last_error = v.e.error;
        return v;
    };

    while (!out.report.converged && simplex.size() == dim + 1 && !f.exhausted()) {
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
        if (simplex.back().e.value - simplex.front().e.value < kSpreadTolerance) {
            out.report.converged = true;
            break;
        }
        double diameter = 0.0;
        for (std::size_t i = 1; i <= dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) {
                const double range = objective.free[k].max - objective.free[k].min;
                diameter = std::max(diameter,
                                    std::abs(simplex[i].x[k] - simplex[0].x[k]) / range);
            }
        if (diameter < 1e-12) {
            out.report.converged = true;
            break;
        }

        Point centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i].x[k] / dim;
        auto along = [&](const Point& from, double t) {
            Point p(dim);
            for (std::size_t k = 0; k < dim; ++k) p[k] = centroid[k] + t * (from[k] - centroid[k]);
            return p;
        };

        Vertex& worst = simplex.back();
        const double second_worst = simplex[dim - 1].e.value;
        Vertex reflected = probe(along(worst.x, -kReflect));

        if (reflected.e.value < simplex.front().e.value) {
            if (f.exhausted()) {
                worst = std::move(reflected);
                continue;
            }
            Vertex expanded = probe(along(reflected.x, kExpand));
            worst = expanded.e.value < reflected.e.value ? std::move(expanded)
                                                         : std::move(reflected);
            continue;
        }
        if (reflected.e.value < second_worst) {
            worst = std::move(reflected);
            continue;
        }
        if (f.exhausted()) break;

        bool accepted = false;
        if (reflected.e.value < worst.e.value) {
            Vertex outside = probe(along(reflected.x, kContract));
            if (outside.e.value <= reflected.e.value) {
                worst = std::move(outside);
                accepted = true;
            }
        } else {
            Vertex inside = probe(along(worst.x, kContract));
            if (inside.e.value < worst.e.value) {
                worst = std::move(inside);
                accepted = true;
            }
        }
        if (accepted) continue;

        for (std::size_t i = 1; i <= dim && !f.exhausted(); ++i) {
            Point x(dim);
            for (std::size_t k = 0; k < dim; ++k)
                x[k] = simplex[0].x[k] + kShrink * (simplex[i].x[k] - simplex[0].x[k]);
            simplex[i] = probe(x);
        }
    }

    const auto best = std::min_element(simplex.begin(), simplex.end(), by_value);
    out.report.best = best->x;
    out.report.value = best->e.value;
    out.report.evaluations = f.count();
    out.achieved = best->e.achieved;
    out.history = f.history();
    if (!std::isfinite(out.report.value))
        out.report.error = last_error.empty() ? "no finite objective value" : last_error;
    return out;
}

std::vector<Point> latin_hypercube(const Objective& objective, std::size_t count,
                                   std::uint64_t seed) {
    const std::size_t dim = objective.free.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> points(count, Point(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        std::vector<std::size_t> strata(count);
        std::iota(strata.begin(), strata.end(), 0);
        std::shuffle(strata.begin(), strata.end(), rng);
        const auto& box = objective.free[k];
        for (std::size_t i = 0; i < count; ++i) {
            const double u = (static_cast<double>(strata[i]) + unit(rng)) /
                             static_cast<double>(count);
            points[i][k] = box.min + u * (box.max - box.min);
        }
    }
    return points;
}

}  // namespace

double Objective::score(const Observables& achieved) const {
    double total = 0.0;
    for (const auto& t : targets) {
        const double d = achieved.get(t.which) - t.value;
        total += t.weight * d * d;
    }
    return total;
}

Scenario Objective::apply(std::span<const double> x) const {
    if (x.size() != free.size())
        throw InvalidArgument("parameter vector has the wrong dimension");
    Scenario s = base;
    for (std::size_t k = 0; k < free.size(); ++k) set_parameter(s, free[k].path, x[k]);
    return s;
}

void validate(const Objective& o) {
    if (o.targets.empty()) throw InvalidArgument("objective: at least one target is required");
    if (o.free.empty())
        throw InvalidArgument("objective: at least one free parameter is required");
    validate(o.base);
    for (const auto& t : o.targets) {
        if (t.which == Observable::sum_total)
            throw InvalidArgument("objective: sum_total cannot be a target");
        if (!(t.value >= 0.0 && t.value <= 1.0))
            throw InvalidArgument("objective: target values must lie in [0, 1]");
        if (!(t.weight > 0.0) || !std::isfinite(t.weight))
            throw InvalidArgument("objective: weights must be positive");
    }
    for (const auto& p : o.free) {
        (void)get_parameter(o.base, p.path);
        if (!std::isfinite(p.min) || !std::isfinite(p.max) || !(p.min < p.max))
            throw InvalidArgument("objective: bounds of " + p.path +
                                  " must be finite with min < max");
    }
    Point lo, hi;
    for (const auto& p : o.free) {
        lo.push_back(p.min);
        hi.push_back(p.max);
    }
    validate(o.apply(lo));
    validate(o.apply(hi));
    if (o.initial) {
        if (o.initial->size() != o.free.size())
            throw InvalidArgument("objective: initial point has the wrong dimension");
        for (std::size_t k = 0; k < o.free.size(); ++k) {
            const double v = (*o.initial)[k];
            if (!(v >= o.free[k].min && v <= o.free[k].max))
                throw InvalidArgument("objective: initial point lies outside the bounds");
        }
    }
}

std::size_t minimum_budget(const Objective& objective) { return objective.free.size() + 2; }

OptimizeResult optimize(const Objective& objective, std::size_t budget, std::uint64_t seed,
                        unsigned workers) {
    validate(objective);
    if (budget < minimum_budget(objective)) {
        std::ostringstream msg;
        msg << "budget " << budget << " is below the minimum of " << minimum_budget(objective)
            << " evaluations";
        throw InvalidArgument(msg.str());
    }
    const std::size_t dim = objective.free.size();

    if (objective.initial) {
        // A start that already hits every target needs no search.
        const StartOutcome first = nelder_mead(objective, *objective.initial, 1);
        if (first.report.value == 0.0) {
            OptimizeResult r;
            r.best = first.report.best;
            r.achieved = first.achieved;
            r.objective = 0.0;
            r.evaluations = 1;
            r.converged = true;
            r.trace = {0.0};
            r.starts = {first.report};
            return r;
        }
    }

    const std::size_t lhs_count = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::sqrt(static_cast<double>(budget) / (dim + 1))), 1, 32);
    std::vector<Point> starts;
    if (objective.initial) starts.push_back(*objective.initial);
    for (auto& p : latin_hypercube(objective, lhs_count, seed)) starts.push_back(std::move(p));
    while (starts.size() > 1 && budget / starts.size() < dim + 2) starts.pop_back();
    const std::size_t per_start = budget / starts.size();

    std::vector<StartOutcome> outcomes(starts.size());
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, starts.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < starts.size(); i += workers)
                    outcomes[i] = nelder_mead(objective, starts[i], per_start);
            });
        }
    }

    OptimizeResult result;
    std::size_t best_index = starts.size();
    double running = kInf;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        result.starts.push_back(o.report);
        result.evaluations += o.report.evaluations;
        for (double v : o.history) {
            running = std::min(running, v);
            result.trace.push_back(running);
        }
        if (std::isfinite(o.report.value) &&
            (best_index == starts.size() || o.report.value < outcomes[best_index].report.value))
            best_index = i;
    }

    if (best_index == starts.size()) {
        std::ostringstream msg;
        msg << "optimize: all " << starts.size() << " starts failed:";
        for (std::size_t i = 0; i < outcomes.size(); ++i)
            msg << "\n  start " << i << ": " << outcomes[i].report.error;
        throw NumericalFailure(msg.str(), std::nan(""));
    }

    const auto& best = outcomes[best_index];
    result.best = best.report.best;
    result.achieved = best.achieved;
    result.objective = best.report.value;
    result.converged = best.report.converged;

    const Observables again = evaluate(objective.apply(result.best));
    for (Observable o : kAllObservables) {
        if (!(std::abs(again.get(o) - result.achieved.get(o)) <= 1e-9))
            throw NumericalFailure("optimize: best point failed re-verification", std::nan(""));
    }
    return result;
}

}  // namespace lics
