#include "ergo/fitkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "ergo/errors.hpp"

namespace ergo::fit {

namespace {

constexpr std::size_t kMaxIterations = 500;
constexpr double kStepTolerance = 1e-12;

double r_squared(std::span<const double> ys, std::span<const double> fitted) {
    double mean = 0.0;
    for (double y : ys) mean += y;
    mean /= static_cast<double>(ys.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        ss_res += (ys[i] - fitted[i]) * (ys[i] - fitted[i]);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
    return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

double shape(double log_a4, double n) {
    const double l = log_a4 + std::log(n);
    return l * l / n;
}

struct Problem {
    std::vector<double> n;
    std::vector<double> excess;
    std::vector<double> ergotropy;
    std::vector<double> bound;

    std::size_t size() const { return n.size(); }

    // theta = (a1, a2, log a3, log a4)
    Eigen::VectorXd residuals(const Eigen::Vector4d& theta) const {
        const std::size_t m = size();
        Eigen::VectorXd r(static_cast<Eigen::Index>(3 * m));
        const double a3 = std::exp(theta(2));
        for (std::size_t i = 0; i < m; ++i) {
            const double base = theta(0) - theta(1) / n[i];
            const double q = a3 * shape(theta(3), n[i]);
            const auto k = static_cast<Eigen::Index>(i);
            r(k) = base - excess[i];
            r(k + static_cast<Eigen::Index>(m)) = base - q - ergotropy[i];
            r(k + static_cast<Eigen::Index>(2 * m)) = q - bound[i];
        }
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::Vector4d& theta) const {
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(3 * size()), 4);
        for (int j = 0; j < 4; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(theta(j)));
            Eigen::Vector4d up = theta;
            Eigen::Vector4d down = theta;
            up(j) += h;
            down(j) -= h;
            jac.col(j) = (residuals(up) - residuals(down)) / (2.0 * h);
        }
        return jac;
    }

    // Given a4 the model is linear in (a1, a2, a3).
    Eigen::Vector4d linear_start(double a4) const {
        const std::size_t m = size();
        Eigen::MatrixXd design = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(3 * m), 3);
        Eigen::VectorXd target(static_cast<Eigen::Index>(3 * m));
        const double log_a4 = std::log(a4);
        for (std::size_t i = 0; i < m; ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            const auto mm = static_cast<Eigen::Index>(m);
            const double g = shape(log_a4, n[i]);
            design.row(k) << 1.0, -1.0 / n[i], 0.0;
            design.row(k + mm) << 1.0, -1.0 / n[i], -g;
            design.row(k + 2 * mm) << 0.0, 0.0, g;
            target(k) = excess[i];
            target(k + mm) = ergotropy[i];
            target(k + 2 * mm) = bound[i];
        }
        const Eigen::Vector3d a = design.colPivHouseholderQr().solve(target);
        const double a3 = a(2) > 1e-12 ? a(2) : 1e-3;
        return {a(0), a(1), std::log(a3), log_a4};
    }
};

struct Outcome {
    Eigen::Vector4d theta;
    double cost = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

Outcome levenberg_marquardt(const Problem& prob, Eigen::Vector4d theta) {
    Outcome out;
    Eigen::VectorXd r = prob.residuals(theta);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    for (std::size_t it = 0; it < kMaxIterations; ++it) {
        out.iterations = it + 1;
        const Eigen::MatrixXd jac = prob.jacobian(theta);
        const Eigen::Matrix4d jtj = jac.transpose() * jac;
        const Eigen::Vector4d grad = jac.transpose() * r;
        if (grad.lpNorm<Eigen::Infinity>() <= 1e-30) {
            out.converged = true;
            break;
        }
        bool accepted = false;
        while (lambda < 1e16) {
            Eigen::Matrix4d damped = jtj;
            for (int j = 0; j < 4; ++j) damped(j, j) += lambda * std::max(jtj(j, j), 1e-30);
            const Eigen::Vector4d step = damped.ldlt().solve(-grad);
            const Eigen::Vector4d trial = theta + step;
            const Eigen::VectorXd r_trial = prob.residuals(trial);
            const double trial_cost = r_trial.squaredNorm();
            if (std::isfinite(trial_cost) && trial_cost <= cost) {
                const bool small = step.norm() <= kStepTolerance * (theta.norm() + kStepTolerance);
                theta = trial;
                r = r_trial;
                cost = trial_cost;
                lambda = std::max(lambda / 3.0, 1e-15);
                accepted = true;
                if (small) out.converged = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted) {
            // No downhill step at any damping: stationary to working precision.
            out.converged = true;
            break;
        }
        if (out.converged) break;
    }
    out.theta = theta;
    out.cost = cost;
    out.converged = out.converged && std::isfinite(cost);
    return out;
}

Problem make_problem(std::span<const Series> series) {
    if (series.size() != 3) throw InputError("shared_fit needs exactly three series");
    std::array<const Series*, 3> slot{nullptr, nullptr, nullptr};
    for (const Series& s : series) {
        s.validate();
        auto& dst = slot[static_cast<std::size_t>(s.label)];
        if (dst) throw InputError("duplicate series label " + to_string(s.label));
        dst = &s;
    }
    const auto& grid = slot[0]->points;
    for (const Series* s : slot) {
        if (s->points.size() != grid.size()) throw InputError("series have different N grids");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (s->points[i].n != grid[i].n) throw InputError("series have different N grids");
        }
    }
    Problem p;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        p.n.push_back(grid[i].n);
        p.excess.push_back(slot[0]->points[i].value);
        p.ergotropy.push_back(slot[1]->points[i].value);
        p.bound.push_back(slot[2]->points[i].value);
    }
    return p;
}

}  // namespace

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw InputError("linear_fit: xs and ys differ in length");
    if (xs.size() < 2) throw InputError("linear_fit: need at least two points");
    const auto m = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw InputError("linear_fit: all x values are equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    std::vector<double> fitted(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fitted[i] = f.slope * xs[i] + f.intercept;
    f.r_squared = r_squared(ys, fitted);
    return f;
}

std::string to_string(SeriesKind kind) {
    switch (kind) {
        case SeriesKind::excess: return "deltaE";
        case SeriesKind::ergotropy: return "W";
        case SeriesKind::bound: return "Q";
    }
    return "?";
}

SeriesKind parse_series_kind(const std::string& label) {
    if (label == "deltaE") return SeriesKind::excess;
    if (label == "W") return SeriesKind::ergotropy;
    if (label == "Q") return SeriesKind::bound;
    throw InputError("unknown series label '" + label + "'");
}

void Series::validate() const {
    if (points.size() < 2) throw InputError("series " + to_string(label) + " needs >= 2 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].n > 0.0) || !std::isfinite(points[i].value)) {
            throw InputError("series " + to_string(label) + " has an invalid point");
        }
        if (i > 0 && !(points[i].n > points[i - 1].n)) {
            throw InputError("series " + to_string(label) + ": N must be strictly increasing");
        }
    }
}

double model_excess(const FitParams& p, double n) { return p.alpha1 - p.alpha2 / n; }

double model_bound(const FitParams& p, double n) {
    return p.alpha3 * shape(std::log(p.alpha4), n);
}

double model_ergotropy(const FitParams& p, double n) {
    return model_excess(p, n) - model_bound(p, n);
}

FitParams shared_fit(std::span<const Series> series, std::span<const double> alpha4_starts) {
    const Problem prob = make_problem(series);
    if (alpha4_starts.empty()) throw InputError("shared_fit: empty alpha4 start grid");

    std::optional<Outcome> best;
    double best_start = 0.0;
    for (double a4 : alpha4_starts) {
        if (!(a4 > 0.0)) throw InputError("shared_fit: alpha4 starts must be positive");
        const Outcome o = levenberg_marquardt(prob, prob.linear_start(a4));
        if (!o.converged) continue;
        if (!best || o.cost < best->cost) {
            best = o;
            best_start = a4;
        }
    }
    if (!best) {
        throw FitError("shared_fit: optimizer did not converge from any of " +
                       std::to_string(alpha4_starts.size()) + " starts");
    }

    FitParams p;
    p.alpha1 = best->theta(0);
    p.alpha2 = best->theta(1);
    p.alpha3 = std::exp(best->theta(2));
    p.alpha4 = std::exp(best->theta(3));
    p.residual_norm = std::sqrt(best->cost);
    p.iterations = best->iterations;
    p.start_alpha4 = best_start;

    std::vector<double> fitted(prob.size());
    auto score = [&](const std::vector<double>& ys, double (*model)(const FitParams&, double)) {
        for (std::size_t i = 0; i < prob.size(); ++i) fitted[i] = model(p, prob.n[i]);
        return r_squared(ys, fitted);
    };
    p.r2_excess = score(prob.excess, model_excess);
    p.r2_ergotropy = score(prob.ergotropy, model_ergotropy);
    p.r2_bound = score(prob.bound, model_bound);
    return p;
}

LogGammaFit fit_log_gamma(const Series& bound) {
    bound.validate();
    if (bound.points.size() < 3) throw InputError("fit_log_gamma needs at least three points");
    // sqrt(6 pi N Q) = log gamma + log N on the positive branch.
    std::vector<double> lifted;
    for (const SeriesPoint& pt : bound.points) {
        if (!(pt.value > 0.0)) throw InputError("fit_log_gamma: Q must be positive");
        lifted.push_back(std::sqrt(6.0 * std::numbers::pi * pt.n * pt.value) - std::log(pt.n));
    }
    LogGammaFit f;
    for (double x : lifted) f.log_gamma += x;
    f.log_gamma /= static_cast<double>(lifted.size());
    double ss = 0.0;
    for (double x : lifted) ss += (x - f.log_gamma) * (x - f.log_gamma);
    f.residual = std::sqrt(ss / static_cast<double>(lifted.size()));
    return f;
}

}  // namespace ergo::fit
