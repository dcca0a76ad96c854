#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ergo/errors.hpp"
#include "ergo/fitkit.hpp"

using namespace ergo::fit;

namespace {

std::vector<Series> synthetic(const FitParams& p, const std::vector<double>& ns) {
    std::vector<Series> out(3);
    out[0].label = SeriesKind::excess;
    out[1].label = SeriesKind::ergotropy;
    out[2].label = SeriesKind::bound;
    for (double n : ns) {
        // written out independently of the library's model functions
        const double de = p.alpha1 - p.alpha2 / n;
        const double lg = std::log(p.alpha4 * n);
        const double q = p.alpha3 * lg * lg / n;
        out[0].points.push_back({n, de});
        out[1].points.push_back({n, de - q});
        out[2].points.push_back({n, q});
    }
    return out;
}

FitParams params(double a1, double a2, double a3, double a4) {
    FitParams p;
    p.alpha1 = a1;
    p.alpha2 = a2;
    p.alpha3 = a3;
    p.alpha4 = a4;
    return p;
}

Series bound_series(double log_gamma, const std::vector<double>& ns) {
    Series s;
    s.label = SeriesKind::bound;
    for (double n : ns) {
        const double lg = log_gamma + std::log(n);
        s.points.push_back({n, lg * lg / (6.0 * std::numbers::pi * n)});
    }
    return s;
}

}  // namespace

TEST_CASE("linear fit on exact lines") {
    const std::vector<double> xs{0, 1, 2, 3, 4};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2.0 * x + 1.0);
    const auto f = linear_fit(xs, ys);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-14));

    const std::vector<double> x2{1.5, 4.0};
    const std::vector<double> y2{-3.0, 7.0};
    const auto g = linear_fit(x2, y2);
    CHECK(g.slope == doctest::Approx(4.0));
    CHECK(g.intercept == doctest::Approx(-9.0));
    CHECK(g.r_squared == doctest::Approx(1.0));
}

TEST_CASE("linear fit errors") {
    const std::vector<double> flat{2.0, 2.0, 2.0};
    const std::vector<double> ys{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(linear_fit(flat, ys), ergo::InputError);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(linear_fit(one, one), ergo::InputError);
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(linear_fit(two, ys), ergo::InputError);
}

TEST_CASE("linear fit matches a QR least-squares solve") {
    std::mt19937_64 gen(8);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 3 + gen() % 40;
        std::vector<double> xs(n), ys(n);
        Eigen::MatrixXd a(n, 2);
        Eigen::VectorXd b(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = 5.0 * g(gen);
            ys[i] = 0.3 * xs[i] - 1.0 + g(gen);
            a(i, 0) = xs[i];
            a(i, 1) = 1.0;
            b(i) = ys[i];
        }
        const Eigen::Vector2d sol = a.colPivHouseholderQr().solve(b);
        const auto f = linear_fit(xs, ys);
        CHECK(f.slope == doctest::Approx(sol(0)).epsilon(1e-10));
        CHECK(f.intercept == doctest::Approx(sol(1)).epsilon(1e-10));
        const Eigen::VectorXd resid = b - a * sol;
        const double ss_tot = (b.array() - b.mean()).square().sum();
        CHECK(f.r_squared == doctest::Approx(1.0 - resid.squaredNorm() / ss_tot).epsilon(1e-10));
        CHECK(f.r_squared >= 0.0);
        CHECK(f.r_squared <= 1.0);
    }
}

TEST_CASE("linear fit inverts exact lines") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = u(gen) + (u(gen) > 0 ? 4.0 : -4.0);
        const double b = u(gen);
        std::vector<double> xs, ys;
        for (int i = 0; i < 7; ++i) {
            xs.push_back(u(gen));
            ys.push_back(a * xs.back() + b);
        }
        const auto forward = linear_fit(xs, ys);
        const auto backward = linear_fit(ys, xs);
        CHECK(backward.slope == doctest::Approx(1.0 / forward.slope).epsilon(1e-10));
        CHECK(backward.intercept == doctest::Approx(-forward.intercept / forward.slope).epsilon(1e-9));
    }
}

TEST_CASE("series labels and validation") {
    CHECK(to_string(SeriesKind::excess) == "deltaE");
    CHECK(to_string(SeriesKind::ergotropy) == "W");
    CHECK(to_string(SeriesKind::bound) == "Q");
    CHECK(parse_series_kind("Q") == SeriesKind::bound);
    CHECK_THROWS_AS(parse_series_kind("E"), ergo::InputError);

    Series s;
    s.points = {{4, 1.0}};
    CHECK_THROWS_AS(s.validate(), ergo::InputError);
    s.points = {{4, 1.0}, {4, 2.0}};
    CHECK_THROWS_AS(s.validate(), ergo::InputError);
    s.points = {{4, 1.0}, {6, 2.0}};
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("shared fit recovers noiseless synthetic parameters") {
    const auto truth = params(0.2, 0.1, 0.05, 3.0);
    const auto data = synthetic(truth, {6, 8, 10, 12, 14, 16, 20, 24});
    const auto fit = shared_fit(data);
    CHECK(fit.alpha1 == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(fit.alpha2 == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(fit.alpha3 == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(fit.alpha4 == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fit.residual_norm < 1e-10);
    CHECK(fit.r2_excess == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.r2_bound == doctest::Approx(1.0).epsilon(1e-9));
    for (double n : {6.0, 13.0}) {
        CHECK(model_bound(fit, n) == doctest::Approx(model_excess(fit, n) - model_ergotropy(fit, n)).epsilon(1e-14));
    }
}

TEST_CASE("shared fit recovers parameters of other shapes") {
    for (const auto& truth : {params(0.44, 0.9, 0.41, 1.32), params(0.137, 0.07, 0.044, 5.5),
                              params(-0.1, 2.0, 0.3, 0.2)}) {
        const auto data = synthetic(truth, {8, 12, 16, 20, 24});
        const auto fit = shared_fit(data);
        CHECK(fit.alpha1 == doctest::Approx(truth.alpha1).epsilon(1e-6));
        CHECK(fit.alpha3 == doctest::Approx(truth.alpha3).epsilon(1e-5));
        CHECK(fit.alpha4 == doctest::Approx(truth.alpha4).epsilon(1e-5));
    }
}

TEST_CASE("shared fit is stable and deterministic") {
    std::mt19937_64 gen(33);
    std::normal_distribution<double> noise(0.0, 1e-4);
    auto data = synthetic(params(0.14, 0.06, 0.045, 5.0), {6, 8, 10, 12, 14});
    for (auto& s : data)
        for (auto& p : s.points) p.value += noise(gen);
    const auto fit = shared_fit(data);
    const auto again = shared_fit(data);
    CHECK(fit.alpha1 == again.alpha1);
    CHECK(fit.alpha4 == again.alpha4);
    CHECK(fit.residual_norm == again.residual_norm);

    const double start[] = {fit.alpha4};
    const auto rerun = shared_fit(data, start);
    CHECK(rerun.residual_norm <= fit.residual_norm * (1.0 + 1e-12));
}

TEST_CASE("shared fit input errors") {
    auto data = synthetic(params(0.2, 0.1, 0.05, 3.0), {6, 8, 10});
    CHECK_THROWS_AS(shared_fit(std::span<const Series>(data.data(), 2)), ergo::InputError);
    auto dup = data;
    dup[1].label = SeriesKind::excess;
    CHECK_THROWS_AS(shared_fit(dup), ergo::InputError);
    auto grid = data;
    grid[2].points[1].n = 9;
    CHECK_THROWS_AS(shared_fit(grid), ergo::InputError);
    const double bad[] = {-1.0};
    CHECK_THROWS_AS(shared_fit(data, bad), ergo::InputError);
}

TEST_CASE("log gamma round trip and scaling") {
    const std::vector<double> ns{100, 200, 400, 800, 1600};
    const auto fit = fit_log_gamma(bound_series(2.3, ns));
    CHECK(fit.log_gamma == doctest::Approx(2.3).epsilon(1e-9));
    CHECK(fit.residual < 1e-9);

    // N -> s N with Q N fixed shifts log gamma by -log s
    const double s = 3.7;
    Series scaled = bound_series(2.3, ns);
    for (auto& p : scaled.points) {
        p.n *= s;
        p.value /= s;
    }
    CHECK(fit_log_gamma(scaled).log_gamma == doctest::Approx(2.3 - std::log(s)).epsilon(1e-9));
}

TEST_CASE("log gamma errors") {
    CHECK_THROWS_AS(fit_log_gamma(bound_series(2.3, {10, 20})), ergo::InputError);
    Series s = bound_series(2.3, {10, 20, 40});
    s.points[1].value = 0.0;
    CHECK_THROWS_AS(fit_log_gamma(s), ergo::InputError);
}
