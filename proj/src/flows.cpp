#include "flowcube/flows.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace flowcube::flows {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double trig_unit_cos(double theta) { return (1.0 + std::cos(kTwoPi * theta)) / 2.0; }
double trig_unit_sin(double theta) { return (1.0 + std::sin(kTwoPi * theta)) / 2.0; }

/// (1 +- trig)/2 chart of a pair of angles; injective on the 2-torus with
/// coordinate distance >= 2 * torus distance (since sin(pi c) >= 2c on
/// c in [0, 1/2]).
Flow::State torus_chart(double theta1, double theta2) {
    return {trig_unit_cos(theta1), trig_unit_sin(theta1), trig_unit_cos(theta2),
            trig_unit_sin(theta2)};
}

double torus_metric(const Flow::State& a, const Flow::State& b) {
    const double d1 = circle_dist(a[0], b[0]);
    const double d2 = circle_dist(a[1], b[1]);
    return std::sqrt(d1 * d1 + d2 * d2);
}

}  // namespace

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double wrap_unit(double x) {
    const double w = x - std::floor(x);
    return w < 1.0 ? w : 0.0;  // floor(x) == x gives w == 1.0 only through rounding
}

double circle_dist(double a, double b) {
    const double d = wrap_unit(a - b);
    return std::min(d, 1.0 - d);
}

std::pair<double, double> Suspension::evolve(double x, double s, double t) const {
    auto roof_at = [&](double base) {
        const double r = roof(base);
        if (r < roof_min * (1.0 - 1e-12))
            throw std::runtime_error("suspension: roof below declared minimum");
        return r;
    };

    double r = roof_at(x);
    if (s < 0.0 || s > r)
        throw std::invalid_argument("suspension: fiber coordinate outside [0, roof(x))");

    const auto cap = static_cast<long long>(std::ceil(std::abs(t) / roof_min)) + 1;
    long long crossings = 0;

    double total = s + t;
    if (total >= 0.0) {
        while (total >= r) {
            total -= r;
            x = wrap_unit(base_map(x));
            r = roof_at(x);
            if (++crossings > cap)
                throw std::runtime_error("suspension: crossing count exceeded ceil(|t|/roof_min)+1");
        }
    } else {
        while (total < 0.0) {
            x = wrap_unit(base_inverse(x));
            r = roof_at(x);
            total += r;
            if (++crossings > cap)
                throw std::runtime_error("suspension: crossing count exceeded ceil(|t|/roof_min)+1");
        }
    }
    return {x, total};
}

Flow::Flow(std::string name, std::size_t state_dim, std::size_t coord_dim,
           std::function<State(const State&, double)> evolve,
           std::function<double(const State&, const State&)> dist,
           std::function<State(const State&)> coords,
           std::function<State(std::mt19937_64&)> sampler, double group_law_tol)
    : name_(std::move(name)), state_dim_(state_dim), coord_dim_(coord_dim),
      evolve_(std::move(evolve)), dist_(std::move(dist)), coords_(std::move(coords)),
      sampler_(std::move(sampler)), group_law_tol_(group_law_tol) {}

void Flow::check_state(const State& x) const {
    if (x.size() != state_dim_)
        throw std::invalid_argument("flow '" + name_ + "': state must have " +
                                    std::to_string(state_dim_) + " coordinates");
}

Flow::State Flow::evolve(const State& x, double t) const {
    check_state(x);
    return evolve_(x, t);
}

double Flow::dist(const State& a, const State& b) const {
    check_state(a);
    check_state(b);
    return dist_(a, b);
}

Flow::State Flow::coords(const State& x) const {
    check_state(x);
    return coords_(x);
}

Flow::State Flow::sample_state(std::mt19937_64& rng) const { return sampler_(rng); }

double default_alpha() { return std::numbers::sqrt2 - 1.0; }

Flow make_torus_flow(double alpha) {
    auto evolve = [alpha](const Flow::State& x, double t) -> Flow::State {
        return {wrap_unit(x[0] + t), wrap_unit(x[1] + alpha * t)};
    };
    auto coords = [](const Flow::State& x) { return torus_chart(x[0], x[1]); };
    auto sample = [](std::mt19937_64& rng) -> Flow::State {
        return {uniform01(rng), uniform01(rng)};
    };
    return Flow("torus", 2, 4, std::move(evolve), torus_metric, std::move(coords),
                std::move(sample), 1e-9);
}

Flow make_fixed_circle_flow() {
    auto speed = [](double c) {
        const double s = std::sin(std::numbers::pi * c);
        return s * s;
    };
    auto evolve = [speed](const Flow::State& x, double t) -> Flow::State {
        return {x[0], wrap_unit(x[1] + t * speed(x[0]))};
    };
    auto coords = [](const Flow::State& x) { return torus_chart(x[0], x[1]); };
    auto sample = [](std::mt19937_64& rng) -> Flow::State {
        return {uniform01(rng), uniform01(rng)};
    };
    return Flow("fixed_circle", 2, 4, std::move(evolve), torus_metric, std::move(coords),
                std::move(sample), 1e-9);
}

Suspension make_rotation_suspension(double alpha, std::function<double(double)> roof,
                                    double roof_min, double roof_max) {
    Suspension susp;
    susp.base_map = [alpha](double x) { return wrap_unit(x + alpha); };
    susp.base_inverse = [alpha](double x) { return wrap_unit(x - alpha); };
    susp.roof = std::move(roof);
    susp.roof_min = roof_min;
    susp.roof_max = roof_max;
    return susp;
}

Flow make_suspension_flow(const std::string& name, double alpha,
                          std::function<double(double)> roof, double roof_min, double roof_max) {
    auto susp = make_rotation_suspension(alpha, std::move(roof), roof_min, roof_max);

    auto fiber_pair = [susp, alpha](const Flow::State& st) -> std::array<double, 2> {
        const double u = st[1] / susp.roof(st[0]);
        return {u, wrap_unit(st[0] + alpha * u)};
    };
    auto evolve = [susp](const Flow::State& st, double t) -> Flow::State {
        const auto [x, s] = susp.evolve(st[0], st[1], t);
        return {x, s};
    };
    auto dist = [fiber_pair](const Flow::State& a, const Flow::State& b) {
        const auto pa = fiber_pair(a);
        const auto pb = fiber_pair(b);
        const double d1 = circle_dist(pa[0], pb[0]);
        const double d2 = circle_dist(pa[1], pb[1]);
        return std::sqrt(d1 * d1 + d2 * d2);
    };
    auto coords = [fiber_pair](const Flow::State& st) {
        const auto p = fiber_pair(st);
        return torus_chart(p[0], p[1]);
    };
    auto sample = [susp](std::mt19937_64& rng) -> Flow::State {
        const double x = uniform01(rng);
        return {x, uniform01(rng) * susp.roof(x)};
    };
    return Flow(name, 2, 4, std::move(evolve), std::move(dist), std::move(coords),
                std::move(sample), 1e-6);
}

const std::vector<std::string>& builtin_flow_names() {
    static const std::vector<std::string> names{"torus", "susp_const", "susp_cos", "fixed_circle"};
    return names;
}

Flow make_builtin_flow(const std::string& name) {
    if (name == "torus") return make_torus_flow();
    if (name == "fixed_circle") return make_fixed_circle_flow();
    if (name == "susp_const") {
        return make_suspension_flow("susp_const", default_alpha(), [](double) { return 1.0; }, 1.0,
                                    1.0);
    }
    if (name == "susp_cos") {
        auto roof = [](double x) { return 1.0 + 0.25 * std::cos(kTwoPi * x); };
        return make_suspension_flow("susp_cos", default_alpha(), roof, 0.75, 1.25);
    }
    throw std::invalid_argument("unknown flow: " + name);
}

}  // namespace flowcube::flows
