// Concrete compact metric flows with closed-form evolution maps, metrics,
// and explicit coordinate maps into [0,1]^m, plus the suspension
// construction over a circle homeomorphism with a roof function.
//
// There is deliberately no automatic coordinate map for arbitrary compact
// metric spaces; every flow ships its own explicit coords.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace flowcube::flows {

/// Deterministic mapping of raw generator output to [0, 1); unlike the
/// standard distributions this is pinned by the mt19937_64 specification.
double uniform01(std::mt19937_64& rng);

/// x mod 1, always in [0, 1).
double wrap_unit(double x);

/// Arc distance on the unit circle R/Z.
double circle_dist(double a, double b);

/// Suspension over a circle homeomorphism T with a positive roof function:
/// points (x, s) with 0 <= s < roof(x), (x, roof(x)) identified with (Tx, 0);
/// the identification is applied eagerly so representatives are unique.
/// Flowing by t accumulates roof values along the T-orbit:
///     sum_{i=0..n-1} roof(T^i x) + s' = t + s,   0 <= s' < roof(T^n x),
/// with n negative (via the explicit inverse of T) when t + s < 0.
struct Suspension {
    std::function<double(double)> base_map;
    std::function<double(double)> base_inverse;
    std::function<double(double)> roof;
    double roof_min = 0.0;  // declared positive lower bound
    double roof_max = 0.0;  // declared upper bound

    /// Evolve the representative.  Throws when roof dips below the declared
    /// minimum or when the crossing count exceeds ceil(|t|/roof_min)+1 (both
    /// indicate an invalid spec).
    std::pair<double, double> evolve(double x, double s, double t) const;
};

/// A compact metric flow: state representation, evolution map, metric, and
/// explicit coordinates into [0,1]^m.  States are plain coordinate vectors so
/// flows can be driven uniformly from files and the CLI.
class Flow {
public:
    using State = std::vector<double>;

    Flow(std::string name, std::size_t state_dim, std::size_t coord_dim,
         std::function<State(const State&, double)> evolve,
         std::function<double(const State&, const State&)> dist,
         std::function<State(const State&)> coords,
         std::function<State(std::mt19937_64&)> sampler, double group_law_tol);

    const std::string& name() const { return name_; }
    std::size_t state_dim() const { return state_dim_; }
    std::size_t coord_dim() const { return coord_dim_; }

    /// Declared residual tolerance for the identity/group-law axioms
    /// (closed-form flows 1e-9, suspensions 1e-6).
    double group_law_tol() const { return group_law_tol_; }

    State evolve(const State& x, double t) const;
    double dist(const State& a, const State& b) const;

    /// Point in [0,1]^m; injective on the state space with the margin
    /// recorded per flow (coordinate distance >= 2 * state distance for the
    /// trigonometric charts used by the built-ins).
    State coords(const State& x) const;

    /// Seeded uniform draw from the state space.
    State sample_state(std::mt19937_64& rng) const;

private:
    void check_state(const State& x) const;

    std::string name_;
    std::size_t state_dim_;
    std::size_t coord_dim_;
    std::function<State(const State&, double)> evolve_;
    std::function<double(const State&, const State&)> dist_;
    std::function<State(const State&)> coords_;
    std::function<State(std::mt19937_64&)> sampler_;
    double group_law_tol_;
};

/// Default rotation number for the built-in flows.
double default_alpha();

/// Linear flow on the 2-torus: (a, b) -> (a + t, b + alpha t) mod 1.
Flow make_torus_flow(double alpha = default_alpha());

/// Product flow on the 2-torus whose angular speed sin^2(pi c) vanishes on
/// the circle c = 0: the fixed-point set is a circle, which is not
/// homeomorphic to a subset of R.
Flow make_fixed_circle_flow();

/// Suspension over the rotation x -> x + alpha with the given roof, exposed
/// as a flow on states (x, s).  Coordinates use the fiber-normalized pair
/// (u, x + alpha u) with u = s / roof(x), which crosses the identification
/// seam continuously: as s -> roof(x) the pair tends to (0, Tx), matching
/// the representative (Tx, 0).  For roof == 1 this pair conjugates the
/// suspension to the torus flow exactly.
Flow make_suspension_flow(const std::string& name, double alpha,
                          std::function<double(double)> roof, double roof_min, double roof_max);

/// The underlying suspension machinery for a built-in suspension flow.
Suspension make_rotation_suspension(double alpha, std::function<double(double)> roof,
                                    double roof_min, double roof_max);

/// Registry: "torus", "susp_const", "susp_cos", "fixed_circle".
const std::vector<std::string>& builtin_flow_names();
Flow make_builtin_flow(const std::string& name);

}  // namespace flowcube::flows
