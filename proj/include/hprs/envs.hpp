#ifndef HPRS_ENVS_HPP
#define HPRS_ENVS_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "hprs/mdp.hpp"

namespace hprs {

// Ring track parsed from ASCII art: `#` wall, `.` free, `S` start, digits
// waypoints in driving order. The free cells must form a single one-cell-wide
// loop bordered by walls; the route direction is the one that meets waypoint
// `1` first.
struct GridLayout {
    int width = 0;
    int height = 0;
    std::vector<std::string> rows;
    std::vector<std::pair<int, int>> route;  // (row, col) in driving order, route[0] is S
    std::vector<bool> corner;                // route turns when leaving this cell
    std::vector<double> wall_clearance;      // Manhattan distance to nearest wall minus 0.5

    static GridLayout parse(std::string_view ascii);  // throws Error{BadConfig}
};

// Discrete driving task on a ring track. The car state is (track progress d,
// speed v in {0,1,2}); one step first applies the action to the speed, then
// advances d by the new speed. Leaving a corner needs the turn-right action;
// any turn on a straight, a wrong action on a corner while moving, or passing
// a corner mid-move at speed 2 crashes the car. With probability `slip` the
// intended action degrades to coast. Completing the loop ends the lap.
//
// Exposed variables: L (lap progress in [0,1]), v, d_walls (signed clearance,
// negative once crashed).
class GridDriveEnv {
public:
    enum Action { Coast = 0, Accelerate = 1, Brake = 2, TurnLeft = 3, TurnRight = 4 };
    static constexpr int kNumActions = 5;

    struct Config {
        double slip = 0.1;
        int horizon = 40;
    };

    explicit GridDriveEnv(GridLayout layout) : GridDriveEnv(std::move(layout), Config()) {}
    GridDriveEnv(GridLayout layout, Config cfg);

    // Key-value lines (`slip = 0.1`, `horizon = 40`) followed by a `map:`
    // line and the ASCII art.
    static GridDriveEnv from_config_text(std::string_view text);

    int num_states() const { return num_states_; }
    int route_length() const { return static_cast<int>(layout_.route.size()); }
    int start_state() const { return 0; }
    int crash_state() const { return crash_; }
    int goal_state() const { return goal_; }
    bool is_terminal(int s) const { return s == crash_ || s == goal_; }
    int horizon() const { return cfg_.horizon; }
    double slip() const { return cfg_.slip; }
    const GridLayout& layout() const { return layout_; }

    StateSample features(int s) const;

    int reset_index(std::uint64_t seed) const;
    StateSample reset(std::uint64_t seed) const;

    // Successor under the applied action with no slip.
    int deterministic_step(int s, Action applied) const;

    // Samples the slip, then steps. Throws Error{InvalidAction}.
    int sample_transition(int s, int a, std::mt19937_64& rng) const;

    // Exact model of the same dynamics.
    const FiniteMDP& model() const { return model_; }

private:
    GridLayout layout_;
    Config cfg_;
    int num_states_ = 0;
    int crash_ = 0;
    int goal_ = 0;
    FiniteMDP model_;

    int pack(int d, int v) const { return d * 3 + v; }
    void build_model();
};

// Planar point mass steered by bounded acceleration, integrated with an
// explicit Euler step; the analogue of a landing task with a disk obstacle
// between the start and the goal at the origin.
//
// Exposed variables: x, y, vx, vy, d_goal, d_obstacle (signed), speed, a_mag.
class PointMassEnv {
public:
    struct Config {
        double dt = 0.1;
        double pos_limit = 1.5;  // positions are clamped to [-pos_limit, pos_limit]
        double vel_limit = 1.0;
        double start_y = 1.0;
        double start_x_offset = 0.1;
        double obstacle_x = 0.0;
        double obstacle_y = 0.5;
        double obstacle_r = 0.2;
        int horizon = 120;
    };

    PointMassEnv() : PointMassEnv(Config()) {}
    explicit PointMassEnv(Config cfg);
    static PointMassEnv from_config_text(std::string_view text);

    const Config& config() const { return cfg_; }
    int horizon() const { return cfg_.horizon; }

    StateSample reset(std::uint64_t seed) const;

    // Applies accelerations (clamped to [-1, 1]) for one dt.
    // Throws Error{InvalidAction} on non-finite inputs.
    StateSample step(const StateSample& s, double ax, double ay) const;

private:
    Config cfg_;

    StateSample with_derived(double x, double y, double vx, double vy, double ax, double ay) const;
};

}  // namespace hprs

#endif  // HPRS_ENVS_HPP
