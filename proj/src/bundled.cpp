#include "hprs/bundled.hpp"

#include "hprs/error.hpp"

namespace hprs::bundled {

namespace {

constexpr std::string_view kGriddriveSpec = R"(# Ring-track driving task for the bundled grid environment.
var L in [0.0, 1.0]
var v in [0.0, 2.0]
var d_walls in [-1.0, 3.0]

ensure "no_collision": d_walls > 0
achieve "lap": L == 1.0 tol 0.01
encourage "min_speed": v >= 1.0
encourage "max_speed": v <= 1.5
)";

constexpr std::string_view kPointmassSpec = R"(# Planar point-mass navigation: settle on the goal, avoid the obstacle disk.
var x in [-1.5, 1.5]
var y in [-1.5, 1.5]
var d_goal in [0.0, 3.0]
var d_obstacle in [-0.5, 3.0]
var speed in [0.0, 1.5]
var a_mag in [0.0, 1.5]

ensure "avoid_obstacle": d_obstacle > 0
ensure "stay_in_bounds": |x| <= 1.2
conquer "hold_goal": d_goal == 0.0 tol 0.2
encourage "gentle_speed": speed <= 0.8
encourage "gentle_controls": a_mag <= 0.5
)";

constexpr std::string_view kGridSmallConfig = R"(# Small ring track: 12 route cells, 38 tabular states.
slip = 0.1
horizon = 40
map:
######
#.S.1#
#.##.#
#.##.#
#3..2#
######
)";

constexpr std::string_view kGridLargeConfig = R"(# Larger ring track: 20 route cells, 62 tabular states.
slip = 0.15
horizon = 60
map:
########
#.S...1#
#.####.#
#.####.#
#.####.#
#.####.#
#3....2#
########
)";

constexpr std::string_view kPointmassConfig = R"(# Point-mass navigator matching specs/pointmass.req.
dt = 0.1
pos_limit = 1.5
vel_limit = 1.0
start_y = 1.0
start_x_offset = 0.1
obstacle_x = 0.0
obstacle_y = 0.5
obstacle_r = 0.2
horizon = 120
)";

constexpr std::string_view kRandomAchieveSpec = R"(var z1 in [-1.0, 1.0]
var z2 in [-1.0, 1.0]
var z3 in [-1.0, 1.0]
ensure "z1_floor": z1 >= -0.8
achieve "z2_high": z2 >= 0.5
encourage "z3_low": z3 <= 0.3
encourage "z1_positive": z1 >= 0.1
)";

constexpr std::string_view kRandomConquerSpec = R"(var z1 in [-1.0, 1.0]
var z2 in [-1.0, 1.0]
var z3 in [-1.0, 1.0]
ensure "inside_box": abs(z1) <= 0.9
conquer "settle": z2 == 0.0 tol 0.25
encourage "balanced": min(z1, z2) >= -0.5
encourage "mild_z3": abs(z3 - 0.2) <= 0.6
)";

TaskSpec task_from_text(std::string_view text, const char* what) {
    auto parsed = parse_spec(text, what);
    if (!parsed.ok()) {
        throw Error(Errc::BadConfig, std::string("bundled spec '") + what + "' failed to parse");
    }
    return TaskSpec::validate(parsed.draft);
}

}  // namespace

std::string_view griddrive_spec_text() { return kGriddriveSpec; }
std::string_view pointmass_spec_text() { return kPointmassSpec; }
std::string_view grid_small_config_text() { return kGridSmallConfig; }
std::string_view grid_large_config_text() { return kGridLargeConfig; }
std::string_view pointmass_config_text() { return kPointmassConfig; }

TaskSpec griddrive_task() { return task_from_text(kGriddriveSpec, "griddrive.req"); }
TaskSpec pointmass_task() { return task_from_text(kPointmassSpec, "pointmass.req"); }

GridDriveEnv grid_small() { return GridDriveEnv::from_config_text(kGridSmallConfig); }
GridDriveEnv grid_large() { return GridDriveEnv::from_config_text(kGridLargeConfig); }

FiniteMDP make_random_mdp(std::uint64_t seed, int num_states, int num_actions,
                          const TaskSpec& task, int num_terminal) {
    if (num_terminal < 0 || num_terminal >= num_states) {
        throw Error(Errc::BadConfig, "terminal count must be in [0, num_states)");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    FiniteMDP mdp;
    mdp.num_states = num_states;
    mdp.num_actions = num_actions;
    mdp.horizon = 50;
    mdp.terminal.assign(num_states, false);
    for (int s = 0; s < num_terminal; ++s) mdp.terminal[s] = true;

    mdp.P.assign(num_actions, Eigen::MatrixXd::Zero(num_states, num_states));
    for (int a = 0; a < num_actions; ++a) {
        for (int s = 0; s < num_states; ++s) {
            if (mdp.terminal[s]) {
                mdp.P[a](s, s) = 1.0;
                continue;
            }
            double total = 0.0;
            for (int s2 = 0; s2 < num_states; ++s2) {
                const double w = unif(rng);
                mdp.P[a](s, s2) = w;
                total += w;
            }
            mdp.P[a].row(s) /= total;
        }
    }

    mdp.initial = Eigen::VectorXd::Zero(num_states);
    int live = 0;
    for (int s = 0; s < num_states; ++s) live += mdp.terminal[s] ? 0 : 1;
    for (int s = 0; s < num_states; ++s) {
        if (!mdp.terminal[s]) mdp.initial[s] = 1.0 / live;
    }

    for (int s = 0; s < num_states; ++s) {
        StateSample features;
        for (const auto& d : task.decls()) {
            features[d.name] = d.lo + (d.hi - d.lo) * unif(rng);
        }
        mdp.features.push_back(std::move(features));
        mdp.state_labels.push_back("s" + std::to_string(s));
    }
    mdp.check();
    return mdp;
}

std::vector<VerificationCase> verification_cases() {
    std::vector<VerificationCase> cases;
    {
        VerificationCase c;
        c.name = "grid-small";
        c.task = griddrive_task();
        c.mdp = grid_small().model();
        cases.push_back(std::move(c));
    }
    {
        VerificationCase c;
        c.name = "grid-large";
        c.task = griddrive_task();
        c.mdp = grid_large().model();
        cases.push_back(std::move(c));
    }
    {
        VerificationCase c;
        c.name = "random-achieve";
        c.task = task_from_text(kRandomAchieveSpec, "random-achieve");
        c.mdp = make_random_mdp(20240601, 24, 3, c.task, 2);
        cases.push_back(std::move(c));
    }
    {
        VerificationCase c;
        c.name = "random-conquer";
        c.task = task_from_text(kRandomConquerSpec, "random-conquer");
        c.mdp = make_random_mdp(20240602, 30, 4, c.task, 3);
        cases.push_back(std::move(c));
    }
    return cases;
}

}  // namespace hprs::bundled
