#ifndef HPRS_BUNDLED_HPP
#define HPRS_BUNDLED_HPP

#include <string_view>
#include <vector>

#include "hprs/envs.hpp"
#include "hprs/task.hpp"

namespace hprs::bundled {

// Task files shipped with the desk-scale environments; the same text lives
// under specs/ for CLI use.
std::string_view griddrive_spec_text();
std::string_view pointmass_spec_text();

// Track configurations mirrored under configs/.
std::string_view grid_small_config_text();
std::string_view grid_large_config_text();
std::string_view pointmass_config_text();

TaskSpec griddrive_task();
TaskSpec pointmass_task();

GridDriveEnv grid_small();
GridDriveEnv grid_large();

// Seeded dense random MDP whose state features are drawn from the declared
// variable boxes of `task`; `num_terminal` leading states are absorbing.
FiniteMDP make_random_mdp(std::uint64_t seed, int num_states, int num_actions,
                          const TaskSpec& task, int num_terminal);

struct VerificationCase {
    std::string name;
    FiniteMDP mdp;
    TaskSpec task;
};

// The finite MDPs the invariance oracle runs on: the two grid tracks plus
// two random MDPs (one achieve task, one conquer task). All under 100 states.
std::vector<VerificationCase> verification_cases();

}  // namespace hprs::bundled

#endif  // HPRS_BUNDLED_HPP
