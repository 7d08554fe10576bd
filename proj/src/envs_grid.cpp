#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hprs/envs.hpp"
#include "hprs/error.hpp"

namespace hprs {

namespace {

constexpr int kRowStep[4] = {0, 1, 0, -1};  // E, S, W, N
constexpr int kColStep[4] = {1, 0, -1, 0};

bool is_free_cell(char c) { return c == '.' || c == 'S' || (c >= '1' && c <= '9'); }

}  // namespace

GridLayout GridLayout::parse(std::string_view ascii) {
    GridLayout g;
    std::string row;
    std::istringstream in{std::string(ascii)};
    while (std::getline(in, row)) {
        while (!row.empty() && (row.back() == '\r' || row.back() == ' ')) row.pop_back();
        if (row.empty() && g.rows.empty()) continue;
        if (!row.empty()) g.rows.push_back(row);
    }
    if (g.rows.size() < 3) throw Error(Errc::BadConfig, "grid needs at least 3 rows");
    g.height = static_cast<int>(g.rows.size());
    g.width = static_cast<int>(g.rows.front().size());

    std::pair<int, int> start{-1, -1};
    std::map<char, std::pair<int, int>> waypoints;
    int free_cells = 0;
    for (int r = 0; r < g.height; ++r) {
        if (static_cast<int>(g.rows[r].size()) != g.width) {
            throw Error(Errc::BadConfig, "grid rows must all have the same width");
        }
        for (int c = 0; c < g.width; ++c) {
            const char ch = g.rows[r][c];
            if (ch == '#') continue;
            if (!is_free_cell(ch)) {
                throw Error(Errc::BadConfig, std::string("unexpected map character '") + ch + "'");
            }
            if (r == 0 || c == 0 || r == g.height - 1 || c == g.width - 1) {
                throw Error(Errc::BadConfig, "track must be enclosed by walls");
            }
            ++free_cells;
            if (ch == 'S') {
                if (start.first >= 0) throw Error(Errc::BadConfig, "more than one start cell");
                start = {r, c};
            } else if (ch != '.') {
                if (!waypoints.emplace(ch, std::make_pair(r, c)).second) {
                    throw Error(Errc::BadConfig, std::string("duplicate waypoint '") + ch + "'");
                }
            }
        }
    }
    if (start.first < 0) throw Error(Errc::BadConfig, "missing start cell 'S'");
    if (waypoints.empty() || !waypoints.count('1')) {
        throw Error(Errc::BadConfig, "need waypoint '1' to orient the route");
    }

    auto at = [&](int r, int c) { return g.rows[r][c]; };
    auto free_at = [&](int r, int c) {
        return r >= 0 && r < g.height && c >= 0 && c < g.width && is_free_cell(at(r, c));
    };
    auto free_neighbors = [&](std::pair<int, int> cell) {
        std::vector<std::pair<int, int>> out;
        for (int d = 0; d < 4; ++d) {
            const int r = cell.first + kRowStep[d], c = cell.second + kColStep[d];
            if (free_at(r, c)) out.emplace_back(r, c);
        }
        return out;
    };
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            if (is_free_cell(at(r, c)) && free_neighbors({r, c}).size() != 2) {
                throw Error(Errc::BadConfig, "track must be a single one-cell-wide loop");
            }
        }
    }

    auto walk = [&](std::pair<int, int> first) {
        std::vector<std::pair<int, int>> path{start, first};
        while (path.back() != start) {
            const auto nbrs = free_neighbors(path.back());
            const auto prev = path[path.size() - 2];
            path.push_back(nbrs[0] == prev ? nbrs[1] : nbrs[0]);
        }
        path.pop_back();  // closes the loop; keep each cell once
        return path;
    };
    auto steps_to_wp1 = [&](const std::vector<std::pair<int, int>>& path) {
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (at(path[i].first, path[i].second) == '1') return i;
        }
        return path.size();
    };
    const auto options = free_neighbors(start);
    const auto fwd = walk(options[0]);
    const auto bwd = walk(options[1]);
    g.route = steps_to_wp1(fwd) <= steps_to_wp1(bwd) ? fwd : bwd;
    if (static_cast<int>(g.route.size()) != free_cells) {
        throw Error(Errc::BadConfig, "free cells do not form a single loop");
    }

    // Waypoints must appear along the route in ascending order.
    char expected = '1';
    for (const auto& cell : g.route) {
        const char ch = at(cell.first, cell.second);
        if (ch >= '1' && ch <= '9') {
            if (ch != expected) {
                throw Error(Errc::BadConfig,
                            std::string("waypoint '") + ch + "' out of driving order");
            }
            ++expected;
        }
    }
    if (expected - '1' != static_cast<int>(waypoints.size())) {
        throw Error(Errc::BadConfig, "waypoints must be numbered consecutively from 1");
    }

    const std::size_t n = g.route.size();
    g.corner.assign(n, false);
    g.wall_clearance.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& prev = g.route[(i + n - 1) % n];
        const auto& here = g.route[i];
        const auto& next = g.route[(i + 1) % n];
        const auto din = std::make_pair(here.first - prev.first, here.second - prev.second);
        const auto dout = std::make_pair(next.first - here.first, next.second - here.second);
        g.corner[i] = din != dout;

        int nearest = std::numeric_limits<int>::max();
        for (int r = 0; r < g.height; ++r) {
            for (int c = 0; c < g.width; ++c) {
                if (at(r, c) == '#') {
                    nearest = std::min(nearest, std::abs(r - here.first) + std::abs(c - here.second));
                }
            }
        }
        g.wall_clearance[i] = nearest - 0.5;
    }
    return g;
}

GridDriveEnv::GridDriveEnv(GridLayout layout, Config cfg) : layout_(std::move(layout)), cfg_(cfg) {
    if (cfg_.slip < 0.0 || cfg_.slip >= 1.0) {
        throw Error(Errc::BadConfig, "slip probability must be in [0, 1)");
    }
    if (cfg_.horizon <= 0) throw Error(Errc::BadConfig, "horizon must be positive");
    const int live = route_length() * 3;
    crash_ = live;
    goal_ = live + 1;
    num_states_ = live + 2;
    build_model();
}

GridDriveEnv GridDriveEnv::from_config_text(std::string_view text) {
    Config cfg;
    std::string ascii;
    bool in_map = false;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
        if (in_map) {
            ascii += line;
            ascii += '\n';
            continue;
        }
        const auto hash = line.find('#');
        std::string stripped = hash == std::string::npos ? line : line.substr(0, hash);
        const auto last = stripped.find_last_not_of(" \t\r");
        stripped = last == std::string::npos ? std::string() : stripped.substr(0, last + 1);
        if (stripped.empty()) continue;
        if (stripped == "map:") {
            in_map = true;
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::BadConfig, "expected 'key = value' or 'map:', got '" + stripped + "'");
        }
        std::istringstream key_s(stripped.substr(0, eq));
        std::istringstream val_s(stripped.substr(eq + 1));
        std::string key;
        key_s >> key;
        if (key == "slip") {
            val_s >> cfg.slip;
        } else if (key == "horizon") {
            val_s >> cfg.horizon;
        } else {
            throw Error(Errc::BadConfig, "unknown grid option '" + key + "'");
        }
        if (val_s.fail()) throw Error(Errc::BadConfig, "bad value for '" + key + "'");
    }
    if (!in_map) throw Error(Errc::BadConfig, "grid config has no 'map:' section");
    return GridDriveEnv(GridLayout::parse(ascii), cfg);
}

StateSample GridDriveEnv::features(int s) const {
    const double len = route_length();
    if (s == crash_) return {{"L", 0.0}, {"v", 0.0}, {"d_walls", -0.5}};
    if (s == goal_) return {{"L", 1.0}, {"v", 1.0}, {"d_walls", 0.5}};
    const int d = s / 3;
    const int v = s % 3;
    return {{"L", d / len}, {"v", static_cast<double>(v)}, {"d_walls", layout_.wall_clearance[d]}};
}

int GridDriveEnv::reset_index(std::uint64_t) const { return pack(0, 0); }

StateSample GridDriveEnv::reset(std::uint64_t seed) const { return features(reset_index(seed)); }

int GridDriveEnv::deterministic_step(int s, Action applied) const {
    if (is_terminal(s)) return s;
    const int d = s / 3;
    const int v = s % 3;
    int v2 = v;
    switch (applied) {
        case Coast: break;
        case Accelerate: v2 = std::min(v + 1, 2); break;
        case Brake: v2 = std::max(v - 1, 0); break;
        case TurnLeft:
        case TurnRight: v2 = 1; break;
    }
    if (v2 == 0) return pack(d, 0);

    const bool turning = applied == TurnLeft || applied == TurnRight;
    if (layout_.corner[d]) {
        // the bend must be taken with the matching turn
        if (applied != TurnRight) return crash_;
    } else if (turning) {
        return crash_;  // veered off a straight
    }
    const int len = route_length();
    if (v2 == 2) {
        const int mid = d + 1;
        if (mid >= len) return goal_;  // crossed the finish on the first cell
        if (layout_.corner[mid]) return crash_;
    }
    const int d2 = d + v2;
    if (d2 >= len) return goal_;
    return pack(d2, v2);
}

int GridDriveEnv::sample_transition(int s, int a, std::mt19937_64& rng) const {
    if (a < 0 || a >= kNumActions) {
        throw Error(Errc::InvalidAction, "grid action index " + std::to_string(a) + " out of range");
    }
    // Slip models drivetrain misses: speed commands degrade to coast.
    // Steering is actuated reliably, so turns never slip.
    const bool can_slip = a != TurnLeft && a != TurnRight;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Action applied =
        can_slip && unif(rng) < cfg_.slip ? Coast : static_cast<Action>(a);
    return deterministic_step(s, applied);
}

void GridDriveEnv::build_model() {
    model_.num_states = num_states_;
    model_.num_actions = kNumActions;
    model_.horizon = cfg_.horizon;
    model_.terminal.assign(num_states_, false);
    model_.terminal[crash_] = true;
    model_.terminal[goal_] = true;
    model_.initial = Eigen::VectorXd::Zero(num_states_);
    model_.initial[start_state()] = 1.0;

    model_.P.assign(kNumActions, Eigen::MatrixXd::Zero(num_states_, num_states_));
    for (int a = 0; a < kNumActions; ++a) {
        const bool can_slip = a != TurnLeft && a != TurnRight;
        for (int s = 0; s < num_states_; ++s) {
            if (is_terminal(s)) {
                model_.P[a](s, s) = 1.0;
                continue;
            }
            const int intended = deterministic_step(s, static_cast<Action>(a));
            if (!can_slip) {
                model_.P[a](s, intended) = 1.0;
                continue;
            }
            model_.P[a](s, intended) += 1.0 - cfg_.slip;
            const int slipped = deterministic_step(s, Coast);
            model_.P[a](s, slipped) += cfg_.slip;
        }
    }

    model_.features.clear();
    model_.state_labels.clear();
    for (int s = 0; s < num_states_; ++s) {
        model_.features.push_back(features(s));
        if (s == crash_) {
            model_.state_labels.push_back("crash");
        } else if (s == goal_) {
            model_.state_labels.push_back("goal");
        } else {
            model_.state_labels.push_back("d=" + std::to_string(s / 3) +
                                          ",v=" + std::to_string(s % 3));
        }
    }
    model_.check();
}

}  // namespace hprs
