#include <algorithm>
#include <cmath>
#include <sstream>

#include "hprs/envs.hpp"
#include "hprs/error.hpp"

namespace hprs {

PointMassEnv::PointMassEnv(Config cfg) : cfg_(cfg) {
    if (cfg_.dt <= 0.0) throw Error(Errc::BadConfig, "dt must be positive");
    if (cfg_.horizon <= 0) throw Error(Errc::BadConfig, "horizon must be positive");
    if (cfg_.obstacle_r <= 0.0) throw Error(Errc::BadConfig, "obstacle radius must be positive");
}

PointMassEnv PointMassEnv::from_config_text(std::string_view text) {
    Config cfg;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        std::string stripped = hash == std::string::npos ? line : line.substr(0, hash);
        const auto eq = stripped.find('=');
        if (stripped.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) {
            throw Error(Errc::BadConfig, "expected 'key = value', got '" + stripped + "'");
        }
        std::istringstream key_s(stripped.substr(0, eq));
        std::istringstream val_s(stripped.substr(eq + 1));
        std::string key;
        key_s >> key;
        double value = 0.0;
        if (key == "horizon") {
            val_s >> cfg.horizon;
        } else {
            val_s >> value;
        }
        if (val_s.fail()) throw Error(Errc::BadConfig, "bad value for '" + key + "'");
        if (key == "dt") cfg.dt = value;
        else if (key == "pos_limit") cfg.pos_limit = value;
        else if (key == "vel_limit") cfg.vel_limit = value;
        else if (key == "start_y") cfg.start_y = value;
        else if (key == "start_x_offset") cfg.start_x_offset = value;
        else if (key == "obstacle_x") cfg.obstacle_x = value;
        else if (key == "obstacle_y") cfg.obstacle_y = value;
        else if (key == "obstacle_r") cfg.obstacle_r = value;
        else if (key != "horizon") throw Error(Errc::BadConfig, "unknown point-mass option '" + key + "'");
    }
    return PointMassEnv(cfg);
}

StateSample PointMassEnv::with_derived(double x, double y, double vx, double vy, double ax,
                                       double ay) const {
    StateSample s;
    s["x"] = x;
    s["y"] = y;
    s["vx"] = vx;
    s["vy"] = vy;
    s["d_goal"] = std::hypot(x, y);
    s["d_obstacle"] = std::hypot(x - cfg_.obstacle_x, y - cfg_.obstacle_y) - cfg_.obstacle_r;
    s["speed"] = std::hypot(vx, vy);
    s["a_mag"] = std::hypot(ax, ay);
    return s;
}

StateSample PointMassEnv::reset(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offset(-cfg_.start_x_offset, cfg_.start_x_offset);
    return with_derived(offset(rng), cfg_.start_y, 0.0, 0.0, 0.0, 0.0);
}

StateSample PointMassEnv::step(const StateSample& s, double ax, double ay) const {
    if (!std::isfinite(ax) || !std::isfinite(ay)) {
        throw Error(Errc::InvalidAction, "acceleration must be finite");
    }
    ax = std::clamp(ax, -1.0, 1.0);
    ay = std::clamp(ay, -1.0, 1.0);
    const double vx = std::clamp(state_value(s, "vx") + ax * cfg_.dt, -cfg_.vel_limit, cfg_.vel_limit);
    const double vy = std::clamp(state_value(s, "vy") + ay * cfg_.dt, -cfg_.vel_limit, cfg_.vel_limit);
    const double x = std::clamp(state_value(s, "x") + vx * cfg_.dt, -cfg_.pos_limit, cfg_.pos_limit);
    const double y = std::clamp(state_value(s, "y") + vy * cfg_.dt, -cfg_.pos_limit, cfg_.pos_limit);
    return with_derived(x, y, vx, vy, ax, ay);
}

}  // namespace hprs
