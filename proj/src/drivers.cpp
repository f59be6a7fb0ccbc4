#include "slelab/drivers.hpp"
#include "slelab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace slelab {

namespace {

// positive root of D'^2 - (D + drift_free)D' - c*dt = 0, the absorbed
// implicit Euler step for dD = (c/D)dt + (noise and bounded drift)
inline double implicit_gap_step(double d_plus_noise, double c_dt) {
    double h = 0.5 * d_plus_noise;
    return h + std::sqrt(h * h + c_dt);
}

} // namespace

DriverPath simulate_driver(const SleParams& p, double dt, double t_max, std::uint64_t seed,
                           std::uint64_t stream) {
    require(dt > 0.0, Guard::bad_argument, "simulate_driver: dt > 0");
    require(dt <= 1e-2, Guard::step_too_large, "simulate_driver: dt > 1e-2");
    require(t_max >= 0.0, Guard::bad_argument, "simulate_driver: t_max >= 0");

    double a = p.a();
    double c = a * (2.0 + p.rho) / 2.0; // gap drift; Bessel dimension 1 + a(2+rho)
    std::size_t n = static_cast<std::size_t>(std::llround(t_max / dt));

    DriverPath path;
    path.dt = dt;
    path.a = a;
    path.rho = p.rho;
    path.seed = seed;
    path.stream = stream;
    path.non_hitting_regime = (p.rho >= p.kappa / 2.0 - 2.0);
    path.w.resize(n + 1);
    path.v.assign(1, std::vector<double>(n + 1));

    RngStream rng(seed, stream);
    double w = 0.0, v = p.x_r, d = p.x_r;
    path.w[0] = w;
    path.v[0][0] = v;

    std::size_t k0 = 0;
    if (p.x_r == 0.0 && n > 0) {
        // gap starts at zero: bootstrap with the exact squared-Bessel mean
        double delta_b = 1.0 + a * (2.0 + p.rho);
        d = std::sqrt(delta_b * dt);
        w += a * dt / d - d;
        v = w + d;
        path.w[1] = w;
        path.v[0][1] = v;
        k0 = 1;
    }
    for (std::size_t k = k0; k < n; ++k) {
        double db = rng.normal() * std::sqrt(dt);
        d = implicit_gap_step(d - db, c * dt);
        w += db - a * p.rho / 2.0 * dt / d;
        v = w + d;
        path.w[k + 1] = w;
        path.v[0][k + 1] = v;
    }
    return path;
}

namespace {

struct SidePoint {
    double v;
    double rho;
    bool swallowed = false;
};

struct SideState {
    std::vector<SidePoint> pts; // ordered outward from the origin
    double merged_gap = 0.0;    // |V - W| of the swallowed cluster image
    double merged_rho = 0.0;    // cumulative swallowed weight
    bool merged = false;
};

} // namespace

DriverPath simulate_driver_multi(double kappa, const MultiForceConfig& cfg, double dt,
                                 double t_max, std::uint64_t seed, std::uint64_t stream) {
    require(kappa > 0.0, Guard::bad_argument, "simulate_driver_multi: kappa > 0");
    require(dt > 0.0 && dt <= 1e-2, Guard::step_too_large, "simulate_driver_multi: bad dt");
    require(cfg.x_left.size() == cfg.rho_left.size() && cfg.x_right.size() == cfg.rho_right.size(),
            Guard::bad_argument, "simulate_driver_multi: weight/point size mismatch");
    for (std::size_t j = 0; j + 1 < cfg.x_right.size(); ++j)
        require(cfg.x_right[j] < cfg.x_right[j + 1], Guard::force_point_collision,
                "right force points must be strictly increasing");
    for (std::size_t j = 0; j + 1 < cfg.x_left.size(); ++j)
        require(cfg.x_left[j] > cfg.x_left[j + 1], Guard::force_point_collision,
                "left force points must be strictly decreasing");
    for (double xr : cfg.x_right) require(xr >= 0.0, Guard::bad_argument, "x_right >= 0");
    for (double xl : cfg.x_left) require(xl <= 0.0, Guard::bad_argument, "x_left <= 0");

    double a = 2.0 / kappa;
    std::size_t nsteps = static_cast<std::size_t>(std::llround(t_max / dt));
    std::size_t ncols = cfg.x_right.size() + cfg.x_left.size();

    DriverPath path;
    path.dt = dt;
    path.a = a;
    path.rho = 0.0;
    path.seed = seed;
    path.stream = stream;
    path.w.resize(nsteps + 1);
    path.v.assign(std::max<std::size_t>(ncols, 1), std::vector<double>(nsteps + 1));

    RngStream rng(seed, stream);
    double w = 0.0;
    SideState right, left;
    for (std::size_t j = 0; j < cfg.x_right.size(); ++j)
        right.pts.push_back({cfg.x_right[j], cfg.rho_right[j]});
    for (std::size_t j = 0; j < cfg.x_left.size(); ++j)
        left.pts.push_back({cfg.x_left[j], cfg.rho_left[j]});
    // a force point sitting at the origin is swallowed from the start
    auto absorb_origin = [&](SideState& s) {
        for (auto& pt : s.pts)
            if (!pt.swallowed && pt.v == 0.0) {
                pt.swallowed = true;
                s.merged = true;
                s.merged_rho += pt.rho;
            }
    };
    absorb_origin(right);
    absorb_origin(left);

    bool hit = false;
    std::size_t hit_at = 0;

    auto min_active_dist = [&](double wcur) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& pt : right.pts)
            if (!pt.swallowed) m = std::min(m, std::fabs(pt.v - wcur));
        for (const auto& pt : left.pts)
            if (!pt.swallowed) m = std::min(m, std::fabs(pt.v - wcur));
        return m;
    };

    // one Euler leaf step of size h; splits in half near active collisions
    auto leaf = [&](double h) {
        double drift = 0.0;
        for (const auto& pt : right.pts)
            if (!pt.swallowed) drift += a * pt.rho / 2.0 / (w - pt.v);
        for (const auto& pt : left.pts)
            if (!pt.swallowed) drift += a * pt.rho / 2.0 / (w - pt.v);

        double db = rng.normal() * std::sqrt(h);
        double dw_free = db + drift * h; // everything except merged-gap self terms

        double new_gap_r = 0.0, new_gap_l = 0.0;
        if (right.merged) {
            double cross = left.merged ? a * left.merged_rho / 2.0 / left.merged_gap * h : 0.0;
            double cr = a * (2.0 + right.merged_rho) / 2.0;
            new_gap_r = implicit_gap_step(right.merged_gap - dw_free - cross, cr * h);
        }
        if (left.merged) {
            double cross = right.merged ? -a * right.merged_rho / 2.0 / right.merged_gap * h : 0.0;
            double cl = a * (2.0 + left.merged_rho) / 2.0;
            new_gap_l = implicit_gap_step(left.merged_gap + dw_free + cross, cl * h);
        }
        double dw = dw_free;
        if (right.merged) dw -= a * right.merged_rho / 2.0 * h / new_gap_r;
        if (left.merged) dw += a * left.merged_rho / 2.0 * h / new_gap_l;

        for (auto& pt : right.pts)
            if (!pt.swallowed) pt.v += a * h / (pt.v - w);
        for (auto& pt : left.pts)
            if (!pt.swallowed) pt.v += a * h / (pt.v - w);
        w += dw;
        if (right.merged) right.merged_gap = new_gap_r;
        if (left.merged) left.merged_gap = new_gap_l;
    };

    std::function<void(double, int)> step = [&](double h, int depth) {
        if (depth < 20 && min_active_dist(w) < std::sqrt(h)) {
            step(h / 2.0, depth + 1);
            step(h / 2.0, depth + 1);
        } else {
            leaf(h);
        }
    };

    auto swallow_scan = [&](SideState& s, double sign) -> bool {
        // sign +1 for right (swallow when v <= w), -1 for left
        for (auto& pt : s.pts) {
            if (pt.swallowed) continue;
            if (sign * (pt.v - w) <= 0.0) {
                pt.swallowed = true;
                s.merged = true;
                s.merged_rho += pt.rho;
                s.merged_gap = std::max(sign * (pt.v - w), 0.0);
                if (s.merged_rho <= -2.0) return true;
            }
        }
        return false;
    };

    auto record = [&](std::size_t k) {
        path.w[k] = w;
        std::size_t col = 0;
        for (const auto& pt : right.pts)
            path.v[col++][k] = pt.swallowed ? w + right.merged_gap : pt.v;
        for (const auto& pt : left.pts)
            path.v[col++][k] = pt.swallowed ? w - left.merged_gap : pt.v;
        if (ncols == 0) path.v[0][k] = w;
    };

    record(0);
    if (right.merged_rho <= -2.0 || left.merged_rho <= -2.0) {
        hit = true;
        hit_at = 0;
    }
    std::size_t k = 0;
    for (; k < nsteps && !hit; ++k) {
        step(dt, 0);
        if (swallow_scan(right, +1.0) || swallow_scan(left, -1.0)) {
            hit = true;
            hit_at = k + 1;
        }
        record(k + 1);
    }
    if (hit) {
        path.continuation_hit = hit_at;
        path.w.resize(k + 1);
        for (auto& col : path.v) col.resize(k + 1);
    }
    return path;
}

} // namespace slelab
