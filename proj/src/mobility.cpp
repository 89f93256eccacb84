#include "handy/mobility.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace handy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Travel legs shorter than this collapse to a token duration so that leg-end
// events always advance time.
constexpr double kMinDistance = 1e-9;
constexpr double kTokenLegSeconds = 1e-3;

Leg travelLeg(double t0, Point from, Point to, double speed) {
    double dist = std::hypot(to.x - from.x, to.y - from.y);
    Leg leg;
    leg.start_time = t0;
    leg.from = from;
    leg.to = to;
    leg.end_time = dist < kMinDistance ? t0 + kTokenLegSeconds : t0 + dist / speed;
    return leg;
}

class Stationary final : public NodeMobility {
  public:
    explicit Stationary(const MobilityParams& p) : p_(p) {}

    Leg start(double t0, Rng& rng) override {
        Point at{rng.uniformReal(0.0, p_.width), rng.uniformReal(0.0, p_.height)};
        return {t0, kInf, at, at};
    }

    Leg next(double, Rng&) override {
        throw std::logic_error("stationary leg never completes");
    }

  private:
    MobilityParams p_;
};

class RandomWaypoint final : public NodeMobility {
  public:
    explicit RandomWaypoint(const MobilityParams& p) : p_(p) {}

    Leg start(double t0, Rng& rng) override {
        Point at{rng.uniformReal(0.0, p_.width), rng.uniformReal(0.0, p_.height)};
        return legFrom(t0, at, rng);
    }

    Leg next(double t, Rng& rng) override { return legFrom(t, here_, rng); }

  private:
    Leg legFrom(double t0, Point from, Rng& rng) {
        Point to{rng.uniformReal(0.0, p_.width), rng.uniformReal(0.0, p_.height)};
        double speed = rng.uniformReal(p_.speed_min, p_.speed_max);
        here_ = to;
        return travelLeg(t0, from, to, speed);
    }

    MobilityParams p_;
    Point here_;
};

class StreetGrid final : public NodeMobility {
  public:
    explicit StreetGrid(const MobilityParams& p) : p_(p) {
        if (p_.grid < 2) throw std::invalid_argument("street grid needs 2+ intersections per side");
    }

    Leg start(double t0, Rng& rng) override {
        cx_ = rng.uniformU32(static_cast<uint32_t>(p_.grid));
        cy_ = rng.uniformU32(static_cast<uint32_t>(p_.grid));
        px_ = cx_;
        py_ = cy_;
        return advance(t0, rng);
    }

    Leg next(double t, Rng& rng) override { return advance(t, rng); }

  private:
    Point pointAt(uint32_t ix, uint32_t iy) const {
        double sx = p_.width / static_cast<double>(p_.grid - 1);
        double sy = p_.height / static_cast<double>(p_.grid - 1);
        return {ix * sx, iy * sy};
    }

    Leg advance(double t0, Rng& rng) {
        struct Cell {
            uint32_t x, y;
        };
        std::vector<Cell> options;
        auto consider = [&](int64_t x, int64_t y) {
            if (x < 0 || y < 0 || x >= static_cast<int64_t>(p_.grid) ||
                y >= static_cast<int64_t>(p_.grid))
                return;
            options.push_back({static_cast<uint32_t>(x), static_cast<uint32_t>(y)});
        };
        consider(int64_t{cx_} - 1, cy_);
        consider(int64_t{cx_} + 1, cy_);
        consider(cx_, int64_t{cy_} - 1);
        consider(cx_, int64_t{cy_} + 1);

        // Avoid turning straight back unless the intersection is a dead end.
        std::vector<Cell> forward;
        for (const Cell& c : options)
            if (!(c.x == px_ && c.y == py_)) forward.push_back(c);
        const std::vector<Cell>& pool = forward.empty() ? options : forward;

        Cell pick = pool[rng.uniformU32(static_cast<uint32_t>(pool.size()))];
        double speed = rng.uniformReal(p_.speed_min, p_.speed_max);
        Leg leg = travelLeg(t0, pointAt(cx_, cy_), pointAt(pick.x, pick.y), speed);
        px_ = cx_;
        py_ = cy_;
        cx_ = pick.x;
        cy_ = pick.y;
        return leg;
    }

    MobilityParams p_;
    uint32_t cx_ = 0, cy_ = 0;  // current intersection
    uint32_t px_ = 0, py_ = 0;  // previous intersection
};

}  // namespace

Point Leg::positionAt(double t) const {
    if (t <= start_time || end_time <= start_time) return from;
    if (t >= end_time) return to;
    double f = (t - start_time) / (end_time - start_time);
    return {from.x + (to.x - from.x) * f, from.y + (to.y - from.y) * f};
}

std::unique_ptr<NodeMobility> makeMobility(const MobilityParams& params) {
    if (params.width <= 0.0 || params.height <= 0.0)
        throw std::invalid_argument("area dimensions must be positive");
    if (params.speed_min <= 0.0 || params.speed_max < params.speed_min)
        throw std::invalid_argument("speed range must be positive and ordered");
    switch (params.kind) {
        case MobilityParams::Kind::Stationary:
            return std::make_unique<Stationary>(params);
        case MobilityParams::Kind::RandomWaypoint:
            return std::make_unique<RandomWaypoint>(params);
        case MobilityParams::Kind::StreetGrid:
            return std::make_unique<StreetGrid>(params);
    }
    throw std::logic_error("unknown mobility kind");
}

}  // namespace handy
