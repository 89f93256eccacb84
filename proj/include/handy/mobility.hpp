// Node mobility as piecewise-linear legs. The engine schedules one event at
// each leg end instead of ticking positions, so positions are exact at any
// query time.
#pragma once

#include <memory>
#include <utility>

#include "handy/rng.hpp"

namespace handy {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Leg {
    double start_time = 0.0;
    double end_time = 0.0;  // infinity for a node that never moves
    Point from;
    Point to;

    Point positionAt(double t) const;
};

class NodeMobility {
  public:
    virtual ~NodeMobility() = default;

    // Places the node and returns its first leg. Called exactly once.
    virtual Leg start(double t0, Rng& rng) = 0;

    // Next leg after the current one completes at time `t`.
    virtual Leg next(double t, Rng& rng) = 0;
};

struct MobilityParams {
    enum class Kind { Stationary, RandomWaypoint, StreetGrid };
    Kind kind = Kind::RandomWaypoint;
    double width = 500.0;
    double height = 500.0;
    double speed_min = 1.0;
    double speed_max = 20.0;
    size_t grid = 5;  // intersections per side, StreetGrid only
};

std::unique_ptr<NodeMobility> makeMobility(const MobilityParams& params);

}  // namespace handy
