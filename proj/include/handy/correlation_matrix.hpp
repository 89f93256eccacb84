// Boolean service correlation matrix used to drive workload generation.
//
// The shipped video-sharing fixture reproduces its source table cell for
// cell, including four one-directional cells. Consumers that need a
// relation ("are a and b correlated at all") use the symmetric view, which
// ORs the two directions.
#pragma once

#include <cstdint>
#include <vector>

#include "handy/rng.hpp"
#include "handy/types.hpp"

namespace handy {

class CorrelationMatrix {
  public:
    explicit CorrelationMatrix(size_t service_count);

    // The 25-service observation study matrix, verbatim.
    static CorrelationMatrix videoSharingFixture();

    // Independent fair draw per unordered pair against `density`; both
    // directions set together, diagonal left clear.
    static CorrelationMatrix randomSymmetric(size_t service_count, double density,
                                             Rng& rng);

    size_t serviceCount() const { return n_; }

    // Service ids are 1-based.
    void set(ServiceId a, ServiceId b, bool v);
    bool raw(ServiceId a, ServiceId b) const;
    bool correlated(ServiceId a, ServiceId b) const { return raw(a, b) || raw(b, a); }

    // Partners of `a` under the symmetric view, ascending id.
    std::vector<ServiceId> neighbors(ServiceId a) const;

  private:
    size_t index(ServiceId a, ServiceId b) const;

    size_t n_;
    std::vector<uint8_t> cells_;
};

}  // namespace handy
