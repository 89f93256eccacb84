#include "handy/types.hpp"

namespace handy {

bool qosSatisfies(const QoSSpec& requested, const QoSSpec& offered) {
    for (const auto& req : requested.attributes) {
        const double* got = offered.find(req.name);
        if (got == nullptr || *got < req.value) return false;
    }
    return true;
}

}  // namespace handy
