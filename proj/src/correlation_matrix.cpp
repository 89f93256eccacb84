#include "handy/correlation_matrix.hpp"

#include <stdexcept>

namespace handy {

CorrelationMatrix::CorrelationMatrix(size_t service_count)
    : n_(service_count), cells_(service_count * service_count, 0) {
    if (n_ == 0) throw std::invalid_argument("matrix needs at least one service");
}

size_t CorrelationMatrix::index(ServiceId a, ServiceId b) const {
    if (a < 1 || a > n_ || b < 1 || b > n_)
        throw std::out_of_range("service id outside matrix");
    return (a - 1) * n_ + (b - 1);
}

void CorrelationMatrix::set(ServiceId a, ServiceId b, bool v) {
    cells_[index(a, b)] = v ? 1 : 0;
}

bool CorrelationMatrix::raw(ServiceId a, ServiceId b) const {
    return cells_[index(a, b)] != 0;
}

std::vector<ServiceId> CorrelationMatrix::neighbors(ServiceId a) const {
    std::vector<ServiceId> out;
    for (ServiceId b = 1; b <= n_; ++b)
        if (b != a && correlated(a, b)) out.push_back(b);
    return out;
}

CorrelationMatrix CorrelationMatrix::videoSharingFixture() {
    CorrelationMatrix m(25);
    auto row = [&m](ServiceId a, std::initializer_list<ServiceId> bs) {
        for (ServiceId b : bs) m.set(a, b, true);
    };
    row(3, {4, 5, 7});
    row(4, {3, 5, 7, 8});
    row(5, {3, 4, 7, 8});
    row(6, {7, 8, 10});
    row(7, {3, 4, 5, 6, 8});
    row(8, {4, 5, 6, 7});
    row(10, {6});
    row(13, {14, 15, 17});
    row(14, {13, 17, 18});
    row(15, {13, 17, 18});
    row(16, {17, 19});
    row(17, {13, 14, 15});
    row(18, {14, 15, 16});
    row(20, {15});
    return m;
}

CorrelationMatrix CorrelationMatrix::randomSymmetric(size_t service_count,
                                                     double density, Rng& rng) {
    if (density < 0.0 || density > 1.0)
        throw std::invalid_argument("density must lie in [0, 1]");
    CorrelationMatrix m(service_count);
    for (ServiceId a = 1; a <= service_count; ++a)
        for (ServiceId b = a + 1; b <= service_count; ++b)
            if (rng.bernoulli(density)) {
                m.set(a, b, true);
                m.set(b, a, true);
            }
    return m;
}

}  // namespace handy
