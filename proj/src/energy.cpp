#include "handy/energy.hpp"

#include <algorithm>
#include <stdexcept>

namespace handy {

double PowerProfile::powerOf(EnergyMode m) const {
    switch (m) {
        case EnergyMode::Sleep: return sleep;
        case EnergyMode::Idle: return idle;
        case EnergyMode::Receive: return receive;
        case EnergyMode::Transmit: return transmit;
        case EnergyMode::Sense: return sense;
    }
    throw std::logic_error("unknown energy mode");
}

EnergyLedger::EnergyLedger(PowerProfile profile, double start_time)
    : profile_(profile),
      start_(start_time),
      accounted_(start_time),
      tx_until_(start_time),
      rx_until_(start_time),
      sense_until_(start_time) {}

void EnergyLedger::noteWindow(double& edge, double from, double until) {
    if (from < accounted_) throw std::invalid_argument("activity starts in accounted past");
    if (until < from) throw std::invalid_argument("activity ends before it starts");
    accrueTo(from);
    edge = std::max(edge, until);
}

void EnergyLedger::noteTransmit(double from, double until) { noteWindow(tx_until_, from, until); }
void EnergyLedger::noteReceive(double from, double until) { noteWindow(rx_until_, from, until); }
void EnergyLedger::noteSense(double from, double until) { noteWindow(sense_until_, from, until); }

void EnergyLedger::setBaseMode(EnergyMode m) {
    if (m != EnergyMode::Idle && m != EnergyMode::Sleep)
        throw std::invalid_argument("base mode must be idle or sleep");
    base_ = m;
}

void EnergyLedger::addDuration(EnergyMode m, double dt) {
    auto i = static_cast<size_t>(m);
    double y = dt - comp_[i];
    double t = bucket_[i] + y;
    comp_[i] = (t - bucket_[i]) - y;
    bucket_[i] = t;
}

void EnergyLedger::accrueTo(double t) {
    while (accounted_ < t) {
        EnergyMode mode = base_;
        double boundary = t;
        if (tx_until_ > accounted_) {
            mode = EnergyMode::Transmit;
            boundary = std::min(boundary, tx_until_);
        } else if (rx_until_ > accounted_) {
            mode = EnergyMode::Receive;
            boundary = std::min(boundary, rx_until_);
        } else if (sense_until_ > accounted_) {
            mode = EnergyMode::Sense;
            boundary = std::min(boundary, sense_until_);
        }
        addDuration(mode, boundary - accounted_);
        accounted_ = boundary;
    }
}

double EnergyLedger::durationIn(EnergyMode m) const {
    return bucket_[static_cast<size_t>(m)];
}

double EnergyLedger::totalDuration() const {
    double sum = 0.0;
    for (double b : bucket_) sum += b;
    return sum;
}

double EnergyLedger::energyIn(EnergyMode m) const {
    return durationIn(m) * profile_.powerOf(m);
}

double EnergyLedger::totalEnergy() const {
    double sum = 0.0;
    for (size_t i = 0; i < kEnergyModeCount; ++i)
        sum += energyIn(static_cast<EnergyMode>(i));
    return sum;
}

}  // namespace handy
