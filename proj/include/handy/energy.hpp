// Per-node energy accounting. Time is partitioned into mode buckets as it
// is accounted; energy is derived from the buckets at read time, so the
// per-mode energies always sum exactly to the total.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace handy {

enum class EnergyMode : uint8_t { Sleep = 0, Idle, Receive, Transmit, Sense };
inline constexpr size_t kEnergyModeCount = 5;

struct PowerProfile {
    double transmit = 1.4;  // watts
    double receive = 1.0;
    double idle = 0.83;
    double sleep = 0.13;
    double sense = 1.0;

    double powerOf(EnergyMode m) const;
};

// Radio activity is reported as windows; overlapping windows of one kind
// merge by extending the end. Every accounted instant lands in exactly one
// bucket, picked by priority: transmit beats receive beats sense beats the
// base mode (idle, or sleep if set). Window starts must not precede time
// already accounted.
class EnergyLedger {
  public:
    EnergyLedger() = default;
    explicit EnergyLedger(PowerProfile profile, double start_time = 0.0);

    void noteTransmit(double from, double until);
    void noteReceive(double from, double until);
    void noteSense(double from, double until);
    void setBaseMode(EnergyMode m);  // Idle or Sleep

    // Accounts [accountedTo(), t]. Never rewinds.
    void accrueTo(double t);

    double accountedTo() const { return accounted_; }
    double durationIn(EnergyMode m) const;
    double totalDuration() const;
    double energyIn(EnergyMode m) const;
    double totalEnergy() const;

  private:
    void noteWindow(double& edge, double from, double until);
    void addDuration(EnergyMode m, double dt);

    PowerProfile profile_;
    double start_ = 0.0;
    double accounted_ = 0.0;
    double tx_until_ = 0.0;
    double rx_until_ = 0.0;
    double sense_until_ = 0.0;
    EnergyMode base_ = EnergyMode::Idle;

    std::array<double, kEnergyModeCount> bucket_{};
    std::array<double, kEnergyModeCount> comp_{};  // Kahan compensation
};

}  // namespace handy
