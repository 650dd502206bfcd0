#pragma once

#include <array>
#include <cstdint>

namespace atsp {

/// Pipeline phase a point-pair evaluation is charged to.
enum class Phase : int { NetRefinement = 0, Flatness = 1, EdgeAssembly = 2, Tour = 3 };

inline constexpr int kPhaseCount = 4;

/// Counts point-pair distance evaluations, split by pipeline phase.
/// Complexity acceptance is stated in these counts, not wall time.
/// Counters only ever grow; concurrent tasks own separate meters and
/// merge them with operator+= afterwards.
struct DistanceMeter {
    std::array<std::uint64_t, kPhaseCount> by_phase{};
    Phase phase = Phase::NetRefinement;

    void tick() { ++by_phase[static_cast<int>(phase)]; }

    std::uint64_t count(Phase p) const { return by_phase[static_cast<int>(p)]; }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto c : by_phase) t += c;
        return t;
    }

    DistanceMeter& operator+=(const DistanceMeter& other) {
        for (int i = 0; i < kPhaseCount; ++i) by_phase[i] += other.by_phase[i];
        return *this;
    }
};

/// Switches a meter's phase for the current scope.
class PhaseScope {
public:
    PhaseScope(DistanceMeter& meter, Phase p) : meter_(meter), saved_(meter.phase) {
        meter_.phase = p;
    }
    ~PhaseScope() { meter_.phase = saved_; }
    PhaseScope(const PhaseScope&) = delete;
    PhaseScope& operator=(const PhaseScope&) = delete;

private:
    DistanceMeter& meter_;
    Phase saved_;
};

} // namespace atsp
