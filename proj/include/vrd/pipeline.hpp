#pragma once

#include <cstdint>

#include "vrd/model.hpp"
#include "vrd/search.hpp"

namespace vrd {

struct StageResult {
    Solution solution;
    double objective = 0.0;
    double seconds = 0.0;  // wall clock of this stage alone
};

struct SolveResult {
    StageResult pre_initial;  // mTSP, drones idle
    StageResult initial;      // drones distributed, SpeedUp1 applied
    StageResult final;        // after OuterSearch
};

enum class Stage { PreInitial, Initial, Final };

/// mTSP, then the initial solution, then OuterSearch, stopping after `up_to`. Each stage draws
/// from its own stream derived from `seed` and the stage config's seed, so stopping early does
/// not change the stages that ran.
SolveResult solve(const Instance& inst, const PhaseConfigs& cfg, std::uint64_t seed, Stage up_to = Stage::Final);

/// The mTSP stage alone, seeded like in solve().
Solution solve_pre_initial(const Instance& inst, const PhaseConfigs& cfg, std::uint64_t seed);

}  // namespace vrd
