#include "acbench/types.hpp"

namespace acbench {

const std::array<std::string, kNumFactors> kFactorNames = {
    "t_a_mean", "h_a_mean", "p_si_mean", "t_ri", "t_r_mean", "t_seg", "t_set_mean",
};

int factor_index(const std::string& name) {
    for (int i = 0; i < kNumFactors; ++i)
        if (kFactorNames[static_cast<size_t>(i)] == name) return i;
    return -1;
}

}  // namespace acbench
