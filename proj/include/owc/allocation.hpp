#pragma once

#include <vector>

namespace owc {

// One AP index and one mirror index per user. mirror_of may hold the scene's
// reserved null index, which contributes zero reflected gain.
struct Allocation {
    std::vector<int> ap_of;
    std::vector<int> mirror_of;

    bool operator==(const Allocation&) const = default;
};

}  // namespace owc
