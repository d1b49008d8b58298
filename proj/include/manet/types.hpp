#pragma once

#include <cstdint>

namespace manet {

using NodeId = int;

enum class Protocol { dsr, essdsr };

inline const char* protocol_name(Protocol p) {
    return p == Protocol::dsr ? "dsr" : "essdsr";
}

}  // namespace manet
