#ifndef GBM_VERSION_HPP
#define GBM_VERSION_HPP

namespace gbm {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
