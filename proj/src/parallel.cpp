#include "nettask/parallel.hpp"

#include <cstdlib>
#include <string>

namespace nettask {

unsigned default_workers() {
    if (const char* env = std::getenv("NETTASK_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace nettask
