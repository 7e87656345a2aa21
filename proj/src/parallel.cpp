#include "eec/parallel.hpp"

#include <cstdlib>
#include <string>

namespace eec {

unsigned worker_count()
{
    if (const char* env = std::getenv("EEC_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0)
                return static_cast<unsigned>(v);
        } catch (...) {
            // fall through to the hardware count
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

}  // namespace eec
