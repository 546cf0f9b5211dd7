#include "sflda/parallel.hpp"

#include <cstdlib>
#include <string>

namespace sflda {

std::size_t default_thread_count() {
    if (const char* env = std::getenv("SFLDA_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n >= 1) return static_cast<std::size_t>(n);
        } catch (...) {
        }
    }
    return 1;
}

}  // namespace sflda
