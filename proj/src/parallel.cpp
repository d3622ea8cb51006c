#include "qgeom/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace qgeom {

int configured_threads() {
    if (const char* env = std::getenv("QGEOM_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

}  // namespace qgeom
