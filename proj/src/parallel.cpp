#include "fk/parallel.hpp"
#include "fk/error.hpp"

#include <cstdlib>
#include <omp.h>

namespace fk {

const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::sampling_failure: return "sampling-failure";
    case ErrorKind::stencil_out_of_range: return "stencil-out-of-range";
    case ErrorKind::window_mismatch: return "window-mismatch";
    case ErrorKind::support_violation: return "support-violation";
    case ErrorKind::evaluation_error: return "evaluation-error";
    case ErrorKind::equation_residual_too_large: return "equation-residual-too-large";
    case ErrorKind::hypothesis_violation: return "hypothesis-violation";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::io: return "io";
    }
    return "error";
}

namespace par {

namespace {
thread_local bool g_serial = false;

int env_cap()
{
    const char* s = std::getenv("FK_THREADS");
    if (!s || !*s) return 0;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == s || v < 1) return 0;
    return static_cast<int>(v);
}
} // namespace

namespace detail {
bool serial_forced() { return g_serial; }
}

int threads()
{
    if (g_serial) return 1;
    int n = omp_get_max_threads();
    int cap = env_cap();
    if (cap > 0 && cap < n) n = cap;
    return n < 1 ? 1 : n;
}

SerialScope::SerialScope() : prev_(g_serial) { g_serial = true; }
SerialScope::~SerialScope() { g_serial = prev_; }

} // namespace par
} // namespace fk
