#pragma once

// Row-parallel loops and reductions with a fixed combination order.
// Partial sums are formed per row and added in row order, so the result
// does not depend on the number of threads.

#include <exception>
#include <vector>

namespace fk::par {

// min(omp max threads, FK_THREADS) unless a SerialScope is active.
int threads();

// Forces single-threaded execution on the calling thread while alive.
class SerialScope {
public:
    SerialScope();
    ~SerialScope();
    SerialScope(const SerialScope&) = delete;
    SerialScope& operator=(const SerialScope&) = delete;

private:
    bool prev_;
};

namespace detail {
bool serial_forced();
}

template <class F>
void for_rows(long n, F&& body)
{
    const int nt = threads();
    std::exception_ptr err;
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
    for (long r = 0; r < n; ++r) {
        try {
            body(r);
        } catch (...) {
#pragma omp critical(fk_par_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

template <class F>
double ordered_sum(long n, F&& row_sum)
{
    std::vector<double> part(static_cast<size_t>(n), 0.0);
    for_rows(n, [&](long r) { part[static_cast<size_t>(r)] = row_sum(r); });
    double s = 0.0;
    for (double p : part) s += p;
    return s;
}

template <class F>
double ordered_max(long n, F&& row_max, double init = 0.0)
{
    std::vector<double> part(static_cast<size_t>(n), init);
    for_rows(n, [&](long r) { part[static_cast<size_t>(r)] = row_max(r); });
    double m = init;
    for (double p : part)
        if (p > m) m = p;
    return m;
}

} // namespace fk::par
