#include "fk/lattice.hpp"
#include "fk/error.hpp"
#include "fk/parallel.hpp"

#include <climits>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace fk {

Window make_window(double h, double radius, int halo)
{
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::invalid_argument, "mesh h must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw Error(ErrorKind::invalid_argument, "radius must be positive");
    if (radius < h) throw Error(ErrorKind::invalid_argument, "radius must be at least h");
    if (halo < 0) throw Error(ErrorKind::invalid_argument, "halo must be nonnegative");
    // tolerance so that e.g. 1.0/0.1 counts 10 sites
    long n = static_cast<long>(std::floor(radius / h * (1.0 + 1e-12)));
    Window w;
    w.h = h;
    w.i1_min = w.i2_min = -n;
    w.i1_max = w.i2_max = n;
    w.halo = halo;
    return w;
}

double Field::at(long k1, long k2) const
{
    double x;
    if (!get(k1, k2, x))
        throw Error(ErrorKind::stencil_out_of_range,
                    "no value at site (" + std::to_string(k1) + "," + std::to_string(k2) + ")");
    return x;
}

std::size_t Field::valid_count() const
{
    std::size_t n = 0;
    for (unsigned char c : ok) n += c;
    return n;
}

Field sample(const Closure& closure, const Window& w)
{
    if (!closure) throw Error(ErrorKind::invalid_argument, "empty closure");
    Field f(w);
    const long nx = w.nx(), ny = w.ny();
    std::vector<long> bad(static_cast<std::size_t>(nx), LONG_MAX);
    par::for_rows(nx, [&](long r) {
        long k1 = w.s1_min() + r;
        for (long c = 0; c < ny; ++c) {
            long k2 = w.s2_min() + c;
            double x = closure(k1, k2);
            std::size_t i = w.index(k1, k2);
            f.v[i] = x;
            f.ok[i] = 1;
            if (!std::isfinite(x) && bad[static_cast<std::size_t>(r)] == LONG_MAX)
                bad[static_cast<std::size_t>(r)] = k2;
        }
    });
    for (long r = 0; r < nx; ++r) {
        if (bad[static_cast<std::size_t>(r)] != LONG_MAX)
            throw Error(ErrorKind::sampling_failure,
                        "non-finite value at site (" + std::to_string(w.s1_min() + r) + ","
                            + std::to_string(bad[static_cast<std::size_t>(r)]) + ")");
    }
    f.closure = closure;
    return f;
}

Field with_halo(const Field& f, int rings)
{
    if (rings < 0) throw Error(ErrorKind::invalid_argument, "rings must be nonnegative");
    Window w = f.win;
    w.i1_min += rings;
    w.i1_max -= rings;
    w.i2_min += rings;
    w.i2_max -= rings;
    w.halo += rings;
    if (w.i1_min > w.i1_max || w.i2_min > w.i2_max)
        throw Error(ErrorKind::invalid_argument, "window too small for requested halo");
    Field g = f;
    g.win = w;
    return g;
}

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_field_csv(std::ostream& os, const Field& f)
{
    const Window& w = f.win;
    os << "# h=" << fmt17(w.h) << "\n";
    os << "# i1_min=" << w.s1_min() << "\n# i1_max=" << w.s1_max() << "\n";
    os << "# i2_min=" << w.s2_min() << "\n# i2_max=" << w.s2_max() << "\n";
    os << "k1,k2,value\n";
    for (long k1 = w.s1_min(); k1 <= w.s1_max(); ++k1)
        for (long k2 = w.s2_min(); k2 <= w.s2_max(); ++k2)
            if (f.valid(k1, k2)) os << k1 << ',' << k2 << ',' << fmt17(f.v[w.index(k1, k2)]) << '\n';
}

Field read_field_csv(std::istream& is)
{
    std::map<std::string, std::string> meta;
    struct Row {
        long k1, k2;
        double x;
    };
    std::vector<Row> rows;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            while (!key.empty() && key.front() == ' ') key.erase(key.begin());
            meta[key] = line.substr(eq + 1);
            continue;
        }
        if (!header) {
            if (line != "k1,k2,value") throw Error(ErrorKind::io, "expected header k1,k2,value");
            header = true;
            continue;
        }
        std::istringstream ss(line);
        Row r{};
        char c1 = 0, c2 = 0;
        if (!(ss >> r.k1 >> c1 >> r.k2 >> c2 >> r.x) || c1 != ',' || c2 != ',')
            throw Error(ErrorKind::io, "malformed row: " + line);
        rows.push_back(r);
    }
    if (!header) throw Error(ErrorKind::io, "missing header");
    if (!meta.count("h")) throw Error(ErrorKind::io, "missing h metadata");
    if (rows.empty()) throw Error(ErrorKind::io, "no data rows");
    Window w;
    w.h = std::stod(meta["h"]);
    if (!(w.h > 0.0)) throw Error(ErrorKind::io, "h must be positive");
    w.i1_min = w.i1_max = rows[0].k1;
    w.i2_min = w.i2_max = rows[0].k2;
    for (const Row& r : rows) {
        w.i1_min = std::min(w.i1_min, r.k1);
        w.i1_max = std::max(w.i1_max, r.k1);
        w.i2_min = std::min(w.i2_min, r.k2);
        w.i2_max = std::max(w.i2_max, r.k2);
    }
    w.halo = 0;
    Field f(w);
    for (const Row& r : rows) f.set(r.k1, r.k2, r.x);
    return f;
}

} // namespace fk
