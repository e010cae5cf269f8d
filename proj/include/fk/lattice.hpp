#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace fk {

struct SiteIndex {
    long k1 = 0;
    long k2 = 0;
};

// Sites (k1, k2) sit at position (h*k1, h*k2). The core range is
// [i1_min, i1_max] x [i2_min, i2_max]; storage extends it by `halo` rings.
struct Window {
    double h = 1.0;
    long i1_min = 0, i1_max = 0, i2_min = 0, i2_max = 0;
    int halo = 0;

    long s1_min() const { return i1_min - halo; }
    long s1_max() const { return i1_max + halo; }
    long s2_min() const { return i2_min - halo; }
    long s2_max() const { return i2_max + halo; }
    long nx() const { return i1_max - i1_min + 1 + 2L * halo; }
    long ny() const { return i2_max - i2_min + 1 + 2L * halo; }
    std::size_t size() const { return static_cast<std::size_t>(nx()) * static_cast<std::size_t>(ny()); }

    bool stores(long k1, long k2) const
    {
        return k1 >= s1_min() && k1 <= s1_max() && k2 >= s2_min() && k2 <= s2_max();
    }
    bool in_core(long k1, long k2) const
    {
        return k1 >= i1_min && k1 <= i1_max && k2 >= i2_min && k2 <= i2_max;
    }
    // Row-major with k1 as the row.
    std::size_t index(long k1, long k2) const
    {
        return static_cast<std::size_t>(k1 - s1_min()) * static_cast<std::size_t>(ny())
             + static_cast<std::size_t>(k2 - s2_min());
    }
    bool same_geometry(const Window& o) const
    {
        return h == o.h && i1_min == o.i1_min && i1_max == o.i1_max && i2_min == o.i2_min
            && i2_max == o.i2_max && halo == o.halo;
    }
};

// Indices -n..n on both axes with n = floor(radius/h).
Window make_window(double h, double radius, int halo);

using Closure = std::function<double(long k1, long k2)>;
using TailBound = std::function<double(double radius)>;

struct Field {
    Window win;
    std::vector<double> v;
    std::vector<unsigned char> ok;
    Closure closure;
    TailBound tail_bound;

    Field() = default;
    explicit Field(const Window& w) : win(w), v(w.size(), 0.0), ok(w.size(), 0) {}

    bool valid(long k1, long k2) const { return win.stores(k1, k2) && ok[win.index(k1, k2)]; }

    // Stored valid value, else closure value for unstored sites, else false.
    bool get(long k1, long k2, double& out) const
    {
        if (win.stores(k1, k2)) {
            std::size_t i = win.index(k1, k2);
            if (!ok[i]) return false;
            out = v[i];
            return true;
        }
        if (closure) {
            out = closure(k1, k2);
            return true;
        }
        return false;
    }

    // Throws stencil-out-of-range when get() fails.
    double at(long k1, long k2) const;

    void set(long k1, long k2, double x)
    {
        std::size_t i = win.index(k1, k2);
        v[i] = x;
        ok[i] = 1;
    }

    std::size_t valid_count() const;
};

// Same storage, core shrunk by `rings` on each side (those rings become halo).
Field with_halo(const Field& f, int rings);

// values[i] = closure(i) at every stored site; the closure is retained.
Field sample(const Closure& closure, const Window& w);

// CSV: '#'-prefixed key=value metadata, then "k1,k2,value" for valid sites.
std::string fmt17(double x);
void write_field_csv(std::ostream& os, const Field& f);
Field read_field_csv(std::istream& is);

} // namespace fk
