#include "qk/novikov.hpp"

namespace qk {

namespace {
void enumerate(int r, int cutoff, int pos, int used, Degree& cur, std::vector<Degree>& out) {
    if (pos == r) {
        out.push_back(cur);
        return;
    }
    for (int v = 0; v <= cutoff - used; ++v) {
        cur.d[pos] = v;
        enumerate(r, cutoff, pos + 1, used + v, cur, out);
    }
    cur.d[pos] = 0;
}
}  // namespace

std::vector<Degree> all_degrees(int r, int cutoff) {
    std::vector<Degree> out;
    Degree cur = Degree::zero(r);
    enumerate(r, cutoff, 0, 0, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Degree> degrees_below(const Degree& d) {
    std::vector<Degree> out;
    Degree cur = Degree::zero(d.rank());
    out.push_back(cur);
    while (true) {
        int i = d.rank() - 1;
        while (i >= 0 && cur.d[i] == d.d[i]) {
            cur.d[i] = 0;
            --i;
        }
        if (i < 0) break;
        ++cur.d[i];
        out.push_back(cur);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace qk
