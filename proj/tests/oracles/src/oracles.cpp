#include "liftlab/oracles/oracles.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <map>

namespace liftlab::oracle {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw GuardExceeded(what);
}

Int power(Int base, unsigned e) {
    Int r = 1;
    while (e--) r *= base;
    return r;
}

// All k-subsets of `pool` (ascending) in lexicographic order.
void subsets_of_size(const std::vector<std::uint32_t>& pool, std::size_t k, std::size_t start,
                     std::vector<std::uint32_t>& cur, const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
    if (cur.size() == k) {
        fn(cur);
        return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
        cur.push_back(pool[i]);
        subsets_of_size(pool, k, i + 1, cur, fn);
        cur.pop_back();
    }
}

std::vector<std::uint32_t> remaining(unsigned blocks, const std::vector<std::uint32_t>& excluded) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < blocks; ++i)
        if (std::find(excluded.begin(), excluded.end(), i) == excluded.end()) out.push_back(i);
    return out;
}

Int count_matching(const PointList& s, const std::vector<std::uint32_t>& j, const std::vector<std::uint32_t>& alpha) {
    Int c = 0;
    for (const auto& x : s) {
        bool ok = true;
        for (std::size_t t = 0; t < j.size() && ok; ++t) ok = x[j[t]] == alpha[t];
        if (ok) ++c;
    }
    return c;
}

}  // namespace

Allowed from_function(const std::vector<int>& table) {
    Allowed a;
    for (int v : table) a.push_back(std::uint64_t{1} << v);
    return a;
}

int optimal_dt_height(const Allowed& allowed, unsigned n) {
    require(n <= 5 && allowed.size() == (std::size_t{1} << n), "optimal_dt_height needs n <= 5");
    // A restriction gives each variable 0, 1 or 2 (free); encoded base 3.
    std::map<std::vector<int>, int> memo;
    std::function<int(std::vector<int>&)> solve = [&](std::vector<int>& r) -> int {
        if (auto it = memo.find(r); it != memo.end()) return it->second;
        std::uint64_t common = ~std::uint64_t{0};
        for (std::uint64_t z = 0; z < allowed.size(); ++z) {
            bool consistent = true;
            for (unsigned i = 0; i < n && consistent; ++i) consistent = r[i] == 2 || int((z >> i) & 1U) == r[i];
            if (consistent) common &= allowed[z];
        }
        int best = 0;
        if (common == 0) {
            best = INT_MAX;
            for (unsigned i = 0; i < n; ++i) {
                if (r[i] != 2) continue;
                r[i] = 0;
                const int h0 = solve(r);
                r[i] = 1;
                const int h1 = solve(r);
                r[i] = 2;
                best = std::min(best, 1 + std::max(h0, h1));
            }
        }
        memo[r] = best;
        return best;
    };
    std::vector<int> r(n, 2);
    return solve(r);
}

int optimal_dt_size(const Allowed& allowed, unsigned n) {
    require(n <= 4 && allowed.size() == (std::size_t{1} << n), "optimal_dt_size needs n <= 4");
    std::map<std::vector<int>, int> memo;
    std::function<int(std::vector<int>&)> solve = [&](std::vector<int>& r) -> int {
        if (auto it = memo.find(r); it != memo.end()) return it->second;
        std::uint64_t common = ~std::uint64_t{0};
        for (std::uint64_t z = 0; z < allowed.size(); ++z) {
            bool consistent = true;
            for (unsigned i = 0; i < n && consistent; ++i) consistent = r[i] == 2 || int((z >> i) & 1U) == r[i];
            if (consistent) common &= allowed[z];
        }
        int best = 1;
        if (common == 0) {
            best = INT_MAX;
            for (unsigned i = 0; i < n; ++i) {
                if (r[i] != 2) continue;
                r[i] = 0;
                const int s0 = solve(r);
                r[i] = 1;
                const int s1 = solve(r);
                r[i] = 2;
                best = std::min(best, s0 + s1);
            }
        }
        memo[r] = best;
        return best;
    };
    std::vector<int> r(n, 2);
    return solve(r);
}

int optimal_pdt_height(const Allowed& allowed, unsigned n) {
    require(n <= 4 && allowed.size() == (std::size_t{1} << n), "optimal_pdt_height needs n <= 4");
    // State: the set of points still consistent, as a bitmask over the 2^n points.
    const unsigned points = 1U << n;
    std::vector<int> memo(std::size_t{1} << points, -1);
    std::function<int(std::uint32_t)> solve = [&](std::uint32_t set) -> int {
        if (memo[set] >= 0) return memo[set];
        std::uint64_t common = ~std::uint64_t{0};
        for (unsigned z = 0; z < points; ++z)
            if ((set >> z) & 1U) common &= allowed[z];
        int best = 0;
        if (common == 0) {
            best = INT_MAX;
            for (unsigned parity = 1; parity < points; ++parity) {
                std::uint32_t zero = 0;
                for (unsigned z = 0; z < points; ++z)
                    if (((set >> z) & 1U) && std::popcount(z & parity) % 2 == 0) zero |= 1U << z;
                const std::uint32_t one = set & ~zero;
                if (zero == 0 || one == 0) continue;
                best = std::min(best, 1 + std::max(solve(zero), solve(one)));
            }
        }
        memo[set] = best;
        return best;
    };
    return solve(points == 32 ? ~0U : (1U << points) - 1);
}

std::vector<std::uint32_t> solutions(const std::vector<Eq>& eqs, unsigned width) {
    require(width <= 24, "solutions needs width <= 24");
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 0; a < (1U << width); ++a) {
        bool ok = true;
        for (const auto& e : eqs) {
            if ((std::popcount(a & e.mask) % 2 == 1) != e.rhs) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(a);
    }
    return out;
}

bool covered(const std::vector<Eq>& c, const std::vector<Eq>& a, const std::vector<Eq>& b, unsigned width) {
    const auto sa = solutions(a, width);
    const auto sb = solutions(b, width);
    for (auto p : solutions(c, width))
        if (!std::binary_search(sa.begin(), sa.end(), p) && !std::binary_search(sb.begin(), sb.end(), p)) return false;
    return true;
}

double deficiency(const PointList& s, unsigned m, unsigned blocks) {
    std::set<Point> distinct(s.begin(), s.end());
    return blocks * std::log2(double(m)) - std::log2(double(distinct.size()));
}

RateMin min_entropy_rate(const PointList& s, unsigned m, unsigned blocks, const std::vector<std::uint32_t>& excluded) {
    RateMin best;
    best.size = s.size();
    const auto pool = remaining(blocks, excluded);
    bool found = false;
    for (std::size_t k = 1; k <= pool.size(); ++k) {
        std::vector<std::uint32_t> cur;
        subsets_of_size(pool, k, 0, cur, [&](const std::vector<std::uint32_t>& j) {
            std::vector<std::uint32_t> alpha(j.size(), 0);
            while (true) {
                const Int c = count_matching(s, j, alpha);
                if (c > 0) {
                    // rate(c, |J|) < rate(best): (|S|/c)^{|J_b|} < (|S|/c_b)^{|J|}
                    bool better = !found;
                    if (found) {
                        const unsigned jb = static_cast<unsigned>(best.blocks.size());
                        const unsigned jc = static_cast<unsigned>(j.size());
                        better = power(best.size, jb) * power(best.count, jc) < power(best.size, jc) * power(c, jb);
                    }
                    if (better) {
                        found = true;
                        best.blocks = j;
                        best.values = alpha;
                        best.count = c;
                    }
                }
                std::size_t pos = alpha.size();
                while (pos > 0 && ++alpha[pos - 1] == m) alpha[--pos] = 0;
                if (pos == 0) break;
            }
        });
    }
    if (found) {
        best.rate = std::log2(best.size.convert_to<double>() / best.count.convert_to<double>()) /
                    (double(best.blocks.size()) * std::log2(double(m)));
    }
    return best;
}

bool low_rate(const PointList& s, unsigned m, const std::vector<std::uint32_t>& j, unsigned p, unsigned q) {
    if (j.empty()) return false;
    const auto [alpha, c] = most_frequent(s, j);
    return power(c, q) * power(Int(m), p * static_cast<unsigned>(j.size())) > power(Int(s.size()), q);
}

bool maximal_low_rate(const PointList& s, unsigned m, unsigned blocks, const std::vector<std::uint32_t>& excluded,
                      const std::vector<std::uint32_t>& j, unsigned p, unsigned q) {
    const auto pool = remaining(blocks, excluded);
    for (auto b : j)
        if (std::find(pool.begin(), pool.end(), b) == pool.end()) return false;
    if (!j.empty() && !low_rate(s, m, j, p, q)) return false;
    std::vector<std::uint32_t> others;
    for (auto b : pool)
        if (std::find(j.begin(), j.end(), b) == j.end()) others.push_back(b);
    for (std::uint32_t mask = 1; mask < (1U << others.size()); ++mask) {
        std::vector<std::uint32_t> sup = j;
        for (std::size_t t = 0; t < others.size(); ++t)
            if ((mask >> t) & 1U) sup.push_back(others[t]);
        std::sort(sup.begin(), sup.end());
        if (low_rate(s, m, sup, p, q)) return false;
    }
    return true;
}

std::pair<std::vector<std::uint32_t>, Int> most_frequent(const PointList& s, const std::vector<std::uint32_t>& j) {
    std::map<std::vector<std::uint32_t>, Int> counts;
    for (const auto& x : s) {
        std::vector<std::uint32_t> key;
        for (auto b : j) key.push_back(x[b]);
        ++counts[key];
    }
    std::pair<std::vector<std::uint32_t>, Int> best{{}, 0};
    for (const auto& [key, c] : counts)
        if (c > best.second) best = {key, c};
    return best;
}

std::pair<Int, Int> marginal_fibre(const PointList& s, const std::vector<std::uint32_t>& fixed) {
    std::map<Point, Int> fibres;
    for (const auto& x : s) {
        Point key;
        for (std::uint32_t i = 0; i < x.size(); ++i)
            if (std::find(fixed.begin(), fixed.end(), i) == fixed.end()) key.push_back(x[i]);
        ++fibres[key];
    }
    Int c = 0;
    for (const auto& [key, n] : fibres) c = std::max(c, n);
    return {c, Int(s.size())};
}

bool potential_holds(const PointList& s, unsigned m, unsigned blocks, const std::vector<std::uint32_t>& fixed,
                     unsigned bits) {
    const auto [c, size] = marginal_fibre(s, fixed);
    const unsigned i = static_cast<unsigned>(fixed.size());
    // (N-|I|) log m - log(|S|/c) <= bits - |I| log m / 2, doubled and exponentiated.
    return power(Int(m), 2 * blocks - i) * c * c <= power(Int(4), bits) * size * size;
}

std::uint64_t count_family(unsigned m, unsigned blocks, unsigned groups, unsigned k, std::uint64_t special) {
    require(m * blocks <= 26, "count_family needs m N <= 26");
    const unsigned per = blocks / groups;
    const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
    std::uint64_t total = 0;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << (m * blocks)); ++y) {
        bool ok = true;
        for (unsigned g = 0; g < groups && ok; ++g) {
            unsigned hits = 0;
            for (unsigned i = g * per; i < (g + 1) * per; ++i)
                if (((y >> (i * m)) & mask) == special) ++hits;
            ok = hits >= k;
        }
        if (ok) ++total;
    }
    return total;
}

std::set<std::vector<int>> image(const std::function<int(std::uint64_t, std::uint64_t)>& g,
                                 const std::vector<std::vector<std::uint64_t>>& xs,
                                 const std::vector<std::vector<std::uint64_t>>& ys, const std::vector<std::uint32_t>& drop) {
    std::set<std::vector<int>> out;
    for (const auto& x : xs) {
        for (const auto& y : ys) {
            std::vector<int> z;
            for (std::uint32_t i = 0; i < x.size(); ++i)
                if (std::find(drop.begin(), drop.end(), i) == drop.end()) z.push_back(g(x[i], y[i]));
            out.insert(std::move(z));
        }
    }
    return out;
}

std::vector<Int> binomial_cdf_numerators(unsigned n, unsigned num, unsigned den) {
    std::vector<Int> cdf;
    Int acc = 0;
    Int choose = 1;
    for (unsigned t = 0; t <= n; ++t) {
        if (t > 0) choose = choose * (n - t + 1) / t;
        acc += choose * power(Int(num), t) * power(Int(den - num), n - t);
        cdf.push_back(acc);
    }
    return cdf;
}

std::vector<std::size_t> falsified(const std::vector<std::vector<int>>& clauses, std::uint64_t z) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < clauses.size(); ++k) {
        bool all_false = true;
        for (int lit : clauses[k]) {
            const bool v = (z >> (std::abs(lit) - 1)) & 1U;
            if ((lit > 0) == v) all_false = false;
        }
        if (all_false) out.push_back(k);
    }
    return out;
}

}  // namespace liftlab::oracle
