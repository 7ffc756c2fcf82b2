#include "ruelle/symbolic.hpp"

#include <algorithm>
#include <cmath>

namespace ruelle {

namespace {

// Exact population counts of A^n via uint64 matrix powers.
std::vector<std::vector<std::uint64_t>> adj_power(const IfsSystem &ifs, int n) {
    const int N = ifs.size();
    std::vector<std::vector<std::uint64_t>> M(N, std::vector<std::uint64_t>(N, 0)), R = M;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) M[i][j] = ifs.admissible(i, j) ? 1 : 0;
    for (int i = 0; i < N; ++i) R[i][i] = 1;
    for (int k = 0; k < n; ++k) {
        std::vector<std::vector<std::uint64_t>> T(N, std::vector<std::uint64_t>(N, 0));
        for (int i = 0; i < N; ++i)
            for (int l = 0; l < N; ++l)
                for (int j = 0; j < N; ++j) T[i][j] += R[i][l] * M[l][j];
        R = std::move(T);
    }
    return R;
}

} // namespace

std::uint64_t count_words(const IfsSystem &ifs, int length, WordKind kind) {
    const int N = ifs.size();
    if (length < 1) throw ConfigError("count_words: length >= 1 required");
    if (kind == WordKind::Cyclic) {
        auto R = adj_power(ifs, length);
        std::uint64_t tr = 0;
        for (int i = 0; i < N; ++i) tr += R[i][i];
        return tr;
    }
    // Linear words of `length` symbols: sum over A^{length-1} entries.
    auto R = adj_power(ifs, length - 1);
    std::uint64_t total = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) total += R[i][j];
    return total;
}

std::vector<Word> admissible_words(const IfsSystem &ifs, int length, WordKind kind) {
    if (length < 1) throw ConfigError("admissible_words: length >= 1 required");
    const int N = ifs.size();
    std::vector<Word> out;
    std::vector<int> cur(length);
    std::function<void(int)> rec = [&](int k) {
        if (k == length) {
            if (kind == WordKind::Cyclic && !ifs.admissible(cur[length - 1], cur[0])) return;
            out.emplace_back(cur, kind);
            return;
        }
        for (int s = 0; s < N; ++s) {
            if (k > 0 && !ifs.admissible(cur[k - 1], s)) continue;
            cur[k] = s;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

double ComposedBranch::operator()(double x) const {
    if (is_mobius) return mobius(x);
    double y = x;
    int prev = source;
    for (int s : symbols) {
        y = ifs->branch(prev, s)(y);
        prev = s;
    }
    return y;
}

double ComposedBranch::deriv(double x) const {
    if (is_mobius) return mobius.deriv(x);
    double y = x, d = 1.0;
    int prev = source;
    for (int s : symbols) {
        d *= ifs->branch(prev, s).deriv(y);
        y = ifs->branch(prev, s)(y);
        prev = s;
    }
    return d;
}

ComposedBranch compose_branch(const IfsSystem &ifs, const Word &word, int source) {
    if (word.length() < 1) throw ConfigError("compose_branch: word length >= 1 required");
    if (source < 0 || source >= ifs.size())
        throw ConfigError("compose_branch: source interval out of range");
    int prev = source;
    for (int s : word.symbols) {
        if (!ifs.admissible(prev, s))
            throw ConfigError("compose_branch: inadmissible transition " +
                              std::to_string(prev + 1) + "->" + std::to_string(s + 1));
        prev = s;
    }
    ComposedBranch cb;
    cb.source = source;
    cb.target = word.symbols.back();
    cb.symbols = word.symbols;
    cb.ifs = &ifs;
    if (ifs.all_mobius()) {
        cb.is_mobius = true;
        MobiusMap m = *ifs.branch(source, word.symbols[0]).mobius;
        prev = word.symbols[0];
        for (std::size_t k = 1; k < word.symbols.size(); ++k) {
            m = MobiusMap::compose(*ifs.branch(prev, word.symbols[k]).mobius, m);
            prev = word.symbols[k];
        }
        cb.mobius = m;
    }
    return cb;
}

ComposedBranch compose_branch(const IfsSystem &ifs, const Word &word) {
    if (word.length() < 1) throw ConfigError("compose_branch: word length >= 1 required");
    return compose_branch(ifs, word, word.symbols.back());
}

PeriodicPoint periodic_point(const IfsSystem &ifs, const Word &word) {
    if (word.kind != WordKind::Cyclic)
        throw ConfigError("periodic_point: cyclic word required");
    const int src = word.symbols.back();
    if (!ifs.admissible(src, word.symbols.front()))
        throw ConfigError("periodic_point: word is not cyclically admissible");
    ComposedBranch cb = compose_branch(ifs, word, src);

    double x = ifs.interval(src).mid();
    for (int it = 0; it < 200; ++it) {
        const double nx = cb(x);
        if (std::abs(nx - x) < 1e-16) {
            x = nx;
            break;
        }
        x = nx;
    }
    PeriodicPoint p;
    p.x = x;
    p.residual = std::abs(cb(x) - x);
    const double thn = std::pow(ifs.theta(), word.length());
    p.error_bound = p.residual / (1.0 - thn);
    p.multiplier = cb.deriv(x);
    return p;
}

std::vector<Interval> trapped_set_cover(const IfsSystem &ifs, int depth) {
    if (depth < 0) throw ConfigError("trapped_set_cover: depth >= 0 required");
    const int N = ifs.size();
    std::vector<Interval> out;
    if (depth == 0) {
        out = ifs.intervals();
        return out;
    }
    // Depth-n cylinders are the branch images of depth-(n-1) cylinders; we
    // propagate (interval, landing symbol) pairs.  Cylinders shorter than one
    // ulp are widened to stay representable.
    auto image_of = [](const BranchMap &b, const Interval &iv) {
        double lo = b(iv.lo), hi = b(iv.hi);
        if (lo > hi) std::swap(lo, hi);
        if (!(lo < hi)) hi = std::nextafter(hi, 1e300);
        return Interval(lo, hi);
    };
    for (int src = 0; src < N; ++src) {
        std::function<void(int, Interval, int)> rec = [&](int k, Interval iv, int prev) {
            if (k == depth) {
                out.push_back(iv);
                return;
            }
            for (int s = 0; s < N; ++s) {
                if (!ifs.admissible(prev, s)) continue;
                rec(k + 1, image_of(ifs.branch(prev, s), iv), s);
            }
        };
        rec(0, ifs.interval(src), src);
    }
    return out;
}

CodedPoint coding_point(const IfsSystem &ifs, const Word &past_word, int truncation) {
    if (truncation < 1) throw ConfigError("coding_point: truncation >= 1 required");
    if (past_word.length() < truncation)
        throw ConfigError("coding_point: word shorter than requested truncation");
    // Use the trailing (truncation+1) symbols when available: the oldest acts
    // as the source interval, the rest as maps.
    const auto &sym = past_word.symbols;
    int start = static_cast<int>(sym.size()) - (truncation + 1);
    int source, first_map;
    if (start < 0) {
        source = sym[0];
        first_map = 1;
    } else {
        source = sym[start];
        first_map = start + 1;
    }
    Interval iv = ifs.interval(source);
    int prev = source;
    for (std::size_t k = first_map; k < sym.size(); ++k) {
        if (!ifs.admissible(prev, sym[k]))
            throw ConfigError("coding_point: inadmissible word");
        const BranchMap &b = ifs.branch(prev, sym[k]);
        iv = b.is_mobius() ? b.mobius->map_interval(iv)
                           : Interval::hull_of(b(iv.lo), b(iv.hi));
        prev = sym[k];
    }
    CodedPoint cp;
    cp.cylinder = iv;
    cp.x = iv.mid();
    cp.error_bound = 0.5 * iv.length();
    return cp;
}

namespace {

void cyclic_dfs(const IfsSystem &ifs, int n, int first_symbol, const OrbitVisitor &f) {
    const int N = ifs.size();
    std::vector<int> sym(n);
    sym[0] = first_symbol;
    OrbitData data;

    if (ifs.all_mobius()) {
        // tails[k] composes the transition maps for symbols 1..k; the first
        // map phi_{w_{n-1}, w_0} depends on the source (= last symbol) and is
        // attached at the leaf.
        std::vector<MobiusMap> tails(n); // tails[0] = identity
        std::function<void(int)> rec = [&](int k) {
            if (k == n) {
                const int src = sym[n - 1];
                if (!ifs.admissible(src, sym[0])) return;
                const MobiusMap C =
                    MobiusMap::compose(tails[n - 1], *ifs.branch(src, sym[0]).mobius);
                double x = ifs.interval(src).mid();
                for (int it = 0; it < 100; ++it) {
                    const double nx = C(x);
                    if (std::abs(nx - x) < 1e-16) { x = nx; break; }
                    x = nx;
                }
                data.x = x;
                data.multiplier = C.deriv(x);
                data.residual = std::abs(C(x) - x);
                f(sym, data);
                return;
            }
            for (int s = 0; s < N; ++s) {
                if (!ifs.admissible(sym[k - 1], s)) continue;
                sym[k] = s;
                tails[k] = MobiusMap::compose(*ifs.branch(sym[k - 1], s).mobius, tails[k - 1]);
                rec(k + 1);
            }
        };
        rec(1);
        return;
    }

    // Generic (non-Mobius) fallback: compose through the system at the leaf.
    std::function<void(int)> rec = [&](int k) {
        if (k == n) {
            if (!ifs.admissible(sym[n - 1], sym[0])) return;
            Word w(sym, WordKind::Cyclic);
            PeriodicPoint p = periodic_point(ifs, w);
            data.x = p.x;
            data.multiplier = p.multiplier;
            data.residual = p.residual;
            f(sym, data);
            return;
        }
        for (int s = 0; s < N; ++s) {
            if (!ifs.admissible(sym[k - 1], s)) continue;
            sym[k] = s;
            rec(k + 1);
        }
    };
    rec(1);
}

} // namespace

void for_each_cyclic_word(const IfsSystem &ifs, int n, const OrbitVisitor &f,
                          std::uint64_t budget_leaves) {
    if (n < 1) throw ConfigError("for_each_cyclic_word: length >= 1 required");
    const std::uint64_t leaves = count_words(ifs, n, WordKind::Cyclic);
    if (leaves > budget_leaves)
        throw BudgetError("cyclic-word count " + std::to_string(leaves) +
                          " exceeds orbit budget " + std::to_string(budget_leaves));
    for (int s0 = 0; s0 < ifs.size(); ++s0) cyclic_dfs(ifs, n, s0, f);
}

void for_each_cyclic_word_from(const IfsSystem &ifs, int n, int first_symbol,
                               const OrbitVisitor &f) {
    if (n < 1) throw ConfigError("for_each_cyclic_word_from: length >= 1 required");
    if (first_symbol < 0 || first_symbol >= ifs.size())
        throw ConfigError("for_each_cyclic_word_from: symbol out of range");
    cyclic_dfs(ifs, n, first_symbol, f);
}

std::vector<double> orbit_points(const IfsSystem &ifs, const std::vector<int> &symbols,
                                 double fixed_point) {
    std::vector<double> pts;
    pts.reserve(symbols.size());
    double x = fixed_point;
    int prev = symbols.back();
    for (int s : symbols) {
        x = ifs.branch(prev, s)(x);
        pts.push_back(x);
        prev = s;
    }
    return pts;
}

} // namespace ruelle
