#include "hovelkit/kac_core.hpp"

#include "hovelkit/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace hovelkit {

namespace {

struct IVecHash {
    std::size_t operator()(const IVec& v) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

struct IMatHash {
    std::size_t operator()(const IMat& m) const noexcept {
        std::size_t h = 0;
        IVecHash vh;
        for (const auto& r : m) h = h * 31 + vh(r);
        return h;
    }
};

void check_index(const KacMoodyMatrix& m, std::size_t i) {
    if (i >= m.size) throw IndexOutOfRange("index " + std::to_string(i) + " not in I of size " + std::to_string(m.size));
}

Mat qmat(const KacMoodyMatrix& m) { return to_qmat(m.entries); }

bool all_principal_minors_positive(const KacMoodyMatrix& m, bool skip_full) {
    const std::size_t n = m.size;
    Mat a = qmat(m);
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
        if (skip_full && mask == (1ull << n) - 1) continue;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) idx.push_back(i);
        Mat sub(idx.size(), Vec(idx.size()));
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c) sub[r][c] = a[idx[r]][idx[c]];
        if (sgn(determinant(sub)) <= 0) return false;
    }
    return true;
}

BlockType classify_indecomposable(const KacMoodyMatrix& b) {
    const std::size_t n = b.size;
    if (n <= 16) {
        if (all_principal_minors_positive(b, false)) return BlockType::Finite;
        if (sgn(determinant(qmat(b))) == 0 && all_principal_minors_positive(b, true)) return BlockType::Affine;
        return BlockType::Indefinite;
    }
    // Large blocks: exhaustive Weyl test, then the corank-one criterion.
    if (weyl_order(b)) return BlockType::Finite;
    if (sgn(determinant(qmat(b))) != 0) return BlockType::Indefinite;
    for (std::size_t drop = 0; drop < n; ++drop) {
        std::vector<std::size_t> J;
        for (std::size_t i = 0; i < n; ++i)
            if (i != drop) J.push_back(i);
        auto sub = submatrix(b, J);
        for (const auto& blk : indecomposable_blocks(sub))
            if (!weyl_order(submatrix(sub, blk))) return BlockType::Indefinite;
    }
    return BlockType::Affine;
}

std::vector<std::vector<std::size_t>> neighbours(const KacMoodyMatrix& m) {
    std::vector<std::vector<std::size_t>> adj(m.size);
    for (std::size_t i = 0; i < m.size; ++i)
        for (std::size_t j = 0; j < m.size; ++j)
            if (i != j && m(i, j) != 0) adj[i].push_back(j);
    return adj;
}

std::string dynkin_name(const KacMoodyMatrix& b, BlockType t) {
    const std::size_t n = b.size;
    if (n == 1) return "A1";
    if (n == 2) {
        auto p = b(0, 1) * b(1, 0);
        if (p == 1) return "A2";
        if (p == 2) return "B2";
        if (p == 3) return "G2";
        if (p == 4) return b(0, 1) == b(1, 0) ? "A1^(1)" : "A2^(2)";
        return "rank-2 hyperbolic";
    }
    auto adj = neighbours(b);
    std::size_t edges = 0;
    for (const auto& a : adj) edges += a.size();
    edges /= 2;
    bool simply_laced = true;
    std::size_t double_bonds = 0;
    std::size_t db_i = 0, db_j = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto p = b(i, j) * b(j, i);
            if (p == 0) continue;
            if (p != 1) simply_laced = false;
            if (p == 2) {
                ++double_bonds;
                db_i = i;
                db_j = j;
            }
        }
    if (t == BlockType::Affine && simply_laced && edges == n) {
        bool cycle = std::all_of(adj.begin(), adj.end(), [](const auto& a) { return a.size() == 2; });
        if (cycle) return "A" + std::to_string(n - 1) + "^(1)";
    }
    if (t != BlockType::Finite || edges != n - 1) return "rank-" + std::to_string(n);
    std::vector<std::size_t> leaves, branch;
    for (std::size_t i = 0; i < n; ++i) {
        if (adj[i].size() == 1) leaves.push_back(i);
        if (adj[i].size() >= 3) branch.push_back(i);
    }
    if (simply_laced) {
        if (branch.empty()) return "A" + std::to_string(n);
        if (branch.size() == 1 && adj[branch[0]].size() == 3) {
            std::vector<std::size_t> arms;
            for (auto start : adj[branch[0]]) {
                std::size_t len = 1, prev = branch[0], cur = start;
                while (adj[cur].size() == 2) {
                    std::size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
                    prev = cur;
                    cur = next;
                    ++len;
                }
                arms.push_back(len);
            }
            std::sort(arms.begin(), arms.end());
            if (arms[0] == 1 && arms[1] == 1) return "D" + std::to_string(n);
            if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4) return "E" + std::to_string(n);
        }
        return "rank-" + std::to_string(n);
    }
    if (double_bonds == 1 && branch.empty()) {
        bool end_bond = adj[db_i].size() == 1 || adj[db_j].size() == 1;
        if (end_bond) {
            std::size_t e = adj[db_i].size() == 1 ? db_i : db_j;
            std::size_t f = e == db_i ? db_j : db_i;
            // |a_fe| = 2 makes the end node long.
            return (b(f, e) == -2 ? "C" : "B") + std::to_string(n);
        }
        if (n == 4) return "F4";
    }
    return "rank-" + std::to_string(n);
}

}  // namespace

KacMoodyMatrix::KacMoodyMatrix(IMat rows) : size(rows.size()), entries(std::move(rows)) {
    for (const auto& r : entries)
        if (r.size() != size) throw NonSquare("matrix rows must all have length " + std::to_string(size));
    if (size == 0) throw NonSquare("empty matrix");
}

void validate_gcm(const KacMoodyMatrix& m) {
    if (m.entries.size() != m.size) throw NonSquare("row count differs from size");
    for (const auto& r : m.entries)
        if (r.size() != m.size) throw NonSquare("row length differs from size");
    for (std::size_t i = 0; i < m.size; ++i) {
        if (m(i, i) != 2)
            throw NotGCM("a[" + std::to_string(i) + "][" + std::to_string(i) + "] = " + std::to_string(m(i, i)) + ", expected 2");
        for (std::size_t j = 0; j < m.size; ++j) {
            if (i == j) continue;
            if (m(i, j) > 0)
                throw NotGCM("a[" + std::to_string(i) + "][" + std::to_string(j) + "] = " + std::to_string(m(i, j)) + " is positive");
            if ((m(i, j) == 0) != (m(j, i) == 0))
                throw NotGCM("a[" + std::to_string(i) + "][" + std::to_string(j) + "] = " + std::to_string(m(i, j)) + " but a[" +
                             std::to_string(j) + "][" + std::to_string(i) + "] = " + std::to_string(m(j, i)));
        }
    }
}

std::string to_string(BlockType t) {
    switch (t) {
        case BlockType::Finite: return "finite";
        case BlockType::Affine: return "affine";
        case BlockType::Indefinite: return "indefinite";
    }
    return "?";
}

bool Classification::all_finite() const {
    return std::all_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.type == BlockType::Finite; });
}

bool Classification::has_indefinite() const {
    return std::any_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.type == BlockType::Indefinite; });
}

std::string Classification::summary() const {
    std::string out;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (k) out += " + ";
        out += to_string(blocks[k].type) + " (" + blocks[k].shape + "-shape block)";
    }
    return out;
}

std::vector<std::vector<std::size_t>> indecomposable_blocks(const KacMoodyMatrix& m) {
    auto adj = neighbours(m);
    std::vector<int> comp(m.size, -1);
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t s = 0; s < m.size; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::size_t> members;
        std::deque<std::size_t> q{s};
        comp[s] = static_cast<int>(blocks.size());
        while (!q.empty()) {
            auto v = q.front();
            q.pop_front();
            members.push_back(v);
            for (auto w : adj[v])
                if (comp[w] < 0) {
                    comp[w] = comp[s];
                    q.push_back(w);
                }
        }
        std::sort(members.begin(), members.end());
        blocks.push_back(members);
    }
    return blocks;
}

KacMoodyMatrix submatrix(const KacMoodyMatrix& m, const std::vector<std::size_t>& J) {
    IMat rows(J.size(), IVec(J.size()));
    for (std::size_t r = 0; r < J.size(); ++r) {
        check_index(m, J[r]);
        for (std::size_t c = 0; c < J.size(); ++c) rows[r][c] = m(J[r], J[c]);
    }
    KacMoodyMatrix out;
    out.size = J.size();
    out.entries = std::move(rows);
    return out;
}

Classification validate_and_classify(const KacMoodyMatrix& m) {
    validate_gcm(m);
    Classification c;
    for (auto& idx : indecomposable_blocks(m)) {
        auto sub = submatrix(m, idx);
        Block b;
        b.indices = idx;
        b.type = classify_indecomposable(sub);
        b.shape = dynkin_name(sub, b.type);
        c.blocks.push_back(std::move(b));
    }
    return c;
}

std::int64_t coroot_pairing(const KacMoodyMatrix& m, std::size_t i, const IVec& q) {
    check_index(m, i);
    if (q.size() != m.size) throw DimensionMismatch("root vector length " + std::to_string(q.size()));
    std::int64_t s = 0;
    for (std::size_t j = 0; j < m.size; ++j) s += m(i, j) * q[j];
    return s;
}

IVec simple_reflection(const KacMoodyMatrix& m, std::size_t i, const IVec& q) {
    IVec r = q;
    r[i] -= coroot_pairing(m, i, q);
    return r;
}

std::string to_string(RootTag t) { return t == RootTag::Real ? "real" : "imaginary"; }

void sort_roots(std::vector<Root>& roots) {
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
        auto ha = a.height(), hb = b.height();
        if (ha != hb) return ha < hb;
        return a.coords < b.coords;
    });
}

bool RootSlice::contains(const IVec& coords) const { return tag_of(coords).has_value(); }

std::optional<RootTag> RootSlice::tag_of(const IVec& coords) const {
    auto h = height(coords);
    auto it = std::lower_bound(roots.begin(), roots.end(), coords, [h](const Root& r, const IVec& c) {
        auto hr = r.height();
        if (hr != h) return hr < h;
        return r.coords < c;
    });
    if (it != roots.end() && it->coords == coords) return it->tag;
    return std::nullopt;
}

std::size_t RootSlice::count(RootTag t) const {
    return static_cast<std::size_t>(std::count_if(roots.begin(), roots.end(), [t](const Root& r) { return r.tag == t; }));
}

namespace {

// Positive roots stay reachable through height-increasing simple reflections,
// so saturation never needs to leave {0 < ht <= cap}.
std::vector<IVec> saturate_upward(const KacMoodyMatrix& m, std::vector<IVec> seeds, std::int64_t cap, std::size_t limit) {
    std::unordered_set<IVec, IVecHash> seen;
    std::deque<IVec> queue;
    for (auto& s : seeds)
        if (height(s) <= cap && seen.insert(s).second) queue.push_back(s);
    while (!queue.empty()) {
        IVec b = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < m.size; ++i) {
            IVec c = simple_reflection(m, i, b);
            if (!is_nonneg(c) || height(c) > cap) continue;
            if (seen.insert(c).second) {
                if (seen.size() > limit) throw CapTooLargeForMemory("more than " + std::to_string(limit) + " roots");
                queue.push_back(std::move(c));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

RootSlice symmetric_slice(std::vector<IVec> positive, RootTag tag, std::int64_t cap) {
    RootSlice s;
    s.cap = cap;
    for (auto& p : positive) {
        s.roots.push_back(Root{ineg(p), tag});
        s.roots.push_back(Root{std::move(p), tag});
    }
    sort_roots(s.roots);
    return s;
}

bool connected_support(const KacMoodyMatrix& m, const IVec& q) {
    std::vector<std::size_t> supp;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] != 0) supp.push_back(i);
    if (supp.empty()) return false;
    auto blocks = indecomposable_blocks(submatrix(m, supp));
    return blocks.size() == 1;
}

}  // namespace

RootSlice real_roots(const KacMoodyMatrix& m, std::int64_t cap, std::size_t limit) {
    validate_gcm(m);
    if (cap < 1) throw std::invalid_argument("height cap must be positive");
    std::vector<IVec> simple;
    for (std::size_t i = 0; i < m.size; ++i) {
        IVec e(m.size, 0);
        e[i] = 1;
        simple.push_back(e);
    }
    return symmetric_slice(saturate_upward(m, simple, cap, limit), RootTag::Real, cap);
}

RootSlice imaginary_roots(const KacMoodyMatrix& m, std::int64_t cap, std::size_t limit) {
    validate_gcm(m);
    if (cap < 1) throw std::invalid_argument("height cap must be positive");
    // Fundamental set: connected support and non-positive pairing with every coroot.
    std::vector<IVec> fundamental;
    IVec cur(m.size, 0);
    std::size_t visited = 0;
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
        if (i == m.size) {
            if (++visited > limit) throw CapTooLargeForMemory("fundamental-set search exceeds " + std::to_string(limit));
            if (left == cap) return;  // zero vector
            for (std::size_t k = 0; k < m.size; ++k)
                if (coroot_pairing(m, k, cur) > 0) return;
            if (connected_support(m, cur)) fundamental.push_back(cur);
            return;
        }
        for (std::int64_t v = 0; v <= left; ++v) {
            cur[i] = v;
            rec(i + 1, left - v);
        }
        cur[i] = 0;
    };
    rec(0, cap);
    return symmetric_slice(saturate_upward(m, fundamental, cap, limit), RootTag::Imaginary, cap);
}

RootSlice all_roots(const KacMoodyMatrix& m, std::int64_t cap, std::size_t limit) {
    auto re = real_roots(m, cap, limit);
    auto im = imaginary_roots(m, cap, limit);
    RootSlice s;
    s.cap = cap;
    s.roots = std::move(re.roots);
    s.roots.insert(s.roots.end(), im.roots.begin(), im.roots.end());
    sort_roots(s.roots);
    return s;
}

IMat identity_imat(std::size_t n) {
    IMat r(n, IVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
    return r;
}

IMat reflection_matrix(const KacMoodyMatrix& m, std::size_t i) {
    check_index(m, i);
    IMat s = identity_imat(m.size);
    for (std::size_t c = 0; c < m.size; ++c) s[i][c] -= m(i, c);
    return s;
}

IMat imat_mul(const IMat& a, const IMat& b) {
    const std::size_t n = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
    IMat r(n, IVec(c, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < c; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

IVec imat_apply(const IMat& a, const IVec& v) {
    IVec r(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
    return r;
}

IMat action_of_word(const KacMoodyMatrix& m, const std::vector<std::size_t>& word) {
    IMat a = identity_imat(m.size);
    for (auto i : word) a = imat_mul(a, reflection_matrix(m, i));
    return a;
}

WeylElement weyl_identity(const KacMoodyMatrix& m) { return WeylElement{{}, identity_imat(m.size)}; }

WeylElement canonical_element(const KacMoodyMatrix& m, const std::vector<std::size_t>& word) {
    std::vector<std::size_t> rev(word.rbegin(), word.rend());
    IMat inv = action_of_word(m, rev);
    WeylElement out = weyl_identity(m);
    out.action = action_of_word(m, word);
    for (;;) {
        std::size_t found = m.size;
        for (std::size_t i = 0; i < m.size && found == m.size; ++i) {
            bool negative = false;
            for (std::size_t r = 0; r < m.size; ++r)
                if (inv[r][i] < 0) negative = true;
            if (negative) found = i;
        }
        if (found == m.size) break;
        out.word.push_back(found);
        inv = imat_mul(inv, reflection_matrix(m, found));
    }
    return out;
}

WeylElement weyl_mul(const KacMoodyMatrix& m, const WeylElement& a, const WeylElement& b) {
    std::vector<std::size_t> w = a.word;
    w.insert(w.end(), b.word.begin(), b.word.end());
    return canonical_element(m, w);
}

WeylElement weyl_inverse(const KacMoodyMatrix& m, const WeylElement& a) {
    return canonical_element(m, std::vector<std::size_t>(a.word.rbegin(), a.word.rend()));
}

IVec weyl_apply(const WeylElement& w, const IVec& q) { return imat_apply(w.action, q); }

IVec weyl_apply_inverse(const KacMoodyMatrix& m, const WeylElement& w, const IVec& q) {
    IVec r = q;
    for (auto i : w.word) r = simple_reflection(m, i, r);
    return r;
}

std::vector<WeylElement> weyl_elements(const KacMoodyMatrix& m, std::size_t length_cap, std::size_t limit) {
    validate_gcm(m);
    std::vector<IMat> gens;
    for (std::size_t i = 0; i < m.size; ++i) gens.push_back(reflection_matrix(m, i));
    std::unordered_set<IMat, IMatHash> seen;
    std::vector<WeylElement> out{weyl_identity(m)};
    seen.insert(out[0].action);
    std::size_t level_begin = 0;
    for (std::size_t len = 1; len <= length_cap; ++len) {
        std::size_t level_end = out.size();
        // Words of the previous level are ShortLex sorted; extending each by
        // generators in increasing order keeps the first hit canonical.
        for (std::size_t k = level_begin; k < level_end; ++k)
            for (std::size_t i = 0; i < m.size; ++i) {
                IMat a = imat_mul(out[k].action, gens[i]);
                if (!seen.insert(a).second) continue;
                if (seen.size() > limit) throw CapTooLargeForMemory("more than " + std::to_string(limit) + " Weyl elements");
                auto w = out[k].word;
                w.push_back(i);
                out.push_back(WeylElement{std::move(w), std::move(a)});
            }
        if (out.size() == level_end) break;
        level_begin = level_end;
    }
    return out;
}

std::optional<std::size_t> weyl_order(const KacMoodyMatrix& m, std::size_t limit) {
    std::vector<IMat> gens;
    for (std::size_t i = 0; i < m.size; ++i) gens.push_back(reflection_matrix(m, i));
    std::unordered_set<IMat, IMatHash> seen{identity_imat(m.size)};
    std::vector<IMat> frontier{identity_imat(m.size)};
    while (!frontier.empty()) {
        std::vector<IMat> next;
        for (const auto& a : frontier)
            for (const auto& g : gens) {
                IMat b = imat_mul(a, g);
                if (seen.insert(b).second) {
                    if (seen.size() > limit) return std::nullopt;
                    next.push_back(std::move(b));
                }
            }
        frontier = std::move(next);
    }
    return seen.size();
}

bool is_spherical(const KacMoodyMatrix& m, const std::vector<std::size_t>& J) {
    if (J.empty()) return true;
    for (auto j : J) check_index(m, j);
    std::vector<std::size_t> sorted = J;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    return validate_and_classify(submatrix(m, sorted)).all_finite();
}

RootDescent real_root_descent(const KacMoodyMatrix& m, const IVec& root) {
    if (root.size() != m.size) throw DimensionMismatch("root vector length");
    RootDescent d;
    IVec b = root;
    if (is_nonpos(b) && !is_nonneg(b)) {
        d.negative = true;
        b = ineg(b);
    }
    if (!is_nonneg(b) || height(b) == 0) throw std::invalid_argument("not a root: " + to_string(to_qvec(root)));
    for (;;) {
        if (height(b) == 1) {
            for (std::size_t i = 0; i < m.size; ++i)
                if (b[i] == 1) d.simple = i;
            return d;
        }
        std::size_t pick = m.size;
        for (std::size_t i = 0; i < m.size; ++i)
            if (coroot_pairing(m, i, b) > 0) {
                pick = i;
                break;
            }
        if (pick == m.size) throw std::invalid_argument("not a real root: " + to_string(to_qvec(root)));
        b = simple_reflection(m, pick, b);
        if (!is_nonneg(b)) throw std::invalid_argument("not a real root: " + to_string(to_qvec(root)));
        d.word.push_back(pick);
    }
}

bool is_real_root(const KacMoodyMatrix& m, const IVec& q) {
    try {
        real_root_descent(m, q);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

std::int64_t pairing_with_coroot(const KacMoodyMatrix& m, const IVec& q, const IVec& beta) {
    auto d = real_root_descent(m, beta);
    // beta = +-w(alpha_i) with w = s_word[0]...; <q, beta^vee> = +-<w^{-1} q, alpha_i^vee>.
    IVec r = q;
    for (auto i : d.word) r = simple_reflection(m, i, r);
    auto p = coroot_pairing(m, d.simple, r);
    return d.negative ? -p : p;
}

IVec root_reflection(const KacMoodyMatrix& m, const IVec& beta, const IVec& q) {
    auto p = pairing_with_coroot(m, q, beta);
    IVec r = q;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p * beta[i];
    return r;
}

std::optional<KacMoodyMatrix> named_matrix(const std::string& name) {
    if (name == "a1") return KacMoodyMatrix(IMat{{2}});
    if (name == "a2") return KacMoodyMatrix(IMat{{2, -1}, {-1, 2}});
    if (name == "a3") return KacMoodyMatrix(IMat{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}});
    if (name == "b2") return KacMoodyMatrix(IMat{{2, -2}, {-1, 2}});
    if (name == "g2") return KacMoodyMatrix(IMat{{2, -1}, {-3, 2}});
    if (name == "aff_a1") return KacMoodyMatrix(IMat{{2, -2}, {-2, 2}});
    if (name == "hyp_33") return KacMoodyMatrix(IMat{{2, -3}, {-3, 2}});
    return std::nullopt;
}

KacMoodyMatrix matrix_from_json(const nlohmann::json& j) {
    const nlohmann::json* rows = &j;
    if (j.is_object()) {
        if (!j.contains("entries")) throw ParseError("matrix object needs 'entries'");
        rows = &j.at("entries");
    }
    if (!rows->is_array()) throw ParseError("matrix entries must be an array of arrays");
    IMat m;
    for (const auto& r : *rows) {
        if (!r.is_array()) throw ParseError("matrix row must be an array");
        IVec row;
        for (const auto& x : r) {
            if (!x.is_number_integer()) throw ParseError("matrix entries must be integers");
            row.push_back(x.get<std::int64_t>());
        }
        m.push_back(row);
    }
    if (j.is_object() && j.contains("size") && j.at("size").get<std::size_t>() != m.size())
        throw NonSquare("declared size differs from row count");
    return KacMoodyMatrix(std::move(m));
}

nlohmann::json matrix_to_json(const KacMoodyMatrix& m) { return {{"size", m.size}, {"entries", m.entries}}; }

nlohmann::json slice_to_json(const RootSlice& s) {
    auto arr = nlohmann::json::array();
    for (const auto& r : s.roots) arr.push_back({{"coords", r.coords}, {"tag", to_string(r.tag)}, {"height", r.height()}});
    return arr;
}

nlohmann::json weyl_to_json(const WeylElement& w) { return {{"word", w.word}, {"action", w.action}}; }

}  // namespace hovelkit
