#include "hovelkit/valuated_datum.hpp"

#include "hovelkit/errors.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hovelkit {

namespace {

constexpr std::size_t kKeptFailures = 8;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::mt19937_64 rng_for(const std::string& axiom, std::uint64_t seed) { return std::mt19937_64(seed ^ fnv1a(axiom)); }

nlohmann::json root_json(const IVec& r) { return nlohmann::json(r); }

std::string ext_json(const ExtQ& e) { return to_string(e); }

ValuationReport start(const std::string& axiom, const RootDatumInstance& inst, const CheckPlan& plan) {
    ValuationReport r;
    r.axiom = axiom;
    r.instance = inst.name();
    r.seed = plan.seed;
    return r;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

LMat commutator(const RootDatumInstance& inst, const LMat& u, const LMat& v) {
    return inst.mul(inst.mul(u, v), inst.mul(inst.inv(u), inst.inv(v)));
}

/// Prenilpotent partners of each root among the sampled roots.
std::vector<std::vector<std::size_t>> partners(const RootDatumInstance& inst, const std::vector<IVec>& roots) {
    std::vector<std::vector<std::size_t>> out(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = 0; j < roots.size(); ++j)
            if (prenilpotent(inst.model().matrix(), roots[i], roots[j])) out[i].push_back(j);
    return out;
}

enum class CommutatorVerdict { Ok, Bad, Undecided };

/// [u, v] lies in the group generated by U_{p a + q b} at levels p*la + q*lb.
/// Decided exactly when at most one such root exists.
CommutatorVerdict check_commutator(const RootDatumInstance& inst, const IVec& a, const IVec& b, const LMat& u,
                                   const LMat& v, bool with_levels, nlohmann::json& why) {
    const auto& m = inst.model().matrix();
    LMat c = commutator(inst, u, v);
    auto combos = positive_combinations(m, a, b);
    if (lmat_is_identity(c)) return CommutatorVerdict::Ok;
    if (combos.empty()) {
        why = {{"reason", "nontrivial commutator with no root p*a+q*b"}};
        return CommutatorVerdict::Bad;
    }
    if (combos.size() > 1) return CommutatorVerdict::Undecided;
    const auto& [pq, g] = combos.front();
    auto re = inst.as_root_element(c);
    if (!re || re->root != g) {
        why = {{"reason", "commutator outside U_{p*a+q*b}"}, {"expected_root", root_json(g)}};
        return CommutatorVerdict::Bad;
    }
    if (with_levels) {
        ExtQ la = inst.phi(a, u), lb = inst.phi(b, v), lc = inst.valuation(re->r);
        Q bound = Q(pq.first) * la.value + Q(pq.second) * lb.value;
        if (lc < ExtQ::finite(bound)) {
            why = {{"reason", "commutator level too low"},
                   {"level", ext_json(lc)},
                   {"bound", to_string(bound)},
                   {"p", pq.first},
                   {"q", pq.second}};
            return CommutatorVerdict::Bad;
        }
    }
    return CommutatorVerdict::Ok;
}

}  // namespace

std::vector<IVec> RootDatumInstance::roots() const {
    std::vector<IVec> out;
    for (const auto& r : model().realSlice.roots) out.push_back(r.coords);
    return out;
}

ExtQ RootDatumInstance::phi(const IVec& root, const LMat& u) const {
    if (lmat_is_identity(u)) return ExtQ::pos_inf();
    auto re = as_root_element(u);
    if (!re || re->root != root) throw std::domain_error("element is not in the requested root group");
    return valuation(re->r);
}

LMat RootDatumInstance::m_of(const IVec& root, const LMat& u) const {
    auto re = as_root_element(u);
    if (!re || re->root != root) throw std::domain_error("m(u) needs u in U_root minus the identity");
    LMat w = x(ineg(root), -1 / re->r);
    return mul(mul(w, u), w);
}

LMat RootDatumInstance::sample_U(const IVec& root, std::mt19937_64& rng, std::int64_t vmin, std::int64_t vmax) const {
    return x(root, sample_scalar(rng, vmin, vmax));
}

WeylElement weyl_from_action(const KacMoodyMatrix& m, const IMat& action) {
    IMat a = action;
    std::vector<std::size_t> rev;
    const std::size_t cap = 4096;
    while (true) {
        std::optional<std::size_t> neg;
        for (std::size_t i = 0; i < m.size && !neg; ++i) {
            IVec col(m.size);
            for (std::size_t r = 0; r < m.size; ++r) col[r] = a[r][i];
            if (is_nonpos(col)) neg = i;
        }
        if (!neg) break;
        a = imat_mul(a, reflection_matrix(m, *neg));
        rev.push_back(*neg);
        if (rev.size() > cap) throw MNotInN("Weyl descent did not terminate");
    }
    if (a != identity_imat(m.size)) throw MNotInN("action permutes the simple roots nontrivially; not in W");
    std::reverse(rev.begin(), rev.end());
    return canonical_element(m, rev);
}

bool prenilpotent(const KacMoodyMatrix& m, const IVec& a, const IVec& b) {
    if (a == ineg(b)) return false;
    if (a == b) return true;
    std::int64_t ab = pairing_with_coroot(m, a, b), ba = pairing_with_coroot(m, b, a);
    if (ab * ba < 4) return true;
    return ab > 0;
}

std::vector<std::pair<std::pair<int, int>, IVec>> positive_combinations(const KacMoodyMatrix& m, const IVec& a,
                                                                        const IVec& b) {
    std::vector<std::pair<std::pair<int, int>, IVec>> out;
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q) {
            IVec v(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) v[i] = p * a[i] + q * b[i];
            if (is_real_root(m, v)) out.push_back({{p, q}, v});
        }
    return out;
}

AffineWeylElement nu_of(const RootDatumInstance& inst, const LMat& n) {
    const auto& model = inst.model();
    const auto& m = model.matrix();
    const auto& real = model.real;
    LMat ninv = inst.inv(n);
    IMat action(m.size, IVec(m.size));
    Mat rows;
    Vec rhs;
    auto image = [&](const IVec& beta, const Q& r) {
        LMat u = inst.x(beta, r);
        LMat c = inst.mul(inst.mul(n, u), ninv);
        auto re = inst.as_root_element(c);
        if (!re) throw MNotInN("conjugate of a root group element is not in a root group");
        rows.push_back(real.form_of(re->root));
        rhs.push_back((inst.valuation(r).value - inst.valuation(re->r).value));
        return re->root;
    };
    for (std::size_t i = 0; i < m.size; ++i) {
        IVec beta(m.size, 0);
        beta[i] = 1;
        IVec g = image(beta, Q(1));
        if (image(beta, Q(inst.prime())) != g || image(ineg(beta), Q(1)) != ineg(g))
            throw MNotInN("conjugation does not act on roots linearly");
        for (std::size_t r = 0; r < m.size; ++r) action[r][i] = g[r];
    }
    AffineWeylElement out;
    out.linear = weyl_from_action(m, action);
    auto tau = solve(rows, rhs, real.dim);
    if (!tau) throw InconsistentSystem("translation equations of nu have no solution");
    out.translation = *tau;
    return out;
}

LMat n_from_word(const RootDatumInstance& inst, const std::vector<NLetter>& word) {
    LMat g = inst.identity();
    for (const auto& l : word) {
        if (l.kind == NLetter::Kind::Torus)
            g = inst.mul(g, l.t);
        else
            g = inst.mul(g, inst.m_of(l.root, inst.x(l.root, l.r)));
    }
    return g;
}

std::vector<NLetter> sample_n_word(const RootDatumInstance& inst, std::mt19937_64& rng, std::size_t max_len) {
    auto roots = inst.roots();
    std::size_t len = 1 + pick(rng, max_len);
    std::vector<NLetter> w;
    for (std::size_t i = 0; i < len; ++i) {
        NLetter l;
        if (pick(rng, 3) == 0) {
            l.kind = NLetter::Kind::Torus;
            l.t = inst.sample_Z(rng);
        } else {
            l.kind = NLetter::Kind::M;
            l.root = roots[pick(rng, roots.size())];
            l.r = inst.sample_scalar(rng);
        }
        w.push_back(std::move(l));
    }
    return w;
}

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Skipped: return "skipped";
    }
    return "?";
}

void ValuationReport::fail(nlohmann::json witness) {
    status = CheckStatus::Fail;
    ++failureCount;
    witness["seed"] = seed;
    if (failures.size() < kKeptFailures) failures.push_back(std::move(witness));
}

nlohmann::json ValuationReport::to_json() const {
    nlohmann::json j = {{"axiom", axiom},           {"instance", instance}, {"status", to_string(status)},
                        {"samples", samples},       {"seed", seed},         {"failures", failureCount}};
    if (!failures.empty()) j["witness"] = failures.front();
    if (failures.size() > 1) j["more_witnesses"] = nlohmann::json(std::vector<nlohmann::json>(failures.begin() + 1, failures.end()));
    if (!note.empty()) j["note"] = note;
    return j;
}

ValuationReport check_V0(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("V0", inst, plan);
    auto rng = rng_for(rep.axiom, plan.seed);
    auto roots = inst.roots();
    for (std::size_t ri = 0; ri < roots.size(); ++ri) {
        std::set<Q> values;
        for (std::size_t s = 0; s < plan.samples; ++s) {
            auto u = inst.sample_U(roots[ri], rng);
            ++rep.samples;
            ExtQ v = inst.phi(roots[ri], u);
            if (!v.is_finite()) {
                rep.fail({{"root", root_json(roots[ri])}, {"index", s}, {"reason", "nontrivial element with phi = +inf"}});
                continue;
            }
            values.insert(v.value);
            if (!inst.model().lambda_of(roots[ri]).contains(v.value))
                rep.fail({{"root", root_json(roots[ri])}, {"index", s}, {"value", to_string(v.value)},
                          {"reason", "value outside Lambda"}});
        }
        if (values.size() < 3)
            rep.fail({{"root", root_json(roots[ri])}, {"distinct", values.size()}, {"reason", "fewer than 3 values"}});
    }
    return rep;
}

ValuationReport check_V1(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("V1", inst, plan);
    auto rng = rng_for(rep.axiom, plan.seed);
    auto roots = inst.roots();
    if (inst.as_root_element(inst.identity())) rep.fail({{"reason", "identity recognized as a root element"}});
    for (std::size_t ri = 0; ri < roots.size(); ++ri) {
        const IVec& a = roots[ri];
        if (!inst.phi(a, inst.identity()).is_pos_inf()) rep.fail({{"root", root_json(a)}, {"reason", "phi(1) finite"}});
        for (std::size_t s = 0; s < plan.samples; ++s) {
            ++rep.samples;
            LMat u = inst.sample_U(a, rng);
            // Same valuation half the time so that leading terms can cancel.
            LMat v = (s % 2 == 0) ? inst.sample_U(a, rng) : inst.x(a, inst.as_root_element(u)->r * Q(1 + 2 * (long)pick(rng, 4)));
            LMat w = inst.mul(u, inst.inv(v));
            nlohmann::json wit = {{"root", root_json(a)}, {"index", s}, {"u", lmat_to_json(u)}, {"v", lmat_to_json(v)}};
            if (!lmat_is_identity(w)) {
                auto re = inst.as_root_element(w);
                if (!re || re->root != a) {
                    wit["reason"] = "u v^-1 left U_root";
                    rep.fail(wit);
                    continue;
                }
            }
            ExtQ pu = inst.phi(a, u), pv = inst.phi(a, v), pw = inst.phi(a, w);
            if (pw < std::min(pu, pv, [](const ExtQ& x, const ExtQ& y) { return x < y; })) {
                wit["reason"] = "phi(u v^-1) below min(phi(u), phi(v))";
                rep.fail(wit);
            }
            if (inst.phi(a, inst.inv(u)) != pu) {
                wit["reason"] = "phi(u^-1) != phi(u)";
                rep.fail(wit);
            }
        }
    }
    return rep;
}

ValuationReport check_V2_1(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("V2.1", inst, plan);
    auto rng = rng_for(rep.axiom, plan.seed);
    const auto& m = inst.model().matrix();
    auto roots = inst.roots();
    for (std::size_t ri = 0; ri < roots.size(); ++ri) {
        const IVec& a = roots[ri];
        for (std::size_t s = 0; s < plan.samples; ++s) {
            ++rep.samples;
            const IVec& b = roots[pick(rng, roots.size())];
            LMat u = inst.sample_U(a, rng), v = inst.sample_U(b, rng);
            nlohmann::json wit = {{"alpha", root_json(a)}, {"beta", root_json(b)}, {"index", s},
                                  {"u", lmat_to_json(u)},  {"v", lmat_to_json(v)}};
            LMat mu = inst.m_of(a, u);
            LMat c = inst.conj(mu, v);
            IVec target = root_reflection(m, a, b);
            auto re = inst.as_root_element(c);
            if (!re || re->root != target) {
                wit["reason"] = "m(u) v m(u)^-1 not in U_{r_a(b)}";
                rep.fail(wit);
                continue;
            }
            Q lhs = inst.valuation(re->r).value;
            Q rhs = inst.phi(b, v).value - Q(pairing_with_coroot(m, b, a)) * inst.phi(a, u).value;
            if (lhs != rhs) {
                wit["reason"] = "valuation identity";
                wit["lhs"] = to_string(lhs);
                wit["rhs"] = to_string(rhs);
                rep.fail(wit);
            }
        }
    }
    return rep;
}

ValuationReport check_V2_2(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("V2.2", inst, plan);
    auto rng = rng_for(rep.axiom, plan.seed);
    auto roots = inst.roots();
    const std::size_t per_t = 10;
    for (std::size_t ri = 0; ri < roots.size(); ++ri) {
        const IVec& a = roots[ri];
        for (std::size_t s0 = 0; s0 < plan.samples; s0 += per_t) {
            LMat t = inst.sample_Z(rng);
            std::optional<Q> diff;
            for (std::size_t s = s0; s < std::min(plan.samples, s0 + per_t); ++s) {
                ++rep.samples;
                LMat u = inst.sample_U(a, rng);
                LMat c = inst.conj(t, u);
                nlohmann::json wit = {{"root", root_json(a)}, {"index", s}, {"t", lmat_to_json(t)}, {"u", lmat_to_json(u)}};
                auto re = inst.as_root_element(c);
                if (!re || re->root != a) {
                    wit["reason"] = "Z does not normalize U_root";
                    rep.fail(wit);
                    continue;
                }
                Q d = inst.valuation(re->r).value - inst.phi(a, u).value;
                if (!diff) diff = d;
                if (*diff != d) {
                    wit["reason"] = "phi(t u t^-1) - phi(u) not constant";
                    rep.fail(wit);
                }
            }
        }
    }
    return rep;
}

ValuationReport check_V3(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("V3", inst, plan);
    auto rng = rng_for(rep.axiom, plan.seed);
    auto roots = inst.roots();
    auto part = partners(inst, roots);
    std::size_t undecided = 0;
    for (std::size_t ri = 0; ri < roots.size(); ++ri) {
        if (part[ri].empty()) continue;
        for (std::size_t s = 0; s < plan.samples; ++s) {
            const IVec& a = roots[ri];
            const IVec& b = roots[part[ri][pick(rng, part[ri].size())]];
            LMat u = inst.sample_U(a, rng), v = inst.sample_U(b, rng);
            nlohmann::json why;
            auto verdict = check_commutator(inst, a, b, u, v, true, why);
            if (verdict == CommutatorVerdict::Undecided) {
                ++undecided;
                continue;
            }
            ++rep.samples;
            if (verdict == CommutatorVerdict::Bad) {
                why["alpha"] = root_json(a);
                why["beta"] = root_json(b);
                why["index"] = s;
                why["u"] = lmat_to_json(u);
                why["v"] = lmat_to_json(v);
                rep.fail(why);
            }
        }
    }
    if (undecided > 0)
        rep.note = std::to_string(undecided) + " sampled pairs with several roots p*a+q*b skipped (no decomposition oracle)";
    if (rep.samples == 0 && rep.status != CheckStatus::Fail) rep.status = CheckStatus::Skipped;
    return rep;
}

ValuationReport check_V4(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("V4", inst, plan);
    rep.status = CheckStatus::Skipped;
    rep.note = "reduced root system: no root 2a, the axiom is vacuous";
    return rep;
}

std::vector<ValuationReport> check_valuation(const RootDatumInstance& inst, const CheckPlan& plan) {
    return {check_V0(inst, plan),   check_V1(inst, plan), check_V2_1(inst, plan),
            check_V2_2(inst, plan), check_V3(inst, plan), check_V4(inst, plan)};
}

ValuationReport check_RD1(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("RD1", inst, plan);
    auto rng = rng_for(rep.axiom, plan.seed);
    for (const auto& a : inst.roots()) {
        for (std::size_t s = 0; s < plan.samples; ++s) {
            ++rep.samples;
            LMat u = inst.sample_U(a, rng);
            LMat t = inst.sample_Z(rng);
            nlohmann::json wit = {{"root", root_json(a)}, {"index", s}, {"u", lmat_to_json(u)}, {"t", lmat_to_json(t)}};
            if (lmat_is_identity(u)) {
                wit["reason"] = "sampled root element is trivial";
                rep.fail(wit);
                continue;
            }
            if (!inst.in_Z(t)) {
                wit["reason"] = "Z sample not in Z";
                rep.fail(wit);
            }
            auto re = inst.as_root_element(inst.conj(t, u));
            if (!re || re->root != a) {
                wit["reason"] = "Z does not normalize U_root";
                rep.fail(wit);
            }
        }
    }
    return rep;
}

ValuationReport check_RD2(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("RD2", inst, plan);
    auto rng = rng_for(rep.axiom, plan.seed);
    auto roots = inst.roots();
    auto part = partners(inst, roots);
    std::size_t undecided = 0;
    for (std::size_t ri = 0; ri < roots.size(); ++ri) {
        if (part[ri].empty()) continue;
        for (std::size_t s = 0; s < plan.samples; ++s) {
            const IVec& a = roots[ri];
            const IVec& b = roots[part[ri][pick(rng, part[ri].size())]];
            LMat u = inst.sample_U(a, rng), v = inst.sample_U(b, rng);
            nlohmann::json why;
            auto verdict = check_commutator(inst, a, b, u, v, false, why);
            if (verdict == CommutatorVerdict::Undecided) {
                ++undecided;
                continue;
            }
            ++rep.samples;
            if (verdict == CommutatorVerdict::Bad) {
                why["alpha"] = root_json(a);
                why["beta"] = root_json(b);
                why["index"] = s;
                rep.fail(why);
            }
        }
    }
    if (undecided > 0) rep.note = std::to_string(undecided) + " sampled pairs undecided (several roots p*a+q*b)";
    if (rep.samples == 0 && rep.status != CheckStatus::Fail) rep.status = CheckStatus::Skipped;
    return rep;
}

ValuationReport check_RD4(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("RD4", inst, plan);
    auto rng = rng_for(rep.axiom, plan.seed);
    const auto& m = inst.model().matrix();
    auto roots = inst.roots();
    for (const auto& a : roots) {
        for (std::size_t s = 0; s < plan.samples; ++s) {
            ++rep.samples;
            LMat u = inst.sample_U(a, rng), u2 = inst.sample_U(a, rng);
            const IVec& b = roots[pick(rng, roots.size())];
            LMat v = inst.sample_U(b, rng);
            nlohmann::json wit = {{"root", root_json(a)}, {"beta", root_json(b)}, {"index", s}, {"u", lmat_to_json(u)}};
            LMat mu = inst.m_of(a, u), mu2 = inst.m_of(a, u2);
            // The witness factors u' = u'' lie in U_{-a}.
            auto re = inst.as_root_element(u);
            auto side = inst.as_root_element(inst.x(ineg(a), -1 / re->r));
            if (!side || side->root != ineg(a)) {
                wit["reason"] = "m(u) witness factor outside U_{-a}";
                rep.fail(wit);
            }
            auto cv = inst.as_root_element(inst.conj(mu, v));
            if (!cv || cv->root != root_reflection(m, a, b)) {
                wit["reason"] = "m(u) does not conjugate U_b into U_{s_a(b)}";
                rep.fail(wit);
            }
            LMat q = inst.mul(inst.inv(mu), mu2);
            bool sameLinear = false;
            try {
                sameLinear = nu_of(inst, mu).linear == nu_of(inst, mu2).linear;
            } catch (const std::exception& e) {
                wit["error"] = e.what();
            }
            if (!inst.in_Z(q) || !sameLinear) {
                wit["u2"] = lmat_to_json(u2);
                wit["reason"] = "m(u) Z != m(u2) Z";
                rep.fail(wit);
            }
        }
    }
    return rep;
}

ValuationReport check_RD5(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("RD5", inst, plan);
    if (!inst.in_ZUplus(inst.identity()).has_value()) {
        rep.status = CheckStatus::Skipped;
        rep.note = "no decomposition oracle for Z U+ membership";
        return rep;
    }
    auto rng = rng_for(rep.axiom, plan.seed);
    std::vector<IVec> pos, negs;
    for (const auto& a : inst.roots()) (is_nonneg(a) ? pos : negs).push_back(a);
    for (std::size_t s = 0; s < plan.samples; ++s) {
        ++rep.samples;
        LMat g = inst.identity();
        std::size_t len = 1 + pick(rng, 4);
        for (std::size_t k = 0; k < len; ++k) g = inst.mul(g, inst.sample_U(negs[pick(rng, negs.size())], rng));
        if (!lmat_is_identity(g) && *inst.in_ZUplus(g))
            rep.fail({{"index", s}, {"g", lmat_to_json(g)}, {"reason", "nontrivial element of U- lies in Z U+"}});
        // Positive control.
        LMat h = inst.sample_Z(rng);
        for (std::size_t k = 0; k < len; ++k) h = inst.mul(h, inst.sample_U(pos[pick(rng, pos.size())], rng));
        if (!*inst.in_ZUplus(h))
            rep.fail({{"index", s}, {"h", lmat_to_json(h)}, {"reason", "oracle rejects an element of Z U+"}});
    }
    return rep;
}

ValuationReport check_GRD(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("GRD", inst, plan);
    rep.status = CheckStatus::Skipped;
    rep.note = "informational: every element handled is built from Z and the root groups";
    return rep;
}

std::vector<ValuationReport> check_root_datum(const RootDatumInstance& inst, const CheckPlan& plan) {
    return {check_RD1(inst, plan), check_RD2(inst, plan), check_RD4(inst, plan), check_RD5(inst, plan),
            check_GRD(inst, plan)};
}

ValuationReport check_nu(const RootDatumInstance& inst, const CheckPlan& plan) {
    auto rep = start("nu", inst, plan);
    auto rng = rng_for(rep.axiom, plan.seed);
    const auto& model = inst.model();
    auto roots = inst.roots();
    for (std::size_t s = 0; s < plan.samples; ++s) {
        ++rep.samples;
        const IVec& a = roots[pick(rng, roots.size())];
        LMat u = inst.sample_U(a, rng);
        Q lvl = inst.phi(a, u).value;
        auto got = nu_of(inst, inst.m_of(a, u));
        auto want = reflection(model, a, lvl);
        if (!(got == want))
            rep.fail({{"index", s}, {"root", root_json(a)}, {"u", lmat_to_json(u)}, {"reason", "nu(m(u)) != s_{a,phi(u)}"}});
        auto w1 = sample_n_word(inst, rng), w2 = sample_n_word(inst, rng);
        LMat n1 = n_from_word(inst, w1), n2 = n_from_word(inst, w2);
        auto lhs = nu_of(inst, inst.mul(n1, n2));
        auto rhs = compose(model, nu_of(inst, n1), nu_of(inst, n2));
        if (!(lhs == rhs))
            rep.fail({{"index", s}, {"n1", lmat_to_json(n1)}, {"n2", lmat_to_json(n2)}, {"reason", "nu not multiplicative"}});
    }
    return rep;
}

std::vector<Q> lambda_set(const RootDatumInstance& inst, const IVec& root, std::size_t budget, std::uint64_t seed) {
    auto rng = rng_for("lambda", seed);
    std::set<Q> vals;
    for (std::size_t s = 0; s < budget; ++s) {
        ExtQ v = inst.phi(root, inst.sample_U(root, rng));
        if (v.is_finite()) vals.insert(v.value);
    }
    return {vals.begin(), vals.end()};
}

bool lambda_set_symmetric(const RootDatumInstance& inst, const IVec& root, std::size_t budget, std::uint64_t seed) {
    auto a = lambda_set(inst, root, budget, seed);
    auto b = lambda_set(inst, ineg(root), budget, seed);
    std::set<Q> nb;
    for (const auto& v : b) nb.insert(-v);
    return std::set<Q>(a.begin(), a.end()) == nb;
}

}  // namespace hovelkit
