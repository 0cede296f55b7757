#include "hovelkit/cli.hpp"

#include "hovelkit/bordered_apartment.hpp"
#include "hovelkit/errors.hpp"
#include "hovelkit/parahoric_hovel.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

namespace hovelkit {

namespace {

struct Config {
    std::string subcommand;
    std::string matrix = "a2";
    std::string model = "a2,Z";
    std::string format = "json";
    std::string kind = "real";
    std::string spec = "cl_phi";
    std::string shape = "point:0";
    std::string instance = "sl2";
    std::string flavor = "strong";
    std::string x = "0", y = "0";
    std::string sign = "+", toSign = "+";
    std::vector<std::size_t> word, J, toWord, toJ;
    std::int64_t cap = 6;
    std::int64_t p = 2;
    std::size_t length = 6;
    std::size_t depth = 4;
    std::size_t samples = 500;
    std::size_t points = 20;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    bool certify = false;
    std::string dot;
    std::size_t threads = 1;

    nlohmann::json to_json() const {
        return {{"subcommand", subcommand}, {"matrix", matrix},   {"model", model},     {"format", format},
                {"kind", kind},             {"spec", spec},       {"shape", shape},     {"instance", instance},
                {"flavor", flavor},         {"x", x},             {"y", y},             {"sign", sign},
                {"word", word},             {"J", J},             {"to_sign", toSign},  {"to_word", toWord},
                {"to_J", toJ},              {"cap", cap},         {"p", p},             {"length", length},
                {"depth", depth},           {"samples", samples}, {"points", points},   {"trials", trials},
                {"seed", seed},             {"certify", certify}, {"dot", dot},         {"threads", threads}};
    }
};

KacMoodyMatrix resolve_matrix(const std::string& text) {
    if (auto m = named_matrix(text)) return *m;
    std::string body = text;
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw ParseError("cannot read matrix file " + text.substr(1));
        body.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return matrix_from_json(nlohmann::json::parse(body));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("matrix must be an alias (a1, a2, b2, g2, aff_a1, hyp_33), JSON rows or @file: " +
                         std::string(e.what()));
    }
}

Vec parse_vec(const std::string& text) { return parse_shape("point:" + text).points.at(0); }

std::size_t thread_count() {
    if (const char* s = std::getenv("HOVELKIT_THREADS")) {
        long v = std::strtol(s, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 1;
}

using Job = std::function<std::vector<ValuationReport>()>;

/// Runs jobs on up to `threads` workers; output is sorted so it does not depend on the schedule.
std::vector<ValuationReport> run_jobs(const std::vector<Job>& jobs, std::size_t threads) {
    std::vector<std::vector<ValuationReport>> results(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < jobs.size();) {
            try {
                results[i] = jobs[i]();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(threads, jobs.size()); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<ValuationReport> out;
    for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
    std::stable_sort(out.begin(), out.end(), [](const ValuationReport& a, const ValuationReport& b) {
        return std::tie(a.instance, a.axiom) < std::tie(b.instance, b.axiom);
    });
    return out;
}

int emit_reports(const std::vector<ValuationReport>& reps, const Config& cfg, std::ostream& out) {
    bool failed = false;
    for (const auto& r : reps) {
        failed = failed || r.status == CheckStatus::Fail;
        if (cfg.format == "text")
            out << r.instance << " " << r.axiom << " " << to_string(r.status) << " samples=" << r.samples
                << " failures=" << r.failureCount << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
        else
            out << r.to_json().dump() << "\n";
    }
    if (cfg.format == "text") out << (failed ? "FAIL" : "PASS") << "\n";
    else out << nlohmann::json{{"result", failed ? "fail" : "pass"}, {"reports", reps.size()}}.dump() << "\n";
    return failed ? 1 : 0;
}

std::vector<std::string> instance_names(const std::string& name, bool classicalOnly) {
    if (name != "all") return {name};
    if (classicalOnly) return {"sl2", "sl3"};
    return {"sl2", "sl3", "loop_sl2"};
}

std::shared_ptr<const SLnInstance> classical(const std::string& name, std::int64_t p) {
    if (name == "sl2") return sl2_instance(p);
    if (name == "sl3") return sl3_instance(p);
    throw ParseError("instance must be sl2 or sl3 here (got '" + name + "')");
}

VectorialFacet facet_of(const KacMoodyMatrix& m, const std::string& sign, const std::vector<std::size_t>& word,
                        const std::vector<std::size_t>& J) {
    if (sign != "+" && sign != "-") throw ParseError("sign must be + or -");
    return canonical_facet(m, sign[0], word, J);
}

int dispatch(const Config& cfg, std::ostream& out) {
    const std::string& cmd = cfg.subcommand;
    const bool text = cfg.format == "text";
    auto line = [&](const nlohmann::json& j) { out << j.dump() << "\n"; };

    if (cmd == "classify") {
        auto c = validate_and_classify(resolve_matrix(cfg.matrix));
        if (text) {
            out << c.summary() << "\n";
        } else {
            auto blocks = nlohmann::json::array();
            for (const auto& b : c.blocks)
                blocks.push_back({{"indices", b.indices}, {"type", to_string(b.type)}, {"shape", b.shape}});
            line({{"classification", c.summary()}, {"blocks", blocks}});
        }
        return 0;
    }
    if (cmd == "roots") {
        auto m = resolve_matrix(cfg.matrix);
        RootSlice s;
        if (cfg.kind == "real") s = real_roots(m, cfg.cap);
        else if (cfg.kind == "imaginary") s = imaginary_roots(m, cfg.cap);
        else if (cfg.kind == "all") s = all_roots(m, cfg.cap);
        else throw ParseError("--kind must be real, imaginary or all");
        for (const auto& r : s.roots) {
            if (text) out << to_string(r.tag) << " " << nlohmann::json(r.coords).dump() << "\n";
            else line({{"root", r.coords}, {"tag", to_string(r.tag)}, {"height", r.height()}});
        }
        nlohmann::json sum{{"count", s.roots.size()},
                           {"real", s.count(RootTag::Real)},
                           {"imaginary", s.count(RootTag::Imaginary)},
                           {"cap", cfg.cap}};
        if (text) out << s.roots.size() << " roots\n";
        else line(sum);
        return 0;
    }
    if (cmd == "weyl") {
        auto m = resolve_matrix(cfg.matrix);
        auto els = weyl_elements(m, cfg.length);
        for (const auto& w : els) {
            if (text) out << nlohmann::json(w.word).dump() << "\n";
            else line({{"word", w.word}, {"length", w.length()}});
        }
        nlohmann::json sum{{"count", els.size()}, {"length_cap", cfg.length}};
        if (validate_and_classify(m).all_finite()) sum["order"] = *weyl_order(m);
        if (text) out << els.size() << " elements\n";
        else line(sum);
        return 0;
    }
    if (cmd == "facet") {
        auto m = resolve_matrix(cfg.matrix);
        auto real = build_realization(simply_connected_rgs(m), RealizationKind::Q);
        auto f = facet_of(m, cfg.sign, cfg.word, cfg.J);
        auto star = facet_star(m, f, cfg.length);
        auto j = facet_to_json(f);
        j["spherical"] = f.spherical;
        j["chamber"] = is_chamber(f);
        j["interior_point"] = vec_to_json(facet_interior_point(real, f));
        j["star_size"] = star.size();
        if (text) out << j["word"].dump() << " J=" << j["J"].dump() << (f.spherical ? " spherical" : " non-spherical")
                      << " star=" << star.size() << "\n";
        else line(j);
        return 0;
    }
    if (cmd == "enclose") {
        auto m = parse_model(cfg.model, cfg.cap);
        auto e = enclosure(m, parse_spec(cfg.spec), parse_shape(cfg.shape));
        auto region = describe_region(e.halfSpaces, m.dim());
        if (text) {
            out << region << "\n";
        } else {
            auto j = enclosure_to_json(e);
            j["region"] = region;
            line(j);
        }
        return 0;
    }
    if (cmd == "preorder") {
        auto m = parse_model(cfg.model, cfg.cap);
        auto v = preorder_leq(m, parse_vec(cfg.x), parse_vec(cfg.y));
        if (text) out << to_string(v) << "\n";
        else line({{"x", cfg.x}, {"y", cfg.y}, {"leq", to_string(v)}});
        return 0;
    }
    if (cmd == "facade" || cmd == "project") {
        auto m = std::make_shared<const ApartmentModel>(parse_model(cfg.model, cfg.cap));
        BorderedApartment b(m, parse_flavor(cfg.flavor));
        auto F = facet_of(m->matrix(), cfg.sign, cfg.word, cfg.J);
        auto pt = b.point(parse_vec(cfg.x), F);
        if (cmd == "project") {
            auto F1 = facet_of(m->matrix(), cfg.toSign, cfg.toWord, cfg.toJ);
            pt = project(b, pt, F1);
        }
        auto j = facade_point_to_json(pt);
        j["facade_dim"] = pt.facade->dim();
        j["mode"] = to_string(pt.facade->mode);
        j["real_roots"] = pt.facade->realRoots.size();
        if (text) out << j.dump() << "\n";
        else line(j);
        return 0;
    }
    if (cmd == "residue") {
        auto m = parse_model(cfg.model, cfg.cap);
        auto rs = residue_roots(m, parse_vec(cfg.x));
        auto j = rs.to_json();
        j["closed"] = rs.closed(m);
        if (text) out << rs.roots.size() << " roots" << (rs.special ? ", special" : "") << "\n";
        else line(j);
        return 0;
    }
    if (cmd == "tree") {
        Tree t = build_tree(cfg.p, cfg.depth);
        if (!cfg.dot.empty()) {
            std::ofstream f(cfg.dot);
            if (!f) throw ParseError("cannot write " + cfg.dot);
            f << t.to_dot();
        }
        if (cfg.format == "dot") out << t.to_dot();
        else if (text) out << "sphere sizes " << nlohmann::json(t.sphere_sizes()).dump() << "\n";
        else line({{"p", t.p}, {"depth", t.depth}, {"vertices", t.vertices.size()}, {"sphere_sizes", t.sphere_sizes()}});
        return 0;
    }

    CheckPlan plan{cfg.samples, cfg.seed};
    std::vector<Job> jobs;
    if (cmd == "check-valuation" || cmd == "check-rd") {
        for (const auto& name : instance_names(cfg.instance, false)) {
            jobs.push_back([=] {
                auto inst = make_instance(name, cfg.p, cfg.cap);
                auto reps = cmd == "check-valuation" ? check_valuation(*inst, plan) : check_root_datum(*inst, plan);
                if (cmd == "check-valuation") reps.push_back(check_nu(*inst, plan));
                return reps;
            });
        }
    } else if (cmd == "check-parahoric") {
        for (const auto& name : instance_names(cfg.instance, true)) {
            jobs.push_back([=] {
                ParahoricFamily fam(classical(name, cfg.p));
                auto pts = sample_points(fam.model(), cfg.points, cfg.seed);
                auto reps = check_parahoric_axioms(fam, pts, plan);
                for (const auto& r : good_fixator_check(fam, Shape::segment(pts[0], pts.back()), plan).all())
                    reps.push_back(r);
                reps.push_back(apartment_fixator_check(fam));
                for (const auto& r : iwasawa_and_bbi_checks(fam, plan)) reps.push_back(r);
                if (cfg.certify) reps.push_back(precertify_oracle(fam, pts, 6));
                return reps;
            });
        }
    } else if (cmd == "check-mao") {
        for (const auto& name : instance_names(cfg.instance, true)) {
            jobs.push_back([=] {
                ParahoricFamily fam(classical(name, cfg.p));
                return std::vector<ValuationReport>{check_MAO(fam, cfg.trials, cfg.seed)};
            });
        }
    } else {
        throw ParseError("unknown subcommand '" + cmd + "'");
    }
    return emit_reports(run_jobs(jobs, cfg.threads), cfg, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    cfg.threads = thread_count();
    CLI::App app{"hovelkit: Kac-Moody root systems, apartments, valuated root data and small hovels"};
    app.require_subcommand(1, 1);
    app.add_option("--format", cfg.format, "json, text or dot")->check(CLI::IsMember({"json", "text", "dot"}));

    auto sub = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->callback([&cfg, name] { cfg.subcommand = name; });
        s->add_option("--format", cfg.format, "json, text or dot")->check(CLI::IsMember({"json", "text", "dot"}));
        return s;
    };
    auto matrixOpt = [&](CLI::App* s) { s->add_option("--matrix", cfg.matrix, "alias, JSON rows or @file"); };
    auto modelOpt = [&](CLI::App* s) {
        s->add_option("--model", cfg.model, "matrix alias and value group, e.g. a2,Z");
        s->add_option("--cap", cfg.cap, "root height cap");
    };
    auto facetOpt = [&](CLI::App* s) {
        s->add_option("--sign", cfg.sign, "+ or -");
        s->add_option("--word", cfg.word, "Weyl word, comma separated")->delimiter(',');
        s->add_option("--J", cfg.J, "type, comma separated")->delimiter(',');
    };
    auto checkOpt = [&](CLI::App* s, const std::string& instances) {
        s->add_option("--instance", cfg.instance, instances);
        s->add_option("--p", cfg.p, "prime");
        s->add_option("--samples", cfg.samples, "samples per root or per point");
        s->add_option("--seed", cfg.seed, "seed");
        s->add_option("--cap", cfg.cap, "height cap of the loop instance");
    };

    auto* c = sub("classify", "block decomposition and types");
    matrixOpt(c);
    c = sub("roots", "real or imaginary roots up to a height cap");
    matrixOpt(c);
    c->add_option("--cap", cfg.cap, "height cap");
    c->add_option("--kind", cfg.kind, "real, imaginary or all");
    c = sub("weyl", "Weyl group elements up to a length cap");
    matrixOpt(c);
    c->add_option("--length", cfg.length, "length cap");
    c = sub("facet", "vectorial facet data");
    matrixOpt(c);
    facetOpt(c);
    c->add_option("--length", cfg.length, "length cap of the star search");
    c = sub("enclose", "enclosure of a shape with certificates");
    modelOpt(c);
    c->add_option("--spec", cfg.spec, "cl_phi, cl_phi_R, cl_delta, cl_delta_ma, cl_delta_R, cl_sharp, conv");
    c->add_option("--shape", cfg.shape, "e.g. point:0.3, segment:0;1");
    c = sub("preorder", "x <= y in the Tits preorder");
    modelOpt(c);
    c->add_option("--x", cfg.x, "point");
    c->add_option("--y", cfg.y, "point");
    c = sub("facade", "point of a facade of the bordered apartment");
    modelOpt(c);
    facetOpt(c);
    c->add_option("--x", cfg.x, "point");
    c->add_option("--flavor", cfg.flavor, "strong, essential or injective");
    c = sub("project", "projection between facades");
    modelOpt(c);
    facetOpt(c);
    c->add_option("--x", cfg.x, "point");
    c->add_option("--flavor", cfg.flavor, "strong, essential or injective");
    c->add_option("--to-sign", cfg.toSign, "+ or -");
    c->add_option("--to-word", cfg.toWord, "target Weyl word")->delimiter(',');
    c->add_option("--to-J", cfg.toJ, "target type")->delimiter(',');
    c = sub("residue", "residue root system at a point");
    modelOpt(c);
    c->add_option("--x", cfg.x, "point");
    c = sub("tree", "ball in the tree of SL2(Q, v_p)");
    c->add_option("--p", cfg.p, "prime <= 5");
    c->add_option("--depth", cfg.depth, "radius <= 6");
    c->add_option("--dot", cfg.dot, "write DOT to this file");
    c = sub("check-valuation", "V0-V4 and nu");
    checkOpt(c, "sl2, sl3, loop_sl2 or all");
    c = sub("check-rd", "RD1, RD2, RD4, RD5, GRD");
    checkOpt(c, "sl2, sl3, loop_sl2 or all");
    c = sub("check-parahoric", "P-axioms, good fixators, Q(A), Iwasawa and BBI");
    checkOpt(c, "sl2, sl3 or all");
    c->add_option("--points", cfg.points, "sampled apartment points");
    c->add_flag("--certify", cfg.certify, "also certify the membership oracle by word search");
    c = sub("check-mao", "segment equality in two apartments");
    checkOpt(c, "sl2, sl3 or all");
    c->add_option("--trials", cfg.trials, "configurations");

    std::vector<std::string> argvStore{"hovelkit"};
    argvStore.insert(argvStore.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argvStore) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    }
    if (cfg.format != "text" && cfg.format != "dot") out << nlohmann::json{{"config", cfg.to_json()}}.dump() << "\n";
    else if (cfg.format == "text") out << "# config " << cfg.to_json().dump() << "\n";
    try {
        return dispatch(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace hovelkit
