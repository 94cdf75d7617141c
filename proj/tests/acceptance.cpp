// One line per acceptance criterion; exit status 1 when any criterion fails.

#include "mcca/cli.hpp"
#include "mcca/diag_solver.hpp"
#include "mcca/dsl.hpp"
#include "mcca/whitehead.hpp"
#include "support.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

using namespace mcca;
using Json = nlohmann::json;
using Tuple = std::vector<Rational>;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass)
            detail.clear();
        pass = false;
        detail += (detail.empty() ? "" : "; ") + why;
    }
    void note(const std::string& s)
    {
        if (pass)
            detail += (detail.empty() ? "" : "; ") + s;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    return buf;
}

Json cli_json(const std::vector<std::string>& args, int* code = nullptr)
{
    std::ostringstream out, err;
    const int c = cli::run(args, out, err);
    if (code)
        *code = c;
    return Json::parse(out.str());
}

std::set<Tuple> tuples(const Json& arr)
{
    std::set<Tuple> out;
    for (const auto& t : arr) {
        Tuple p;
        for (const auto& x : t)
            p.push_back(parse_rational(x.get<std::string>()));
        out.insert(p);
    }
    return out;
}

Tuple tuple(std::initializer_list<int> v)
{
    Tuple t;
    for (int x : v)
        t.emplace_back(x);
    return t;
}

std::size_t class_rank(const SullivanModel& m, int k, int cutoff, const std::vector<Polynomial>& ps)
{
    const std::size_t dim = cohomology(m, k, cutoff).dimension();
    RationalMatrix coords(ps.size(), dim);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto c = class_of(m, k, ps[i], cutoff).coordinates;
        for (std::size_t j = 0; j < dim; ++j)
            coords(i, j) = c[j];
    }
    return rank(coords);
}

Outcome solve_example(const std::string& label, std::size_t morphisms, const std::set<Tuple>& autos,
                      const std::string& group)
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    const Json j = cli_json({"solve", label, "--json"}, &code);
    const double s = seconds_since(t0);
    const Json& r = j["results"];
    if (code != 0)
        o.fail("exit code " + std::to_string(code));
    if (r["morphisms"].size() != morphisms)
        o.fail(std::to_string(r["morphisms"].size()) + " morphisms");
    if (tuples(r["automorphisms"]) != autos)
        o.fail("automorphism set differs");
    if (r["group"]["name"] != group)
        o.fail("group " + r["group"]["name"].get<std::string>());
    if (s >= 60)
        o.fail("took " + fmt_seconds(s));
    o.note(std::to_string(r["morphisms"].size()) + " morphisms, " + std::to_string(r["automorphisms"].size()) +
           " automorphisms, " + r["group"]["name"].get<std::string>() + ", " + fmt_seconds(s));
    return o;
}

Outcome criterion1()
{
    return solve_example("V-ex31", 3, {tuple({1, 1, 1, 1, 1, 1}), tuple({1, -1, -1, 1, -1, 1})}, "Z2");
}

Outcome criterion2()
{
    return solve_example("W-ex32", 5,
                         {tuple({1, 1, 1, 1, 1, 1, 1}), tuple({1, 1, -1, -1, 1, -1, 1}),
                          tuple({-1, 1, 1, 1, 1, 1, 1}), tuple({-1, 1, -1, -1, 1, -1, 1})},
                         "Z2⊕Z2");
}

Outcome criterion3()
{
    Outcome o;
    const ModelPtr v = load_builtin("V-ex31");
    const GeneratorSet& g = v->generators();
    const struct {
        int k;
        const char* rep;
    } low[] = {{42, "x1^3*x2"}, {44, "x1^2*x2^2"}, {46, "x1*x2^3"}};
    for (const auto& c : low) {
        const std::size_t dim = cohomology(*v, c.k, c.k - 2).dimension();
        if (dim != 1 || class_rank(*v, c.k, c.k - 2, {parse_polynomial(c.rep, g)}) != 1)
            o.fail("H^" + std::to_string(c.k) + " has dimension " + std::to_string(dim));
    }
    const std::vector<Polynomial> top{parse_polynomial("y1*y2*x2^3 - y1*y3*x1*x2^2 + y2*y3*x1^2*x2", g),
                                      parse_polynomial("x1^12", g), parse_polynomial("x2^10", g)};
    const std::size_t dim_v = cohomology(*v, 120, 118).dimension();
    if (dim_v != 3 || class_rank(*v, 120, 118, top) != 3)
        o.fail("dim H^120(ΛV^{<=118}) = " + std::to_string(dim_v));
    const ModelPtr w = load_builtin("W-ex32");
    const std::size_t dim_w = cohomology(*w, 120, 118).dimension();
    if (dim_w != 4)
        o.fail("dim H^120(ΛW^{<=118}) = " + std::to_string(dim_w) + ", expected 4 (dense oracle agrees)");
    o.note("V: 1, 1, 1, 3 with displayed spans; W: " + std::to_string(dim_w));
    release_cache(*v);
    release_cache(*w);
    return o;
}

Outcome criterion4()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Rational> grid{Rational(0), Rational(1), Rational(-1), Rational(2),
                                     Rational(-2), Rational(1, 2), Rational(-1, 2)};
    std::size_t accepted = 0, rejected = 0;
    for (const std::string label : {"V-ex31", "W-ex32"}) {
        const ModelPtr m = load_builtin(label);
        const MonomialConstraintSystem s = extract_constraints(*m);
        const SolutionSet sol = solve(s);
        const auto all = sol.all();
        const std::set<Tuple> solutions(all.begin(), all.end());
        const LiftCheck lc = verify_by_lifting(m, m, s, sol);
        if (!lc.ok())
            o.fail(label + ": a solver solution does not lift");
        const auto sources = s.sources();

        std::vector<std::size_t> idx(sources.size(), 0);
        for (bool more = true; more;) {
            Tuple p(s.size());
            std::vector<bool> known(s.size(), false);
            for (std::size_t i = 0; i < sources.size(); ++i) {
                p[sources[i]] = grid[idx[i]];
                known[sources[i]] = true;
            }
            // Dependents from the first equation that targets them, in variable order.
            for (std::size_t v = 0; v < s.size(); ++v) {
                if (known[v])
                    continue;
                for (const auto& e : s.equations) {
                    if (!e.target || *e.target != v)
                        continue;
                    Rational value = e.coefficient;
                    for (std::size_t w = 0; w < s.size(); ++w)
                        for (int k = 0; k < e.rhs_exp[w]; ++k)
                            value *= p[w];
                    p[v] = value;
                    known[v] = true;
                    break;
                }
            }
            const bool is_solution = satisfies(s, p);
            const LiftResult lift = try_lift(to_map(m, m, s, p));
            if (is_solution != solutions.count(p) > 0)
                o.fail(label + ": solver and equations disagree on a grid point");
            if (is_solution) {
                ++accepted;
                if (!lift.ok())
                    o.fail(label + ": solution obstructed");
            }
            else {
                ++rejected;
                if (lift.ok() || !lift.obstruction)
                    o.fail(label + ": non-solution lifted");
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == grid.size())
                idx[k++] = 0;
            more = k < idx.size();
        }
        release_cache(*m);
    }
    const double sec = seconds_since(t0);
    if (sec >= 600)
        o.fail("took " + fmt_seconds(sec));
    o.note(std::to_string(accepted) + " grid solutions lift, " + std::to_string(rejected) +
           " non-solutions obstructed, " + fmt_seconds(sec));
    return o;
}

Outcome criterion5()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t nodes = 0, columns = 0;
    for (const auto& label : builtin_labels()) {
        const ModelPtr m = load_builtin(label);
        const WhiteheadSequence w = build_wes(m);
        const ExactnessReport r = check_exactness(w);
        nodes += r.nodes.size();
        if (!r.exact())
            o.fail(label + " not exact at " + r.first_failure()->name);
        for (const auto& d : w.degrees)
            for (std::size_t c = 0; c < d.generators.size(); ++c) {
                const Polynomial& dv = m->differential(d.generators[c]);
                const auto cls = dv.is_zero() ? std::vector<Rational>(d.gamma_dim)
                                              : class_of(*m, d.n + 1, dv, d.n - 1).coordinates;
                ++columns;
                if (make_dense(d.b.columns[c], d.gamma_dim) != cls)
                    o.fail(label + ": b column differs from class_of at n=" + std::to_string(d.n));
            }
        release_cache(*m);
    }
    o.note(std::to_string(builtin_labels().size()) + " models, " + std::to_string(nodes) + " exact nodes, " +
           std::to_string(columns) + " b-columns, " + fmt_seconds(seconds_since(t0)));
    return o;
}

Outcome criterion6()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    constexpr int kTop = 121;
    std::size_t checked = 0;
    for (const auto& label : builtin_labels()) {
        const ModelPtr m = load_builtin(label);
        const GeneratorSet& g = m->generators();
        const auto series = mcca::testing::hilbert_series(g, kTop);
        std::vector<std::vector<Monomial>> bases(kTop + 1);
        for (int k = 0; k <= kTop; ++k) {
            bases[k] = basis(g, k);
            if (Integer(bases[k].size()) != series[static_cast<std::size_t>(k)])
                o.fail(label + ": basis size in degree " + std::to_string(k));
            // d∘d on an evenly spaced sample of the basis
            const std::size_t step = std::max<std::size_t>(1, bases[k].size() / 24);
            for (std::size_t i = 0; i < bases[k].size(); i += step) {
                ++checked;
                if (k < kTop && !apply_differential(*m, apply_differential(*m, bases[k][i])).is_zero())
                    o.fail(label + ": d∘d ≠ 0 on " + bases[k][i].to_string(g));
            }
        }
        mcca::testing::Gen gen(std::hash<std::string>{}(label) & 0xffff);
        auto pick = [&](int max_degree) {
            for (;;) {
                const int k = gen.integer(0, max_degree);
                if (!bases[k].empty())
                    return bases[k][static_cast<std::size_t>(gen.integer(0, static_cast<int>(bases[k].size()) - 1))];
            }
        };
        for (int trial = 0; trial < 200; ++trial) {
            const Monomial a = pick(kTop / 2), b = pick(kTop - a.degree());
            const Polynomial pa(a), pb(b);
            const Polynomial ab = multiply(pa, pb, g), ba = multiply(pb, pa, g);
            if (ab != ba * Rational((a.degree() * b.degree()) % 2 ? -1 : 1))
                o.fail(label + ": graded commutativity");
            const Monomial c = pick(std::max(0, kTop - a.degree() - b.degree()));
            const Polynomial pc(c);
            if (multiply(ab, pc, g) != multiply(pa, multiply(pb, pc, g), g))
                o.fail(label + ": associativity");
            if (a.degree() + b.degree() < kTop) {
                const Polynomial lhs = apply_differential(*m, ab);
                const Polynomial rhs = multiply(apply_differential(*m, a), pb, g) +
                                       multiply(pa, apply_differential(*m, b), g) * Rational(a.degree() % 2 ? -1 : 1);
                if (lhs != rhs)
                    o.fail(label + ": Leibniz");
            }
            checked += 3;
        }
    }
    o.note(std::to_string(builtin_labels().size()) + " models to degree 121, " + std::to_string(checked) +
           " checks, " + fmt_seconds(seconds_since(t0)));
    return o;
}

Outcome criterion7()
{
    Outcome o;
    std::vector<std::size_t> ranks;
    for (int k = 2; k <= 7; ++k) {
        const ModelPtr m = load_builtin("E" + std::to_string(k));
        const auto s = extract_constraints(*m);
        const auto sol = solve(s);
        const GroupStructure g = group_structure(sol);
        if (!g.finite)
            o.fail("E" + std::to_string(k) + " infinite");
        if (!verify_by_lifting(m, m, s, sol).ok())
            o.fail("E" + std::to_string(k) + " lift check");
        ranks.push_back(g.sign_rank);
        release_cache(*m);
    }
    if (ranks != std::vector<std::size_t>{2, 3, 4, 5, 6, 7})
        o.fail("E ranks not 2..7");

    const Json u1 = cli_json({"solve", "U1", "--json"});
    if (u1["results"]["group"]["finite"].get<bool>() || u1["results"]["group"]["free_rank"].get<int>() < 1)
        o.fail("U1 is not an infinite family");
    bool warned = false;
    for (const auto& w : u1["warnings"])
        warned = warned || w.get<std::string>().find("x3^40") != std::string::npos;
    if (!warned)
        o.fail("U1 vanished-term warning missing");

    int code = 0;
    const Json tower = cli_json({"reproduce", "tower", "--json"}, &code);
    std::set<std::string> reported;
    for (const auto& c : tower["results"]["tower"]["checks"])
        if (c["status"] == "known-discrepancy")
            reported.insert(c["id"].get<std::string>());
    for (int k = 2; k <= 8; ++k)
        if (!reported.count("tower.U" + std::to_string(k)))
            o.fail("U" + std::to_string(k) + " discrepancy not reported");
    if (!reported.count("tower.realizable"))
        o.fail("realizability discrepancy not reported");
    if (code != 0)
        o.fail("reproduce tower exit code " + std::to_string(code));
    std::string list;
    for (std::size_t r : ranks)
        list += (list.empty() ? "" : ",") + std::to_string(r);
    o.note("E2..E7 ranks " + list + "; U1 infinite with warning; U2..U8 discrepancies reported");
    return o;
}

Outcome criterion8()
{
    Outcome o;
    const ModelPtr w = load_builtin("W-ex32");
    const auto s = extract_constraints(*w);
    const SolutionSet sol = solve(s);
    const SupportCase* inv = sol.invertible();
    if (!inv || inv->solutions.size() != 4) {
        o.fail("expected 4 automorphisms");
        return o;
    }
    const auto& as = inv->solutions;
    const Tuple id = tuple({1, 1, 1, 1, 1, 1, 1});
    if (std::find(as.begin(), as.end(), id) == as.end())
        o.fail("identity missing");
    std::size_t order_two = 0, products = 0;
    for (const auto& a : as) {
        const LiftResult la = try_lift(to_map(w, w, s, a));
        if (!la.ok()) {
            o.fail("automorphism does not lift");
            continue;
        }
        const CochainMorphism square = compose(*la.morphism, *la.morphism);
        if (a != id && induced_on_indecomposables(square) == GradedLinearMap::identity(w))
            ++order_two;
        for (const auto& b : as) {
            Tuple ab(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                ab[i] = a[i] * b[i];
            ++products;
            if (std::find(as.begin(), as.end(), ab) == as.end())
                o.fail("product leaves the set");
            const LiftResult lb = try_lift(to_map(w, w, s, b));
            if (!lb.ok() ||
                !(induced_on_indecomposables(compose(*la.morphism, *lb.morphism)) == to_map(w, w, s, ab)))
                o.fail("composite of lifts does not induce the entrywise product");
        }
    }
    if (order_two != 3)
        o.fail(std::to_string(order_two) + " elements of order 2");
    o.note("closure over " + std::to_string(products) + " products, identity present, 3 elements of order 2");
    return o;
}

Outcome criterion9()
{
    Outcome o;
    std::ostringstream a, b, e1, e2;
    const int c1 = cli::run({"reproduce", "all", "--json"}, a, e1);
    const int c2 = cli::run({"reproduce", "all", "--json"}, b, e2);
    if (a.str() != b.str())
        o.fail("outputs differ");
    if (c1 != c2)
        o.fail("exit codes differ");
    o.note(std::to_string(a.str().size()) + " identical bytes, exit code " + std::to_string(c1));
    return o;
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"first example: 3 morphisms, 2 automorphisms, Z2", criterion1},
        {"second example: 5 morphisms, 4 automorphisms, Z2⊕Z2", criterion2},
        {"cohomology regression of the truncations", criterion3},
        {"solver and lifting agree on the rational grid", criterion4},
        {"Whitehead sequence exact for every builtin", criterion5},
        {"algebra properties to degree 121", criterion6},
        {"tower audit", criterion7},
        {"group axioms on the second example", criterion8},
        {"deterministic reproduce output", criterion9},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        }
        catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("criterion %zu: %s  %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
