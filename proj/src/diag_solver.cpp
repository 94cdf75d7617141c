#include "mcca/diag_solver.hpp"

#include "complex_cache.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mcca {

namespace {

void require_diagonal(const SullivanModel& m)
{
    const GeneratorSet& gens = m.generators();
    for (std::size_t i = 1; i < gens.size(); ++i)
        if (gens[i].degree == gens[i - 1].degree)
            throw NotDiagonal("model '" + m.label() + "' has two generators in degree " +
                              std::to_string(gens[i].degree));
}

std::vector<int> exponents(const Monomial& mono, std::size_t n)
{
    std::vector<int> e(n, 0);
    for (const Factor& f : mono.factors())
        e[f.gen] = f.exp;
    return e;
}

// Whether the monomials of d v stay independent modulo coboundaries of the
// truncation below |v|; then each monomial gives an exact condition.
bool monomials_independent(const SullivanModel& m, std::size_t v)
{
    const int d = m.generators()[v].degree;
    const detail::PassView p = detail::pass(m, d, d - 1);
    const DegreeBasis& basis = detail::full_basis(m, d + 1);
    Echelon residuals;
    for (const auto& [mono, c] : m.differential(v).terms()) {
        SparseVector unit = unit_vector(static_cast<std::uint32_t>(*basis.index_of(mono)));
        SparseVector r = p.reduction->image.reduce(unit, p.row_limit);
        if (r.empty() || !residuals.insert(r))
            return false;
    }
    return true;
}

MonomialConstraintSystem skeleton(const SullivanModel& m)
{
    require_diagonal(m);
    MonomialConstraintSystem s;
    for (const auto& g : m.generators()) {
        s.degrees.push_back(g.degree);
        s.names.push_back(g.name);
    }
    for (const auto& v : m.vanished_terms())
        s.notes.push_back(v.message());
    return s;
}

void check_completeness(const SullivanModel& m, MonomialConstraintSystem& s)
{
    for (std::size_t v = 0; v < m.generators().size(); ++v) {
        if (m.differential(v).is_zero() || monomials_independent(m, v))
            continue;
        s.complete = false;
        s.notes.push_back("d(" + m.generators()[v].name +
                          "): monomials are dependent modulo coboundaries; equations are necessary conditions only");
    }
}

std::string origin(const SullivanModel& m, std::size_t v, const Monomial& mono)
{
    return "d(" + m.generators()[v].name + ") ∋ " + mono.to_string(m.generators());
}

// Prime factorization by trial division; coefficients of models are small.
std::map<Integer, int> factor(Integer n)
{
    std::map<Integer, int> out;
    n = abs(n);
    for (Integer p = 2; p * p <= n; ++p) {
        if (p > 1000000) {
            if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
                throw Error("coefficient " + n.get_str() + " is too large to factor");
            break;
        }
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    if (n > 1)
        ++out[n];
    return out;
}

Rational rational_power(const Rational& base, long e)
{
    Rational r(1);
    Rational b = e < 0 ? Rational(1) / base : base;
    for (long k = 0; k < std::labs(e); ++k)
        r *= b;
    return r;
}

Rational product(const std::vector<Rational>& p, const std::vector<int>& e)
{
    Rational r(1);
    for (std::size_t w = 0; w < e.size(); ++w)
        if (e[w] != 0)
            r *= rational_power(p[w], e[w]);
    return r;
}

bool side_zero(int lead, const Rational& coefficient, const std::vector<int>& e, const std::vector<int>& state)
{
    if (lead == 0 || coefficient == 0)
        return true;
    for (std::size_t w = 0; w < e.size(); ++w)
        if (e[w] > 0 && state[w] == 0)
            return true;
    return false;
}

struct Solver {
    const MonomialConstraintSystem& s;
    SolutionSet out;

    // state: -1 unknown, 0 zero, 1 nonzero
    void branch(std::vector<int> state)
    {
        const std::size_t n = s.size();
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& e : s.equations) {
                if (!e.target || state[*e.target] != -1)
                    continue;
                bool known = true;
                for (std::size_t w = 0; w < n; ++w)
                    if (e.rhs_exp[w] > 0 && state[w] == -1)
                        known = false;
                if (!known)
                    continue;
                state[*e.target] = side_zero(1, e.coefficient, e.rhs_exp, state) ? 0 : 1;
                changed = true;
            }
        }
        auto open = std::find(state.begin(), state.end(), -1);
        if (open != state.end()) {
            *open = 0;
            branch(state);
            *open = 1;
            branch(state);
            return;
        }
        const bool all_nonzero = std::all_of(state.begin(), state.end(), [](int x) { return x == 1; });
        for (const auto& e : s.equations) {
            const bool l = side_zero(e.lhs, Rational(1), e.lhs_exp, state);
            const bool r = side_zero(1, e.coefficient, e.rhs_exp, state);
            if (l != r) {
                ++out.infeasible;
                if (all_nonzero)
                    out.invertible_reason = "zero pattern violates " + s.to_string(e);
                return;
            }
        }
        solve_support(state, all_nonzero);
    }

    void solve_support(const std::vector<int>& state, bool all_nonzero)
    {
        const std::size_t n = s.size();
        std::vector<std::size_t> live;
        for (std::size_t w = 0; w < n; ++w)
            if (state[w] == 1)
                live.push_back(w);
        std::vector<const MonomialEquation*> active;
        for (const auto& e : s.equations)
            if (!side_zero(e.lhs, Rational(1), e.lhs_exp, state))
                active.push_back(&e);

        const std::size_t m = active.size(), k = live.size();
        BitMatrix signs(m, k);
        BitVector sign_rhs(m, 0);
        IntegerMatrix lattice(m, k);
        std::map<Integer, std::vector<Integer>> valuations;  // prime -> per equation
        for (std::size_t i = 0; i < m; ++i) {
            const MonomialEquation& e = *active[i];
            for (std::size_t c = 0; c < k; ++c) {
                const std::size_t w = live[c];
                signs.set(i, c, (e.lhs_exp[w] + e.rhs_exp[w]) % 2 != 0);
                lattice(i, c) = e.lhs_exp[w] - e.rhs_exp[w];
            }
            sign_rhs[i] = e.coefficient < 0 ? 1 : 0;
            const Rational c = abs(e.coefficient);
            for (const auto& [p, v] : factor(c.get_num()))
                valuations.try_emplace(p, std::vector<Integer>(m)).first->second[i] += v;
            for (const auto& [p, v] : factor(c.get_den()))
                valuations.try_emplace(p, std::vector<Integer>(m)).first->second[i] -= v;
        }

        auto fail = [&](const std::string& why) {
            ++out.infeasible;
            if (all_nonzero)
                out.invertible_reason = why;
        };

        auto sign = solve_f2(signs, sign_rhs);
        if (!sign)
            return fail("sign equations are inconsistent");

        const SmithForm snf = smith_normal_form(lattice);
        std::vector<Rational> magnitude(k, Rational(1));
        for (const auto& [prime, t] : valuations) {
            std::vector<Integer> ut(m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    ut[i] += snf.left(i, j) * t[j];
            std::vector<Integer> y(k);
            for (std::size_t i = 0; i < m; ++i) {
                if (i < snf.rank) {
                    if (ut[i] % snf.diagonal(i, i) != 0)
                        return fail("no rational magnitudes: the " + prime.get_str() +
                                    "-adic valuations of the coefficients are not reachable");
                    y[i] = ut[i] / snf.diagonal(i, i);
                }
                else if (ut[i] != 0) {
                    return fail("no rational magnitudes: the " + prime.get_str() +
                                "-adic valuations of the coefficients are inconsistent");
                }
            }
            for (std::size_t c = 0; c < k; ++c) {
                Integer x = 0;
                for (std::size_t i = 0; i < k; ++i)
                    x += snf.right(c, i) * y[i];
                magnitude[c] *= rational_power(Rational(prime), x.get_si());
            }
        }

        SupportCase sc;
        sc.zero.assign(n, false);
        for (std::size_t w = 0; w < n; ++w)
            sc.zero[w] = state[w] == 0;
        sc.sign_base.assign(n, 0);
        sc.magnitude_base.assign(n, Rational(0));
        for (std::size_t c = 0; c < k; ++c) {
            sc.sign_base[live[c]] = (*sign)[c];
            sc.magnitude_base[live[c]] = magnitude[c];
        }
        for (const auto& kv : nullspace_f2(signs)) {
            BitVector full(n, 0);
            for (std::size_t c = 0; c < k; ++c)
                full[live[c]] = kv[c];
            sc.sign_kernel.push_back(std::move(full));
        }
        for (std::size_t i = snf.rank; i < k; ++i) {
            std::vector<Integer> dir(n, 0);
            for (std::size_t c = 0; c < k; ++c)
                dir[live[c]] = snf.right(c, i);
            sc.free_kernel.push_back(std::move(dir));
        }
        if (sc.finite()) {
            if (sc.sign_kernel.size() > 20)
                throw Error("solution set too large to list (2^" + std::to_string(sc.sign_kernel.size()) + ")");
            for (std::size_t mask = 0; mask < (std::size_t{1} << sc.sign_kernel.size()); ++mask) {
                BitVector sigma = sc.sign_base;
                for (std::size_t b = 0; b < sc.sign_kernel.size(); ++b)
                    if (mask >> b & 1)
                        for (std::size_t w = 0; w < n; ++w)
                            sigma[w] ^= sc.sign_kernel[b][w];
                std::vector<Rational> p(n);
                for (std::size_t w = 0; w < n; ++w)
                    p[w] = sigma[w] ? -sc.magnitude_base[w] : sc.magnitude_base[w];
                sc.solutions.push_back(std::move(p));
            }
        }
        out.cases.push_back(std::move(sc));
    }
};

}  // namespace

std::vector<std::size_t> MonomialConstraintSystem::sources() const
{
    std::vector<bool> is_target(size(), false);
    for (const auto& e : equations)
        if (e.target)
            is_target[*e.target] = true;
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < size(); ++w)
        if (!is_target[w])
            out.push_back(w);
    return out;
}

std::string MonomialConstraintSystem::to_string(const MonomialEquation& e) const
{
    auto side = [&](const std::vector<int>& ex) {
        std::string t;
        for (std::size_t w = 0; w < ex.size(); ++w) {
            if (ex[w] == 0)
                continue;
            if (!t.empty())
                t += "*";
            t += "p" + std::to_string(degrees[w]);
            if (ex[w] > 1)
                t += "^" + std::to_string(ex[w]);
        }
        return t;
    };
    std::string lhs = e.lhs == 0 ? "0" : side(e.lhs_exp);
    if (lhs.empty())
        lhs = "1";
    std::string rhs = side(e.rhs_exp);
    if (e.coefficient == 0)
        rhs = "0";
    else if (rhs.empty())
        rhs = e.coefficient.get_str();
    else if (e.coefficient == -1)
        rhs = "-" + rhs;
    else if (e.coefficient != 1)
        rhs = e.coefficient.get_str() + "*" + rhs;
    return lhs + " = " + rhs;
}

MonomialConstraintSystem extract_constraints(const SullivanModel& m)
{
    MonomialConstraintSystem s = skeleton(m);
    const std::size_t n = s.size();
    for (std::size_t v = 0; v < n; ++v) {
        for (const auto& [mono, c] : m.differential(v).terms()) {
            MonomialEquation e;
            e.lhs_exp.assign(n, 0);
            e.lhs_exp[v] = 1;
            e.rhs_exp = exponents(mono, n);
            e.target = v;
            e.origin = origin(m, v, mono);
            s.equations.push_back(std::move(e));
        }
    }
    check_completeness(m, s);
    return s;
}

MonomialConstraintSystem cross_constraints(const SullivanModel& a, const SullivanModel& b)
{
    MonomialConstraintSystem s = skeleton(a);
    require_diagonal(b);
    std::vector<int> db;
    for (const auto& g : b.generators())
        db.push_back(g.degree);
    if (db != s.degrees)
        throw Error("models '" + a.label() + "' and '" + b.label() + "' have different generator degrees");
    for (const auto& v : b.vanished_terms())
        s.notes.push_back(v.message());
    // One generator per degree on both sides, so generator indices correspond.
    const std::size_t n = s.size();
    for (std::size_t v = 0; v < n; ++v) {
        const Polynomial& pa = a.differential(v);
        const Polynomial& pb = b.differential(v);
        std::map<Monomial, std::pair<Rational, Rational>> both;
        for (const auto& [mono, c] : pa.terms())
            both[mono].first = c;
        for (const auto& [mono, c] : pb.terms())
            both[mono].second = c;
        for (const auto& [mono, cs] : both) {
            MonomialEquation e;
            e.lhs_exp.assign(n, 0);
            e.rhs_exp = exponents(mono, n);
            e.origin = origin(a, v, mono);
            if (cs.second == 0) {
                e.lhs = 0;
                e.coefficient = cs.first;
            }
            else {
                e.lhs_exp[v] = 1;
                e.target = v;
                e.coefficient = cs.first / cs.second;
                if (cs.first == 0)
                    e.rhs_exp.assign(n, 0);
            }
            s.equations.push_back(std::move(e));
        }
    }
    check_completeness(b, s);
    return s;
}

bool SolutionSet::finite() const
{
    return std::all_of(cases.begin(), cases.end(), [](const SupportCase& c) { return c.finite(); });
}

std::vector<std::vector<Rational>> SolutionSet::all() const
{
    if (!finite())
        throw Error("solution set is infinite");
    std::vector<std::vector<Rational>> out;
    for (const auto& c : cases)
        out.insert(out.end(), c.solutions.begin(), c.solutions.end());
    return out;
}

const SupportCase* SolutionSet::invertible() const
{
    for (const auto& c : cases)
        if (std::none_of(c.zero.begin(), c.zero.end(), [](bool z) { return z; }))
            return &c;
    return nullptr;
}

SolutionSet solve(const MonomialConstraintSystem& s)
{
    for (const auto& e : s.equations)
        if (e.lhs_exp.size() != s.size() || e.rhs_exp.size() != s.size())
            throw Error("monomial equation has the wrong number of exponents");
    Solver solver{s, {}};
    solver.branch(std::vector<int>(s.size(), -1));
    if (!solver.out.invertible() && solver.out.invertible_reason.empty())
        solver.out.invertible_reason = "no solution without zero entries";
    return std::move(solver.out);
}

bool satisfies(const MonomialConstraintSystem& s, const std::vector<Rational>& p)
{
    if (p.size() != s.size())
        throw Error("satisfies: wrong number of values");
    for (const auto& e : s.equations) {
        const Rational lhs = e.lhs == 0 ? Rational(0) : product(p, e.lhs_exp);
        const Rational rhs = e.coefficient == 0 ? Rational(0) : e.coefficient * product(p, e.rhs_exp);
        if (lhs != rhs)
            return false;
    }
    return true;
}

std::string GroupStructure::name() const
{
    if (!finite)
        return "infinite (free rank " + std::to_string(free_rank) + ", sign rank " + std::to_string(sign_rank) + ")";
    if (order == 0)
        return "empty";
    switch (sign_rank) {
    case 0:
        return "trivial";
    case 1:
        return "Z2";
    case 2:
        return "Z2⊕Z2";
    default:
        return "(Z2)^" + std::to_string(sign_rank);
    }
}

GroupStructure group_structure(const SolutionSet& s)
{
    GroupStructure g;
    g.finite = s.finite();
    if (g.finite)
        for (const auto& c : s.cases)
            g.morphisms += c.count();
    const SupportCase* inv = s.invertible();
    if (!inv)
        return g;
    g.sign_rank = inv->sign_kernel.size();
    g.free_rank = inv->free_kernel.size();
    if (g.finite)
        g.order = inv->count();
    BitMatrix reached(inv->free_kernel.size(), inv->zero.size());
    for (std::size_t i = 0; i < inv->free_kernel.size(); ++i)
        for (std::size_t w = 0; w < inv->zero.size(); ++w)
            reached.set(i, w, inv->free_kernel[i][w] % 2 != 0);
    g.family_sign_rank = g.sign_rank - rank_f2(reached);
    return g;
}

GradedLinearMap to_map(ModelPtr source, ModelPtr target, const MonomialConstraintSystem& s,
                       const std::vector<Rational>& p)
{
    std::map<int, Rational> entries;
    for (std::size_t w = 0; w < s.size(); ++w)
        entries[s.degrees[w]] = p.at(w);
    return GradedLinearMap::diagonal(std::move(source), std::move(target), entries);
}

namespace {

std::string show_vector(const std::vector<Rational>& p)
{
    std::string t = "(";
    for (std::size_t i = 0; i < p.size(); ++i)
        t += (i ? "," : "") + p[i].get_str();
    return t + ")";
}

}  // namespace

LiftCheck verify_by_lifting(ModelPtr source, ModelPtr target, const MonomialConstraintSystem& s,
                            const SolutionSet& solutions)
{
    LiftCheck check;
    auto attempt = [&](const std::vector<Rational>& p) {
        ++check.checked;
        if (!satisfies(s, p)) {
            check.failures.push_back(show_vector(p) + " violates the equations");
            return;
        }
        const LiftResult r = try_lift(to_map(source, target, s, p));
        if (r.ok())
            ++check.lifted;
        else
            check.failures.push_back(show_vector(p) + " obstructed at degree " +
                                     std::to_string(r.obstruction->degree));
    };
    for (const auto& c : solutions.cases) {
        if (c.finite()) {
            for (const auto& p : c.solutions)
                attempt(p);
            continue;
        }
        std::vector<Rational> base(s.size());
        for (std::size_t w = 0; w < s.size(); ++w)
            base[w] = c.sign_base[w] ? -c.magnitude_base[w] : c.magnitude_base[w];
        attempt(base);
        for (const auto& dir : c.free_kernel) {
            std::vector<Rational> p = base;
            for (std::size_t w = 0; w < s.size(); ++w)
                p[w] *= rational_power(Rational(2), dir[w].get_si());
            attempt(p);
        }
        for (const auto& kv : c.sign_kernel) {
            std::vector<Rational> p = base;
            for (std::size_t w = 0; w < s.size(); ++w)
                if (kv[w])
                    p[w] = -p[w];
            attempt(p);
        }
    }
    return check;
}

IsoDecision coherent_iso_exists(ModelPtr a, ModelPtr b)
{
    IsoDecision d;
    MonomialConstraintSystem s;
    try {
        s = cross_constraints(*a, *b);
    }
    catch (const Error& e) {
        d.reason = e.what();
        return d;
    }
    const SolutionSet sol = solve(s);
    const SupportCase* inv = sol.invertible();
    if (!inv) {
        d.reason = sol.invertible_reason;
        return d;
    }
    std::vector<Rational> p(s.size());
    for (std::size_t w = 0; w < s.size(); ++w)
        p[w] = inv->sign_base[w] ? -inv->magnitude_base[w] : inv->magnitude_base[w];
    LiftResult lift = try_lift(to_map(a, b, s, p));
    if (!lift.ok()) {
        d.reason = "candidate " + show_vector(p) + " does not lift (degree " +
                   std::to_string(lift.obstruction->degree) + ")";
        return d;
    }
    d.exists = true;
    d.reason = s.complete ? "invertible solution lifts" : "invertible candidate lifts";
    d.witness = std::move(p);
    d.lift = std::move(lift.morphism);
    return d;
}

}  // namespace mcca
