#include "mcca/cli.hpp"
#include "mcca/coherence.hpp"
#include "mcca/diag_solver.hpp"
#include "mcca/dsl.hpp"
#include "mcca/whitehead.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace mcca;

namespace {

std::vector<std::string> strings(const std::vector<Rational>& v)
{
    std::vector<std::string> out;
    for (const auto& q : v)
        out.push_back(to_string(q));
    return out;
}

py::dict solve_model(const std::shared_ptr<SullivanModel>& m)
{
    const MonomialConstraintSystem s = extract_constraints(*m);
    const SolutionSet sol = solve(s);
    const GroupStructure g = group_structure(sol);
    py::dict out;
    std::vector<std::string> vars, eqs;
    for (int d : s.degrees)
        vars.push_back("p" + std::to_string(d));
    for (const auto& e : s.equations)
        eqs.push_back(s.to_string(e));
    out["variables"] = vars;
    out["equations"] = eqs;
    out["complete"] = s.complete;
    out["finite"] = g.finite;
    out["group"] = g.name();
    out["sign_rank"] = g.sign_rank;
    out["free_rank"] = g.free_rank;
    if (g.finite) {
        std::vector<std::vector<std::string>> morphisms, automorphisms;
        for (const auto& p : sol.all())
            morphisms.push_back(strings(p));
        if (const SupportCase* c = sol.invertible())
            for (const auto& p : c->solutions)
                automorphisms.push_back(strings(p));
        out["morphisms"] = morphisms;
        out["automorphisms"] = automorphisms;
    }
    return out;
}

py::dict coherent(const std::shared_ptr<SullivanModel>& m, const std::map<int, std::string>& values)
{
    std::map<int, Rational> diag;
    for (const auto& [d, v] : values)
        diag[d] = parse_rational(v);
    const CoherenceVerdict v = is_coherent(GradedLinearMap::diagonal(m, diag));
    py::dict out;
    out["coherent"] = v.coherent;
    out["label"] = v.label;
    if (v.lift.morphism) {
        py::dict images;
        const GeneratorSet& gens = m->generators();
        for (std::size_t g = 0; g < gens.size(); ++g)
            images[py::str(gens[g].name)] = v.lift.morphism->image(g).to_string(gens);
        out["images"] = images;
    }
    if (v.lift.obstruction) {
        const Obstruction& o = *v.lift.obstruction;
        out["degree"] = o.degree;
        out["generator"] = o.generator_name;
        out["difference"] = o.difference.to_string(m->generators());
        out["class"] = strings(o.class_coordinates);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod)
{
    mod.doc() = "Exact arithmetic for minimal Sullivan algebras over Q";

    auto& error = py::register_exception<Error>(mod, "Error");
    py::register_exception<ParseError>(mod, "ParseError", error.ptr());
    py::register_exception<NotDiagonal>(mod, "NotDiagonal", error.ptr());

    py::class_<SullivanModel, std::shared_ptr<SullivanModel>>(mod, "Model")
        .def_property_readonly("label", &SullivanModel::label)
        .def_property_readonly("generators",
                               [](const SullivanModel& m) {
                                   std::vector<std::pair<std::string, int>> out;
                                   for (const auto& g : m.generators())
                                       out.emplace_back(g.name, g.degree);
                                   return out;
                               })
        .def("differential",
             [](const SullivanModel& m, const std::string& name) {
                 return m.differential(m.generators().index(name)).to_string(m.generators());
             })
        .def("serialize", [](const SullivanModel& m) { return serialize(m); })
        .def("__repr__", [](const SullivanModel& m) { return "<mcca.Model " + m.label() + ">"; });

    mod.def("builtin_labels", &builtin_labels);
    mod.def("load", [](const std::string& s) { return std::const_pointer_cast<SullivanModel>(load_model(s)); },
            py::arg("label_or_path"));
    mod.def("parse", [](const std::string& text) { return std::make_shared<SullivanModel>(parse_model(text)); },
            py::arg("text"));

    mod.def(
        "validate",
        [](const std::shared_ptr<SullivanModel>& m) {
            const ValidationReport r = validate(*m);
            py::dict out;
            out["ok"] = r.ok();
            out["warnings"] = r.warnings;
            return out;
        },
        py::arg("model"));
    mod.def(
        "cohomology",
        [](const std::shared_ptr<SullivanModel>& m, int k, std::optional<int> cutoff) {
            const CohomologyBasis b = cohomology(*m, k, cutoff.value_or(kNoCutoff));
            std::vector<std::string> reps;
            for (const auto& p : b.representatives)
                reps.push_back(p.to_string(m->generators()));
            return reps;
        },
        py::arg("model"), py::arg("degree"), py::arg("cutoff") = py::none(),
        "Representatives of a basis of H^k, optionally of the truncation at cutoff.");
    mod.def(
        "class_of",
        [](const std::shared_ptr<SullivanModel>& m, int k, const std::string& expr, std::optional<int> cutoff) {
            return strings(class_of(*m, k, parse_polynomial(expr, m->generators()), cutoff.value_or(kNoCutoff))
                               .coordinates);
        },
        py::arg("model"), py::arg("degree"), py::arg("cocycle"), py::arg("cutoff") = py::none());
    mod.def(
        "wes_exact",
        [](const std::shared_ptr<SullivanModel>& m, int last) { return check_exactness(build_wes(m, last)).exact(); },
        py::arg("model"), py::arg("last") = 0);
    mod.def("solve", &solve_model, py::arg("model"));
    mod.def("coherent", &coherent, py::arg("model"), py::arg("diagonal"),
            "Tries to lift the diagonal map given as {degree: rational string}.");
    mod.def(
        "iso_exists", [](const std::shared_ptr<SullivanModel>& a, const std::shared_ptr<SullivanModel>& b) { return coherent_iso_exists(a, b).exists; },
        py::arg("a"), py::arg("b"));
    mod.def("release_cache", [](const std::shared_ptr<SullivanModel>& m) { release_cache(*m); });
    mod.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line tool in-process; returns (code, stdout, stderr).");
}
