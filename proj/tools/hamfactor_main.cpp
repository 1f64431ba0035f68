// hamfactor: construct and classify Hamiltonian structures for linear
// systems given in real Jordan form, and build verified integrable systems.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hamfactor/classifier.hpp"
#include "hamfactor/dsolver.hpp"
#include "hamfactor/errors.hpp"
#include "hamfactor/flow.hpp"
#include "hamfactor/integrability.hpp"
#include "hamfactor/report.hpp"

namespace hf = hamfactor;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitUsage = 4;
constexpr int kExitInternal = 5;

struct Options {
    std::string spec_path;
    std::string report_path;
    std::vector<std::string> assigns;
    bool oracle = false;
    std::string format = "text";
    std::uint64_t seed = 0;
    std::string out_path;
    double t_max = 10.0;
    int steps = 1000;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw hf::InputError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const Options& opt, const std::string& text) {
    if (opt.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opt.out_path);
    if (!out)
        throw hf::InputError("cannot write file: " + opt.out_path);
    out << text;
}

int max_dim_cap() {
    if (const char* env = std::getenv("HAMFACTOR_MAX_DIM"))
        return std::max(1, std::atoi(env));
    return 64;
}

hf::JordanSpec load_spec(const std::string& path) {
    const hf::JordanSpec spec = hf::spec_from_json_text(read_file(path));
    const int cap = max_dim_cap();
    if (spec.dim() > cap)
        throw hf::ValidationError("spec dimension " + std::to_string(spec.dim()) +
                                  " exceeds HAMFACTOR_MAX_DIM = " + std::to_string(cap));
    return spec;
}

std::string strip_underscores(const std::string& s) {
    std::string out;
    for (char c : s)
        if (c != '_')
            out += c;
    return out;
}

// --assign names resolve exactly first, then by a compact form: the group
// prefix and underscores are ignored, so d14 matches g1.d_1_4 when that is
// unambiguous.
std::string resolve_param(const std::vector<std::string>& params, const std::string& key) {
    for (const std::string& p : params)
        if (p == key)
            return p;
    std::vector<std::string> hits;
    const std::string want = strip_underscores(key);
    for (const std::string& p : params) {
        std::string tail = p;
        if (const auto dot = tail.find('.'); dot != std::string::npos)
            tail = tail.substr(dot + 1);
        if (strip_underscores(tail) == want || strip_underscores(p) == want)
            hits.push_back(p);
    }
    if (hits.size() == 1)
        return hits.front();
    if (hits.empty())
        throw hf::InputError("unknown parameter: " + key);
    throw hf::InputError("ambiguous parameter '" + key + "' (matches " + std::to_string(hits.size()) +
                         " names)");
}

hf::Assignment parse_assigns(const hf::DFamily& family, const std::vector<std::string>& assigns,
                             bool fill_zero) {
    const auto params = family.general.params();
    hf::Assignment asg;
    for (const std::string& item : assigns) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw hf::InputError("--assign expects name=value, got '" + item + "'");
        const std::string name = resolve_param(params, item.substr(0, eq));
        asg[name] = hf::rat_parse(item.substr(eq + 1));
    }
    if (fill_zero)
        for (const std::string& p : params)
            if (!asg.count(p))
                asg[p] = 0;
    return asg;
}

std::string dump_json(const hf::Json& j) {
    return j.dump(2) + "\n";
}

// --- subcommand bodies ------------------------------------------------------

int cmd_solve_d(const Options& opt) {
    const auto spec = load_spec(opt.spec_path);
    const auto family = hf::solve_family(spec);
    hf::Json j{{"version", 1}, {"tool", "hamfactor"}, {"command", "solve-d"},
               {"spec", hf::spec_json(spec)}, {"family", hf::family_json(family)}};
    bool oracle_match = true;
    if (opt.oracle) {
        const auto oracle = hf::oracle_family(hf::realize(spec));
        std::vector<hf::RatMatrix> oracle_basis;
        for (const auto& [name, mat] : oracle.basis)
            oracle_basis.push_back(mat);
        bool members = true;
        for (const auto& [name, mat] : family.basis)
            members = members && hf::in_span(oracle_basis, mat);
        oracle_match = members && oracle.dim == family.dim;
        j["oracle"] = hf::Json{{"dim", oracle.dim},
                               {"dim_match", oracle.dim == family.dim},
                               {"basis_in_span", members},
                               {"match", oracle_match}};
    }
    if (opt.format == "json") {
        write_output(opt, dump_json(j));
    } else {
        std::ostringstream os;
        os << "family dimension: " << family.dim << "\n";
        os << "parameters:";
        for (const auto& [name, mat] : family.basis)
            os << " " << name;
        os << "\n\ngeneral D =\n" << family.general.str();
        if (opt.oracle)
            os << "\noracle: " << (oracle_match ? "agrees" : "MISMATCH") << " (dim "
               << j["oracle"]["dim"].get<int>() << ")\n";
        write_output(opt, os.str());
    }
    if (opt.oracle && !oracle_match)
        throw hf::InternalError("oracle disagrees with closed form");
    return kExitOk;
}

int cmd_classify(const Options& opt, bool casimirs_only) {
    const auto spec = load_spec(opt.spec_path);
    const auto family = hf::solve_family(spec);
    const auto asg = parse_assigns(family, opt.assigns, true);
    const hf::RatMatrix b = hf::realize(spec);
    const hf::RatMatrix d = hf::substitute(family.general, asg);
    const auto sc = hf::classify(b, d);
    const auto rep = hf::conserved_report(b, d);
    if (opt.format == "json") {
        hf::Json j{{"version", 1},
                   {"tool", "hamfactor"},
                   {"command", casimirs_only ? "casimirs" : "classify"},
                   {"spec", hf::spec_json(spec)},
                   {"assignment", hf::assignment_json(asg)},
                   {"structure", hf::structure_json(sc)},
                   {"conserved", hf::conserved_json(rep)}};
        write_output(opt, dump_json(j));
    } else {
        std::ostringstream os;
        if (!casimirs_only) {
            os << "verdict: " << hf::verdict_name(sc.verdict) << "\n";
            if (sc.omega_sharp)
                os << "omega_sharp = D*B^-1 =\n" << sc.omega_sharp->str();
            if (sc.pi_sharp)
                os << "pi_sharp = B*D^-1 =\n" << sc.pi_sharp->str();
            if (sc.kernel_witness)
                os << "kernel witness (ker B intersect ker D) =\n" << sc.kernel_witness->str();
            os << "hamiltonian: H(u) = 1/2 u^t D u with D =\n" << rep.hamiltonian.str();
        }
        os << "casimirs: " << rep.casimirs.size() << "\n";
        for (const auto& c : rep.casimirs)
            os << "  covector " << hf::transpose(c.covector).str();
        os << "isotropic fields: " << rep.isotropic_fields.size() << "\n";
        for (const auto& f : rep.isotropic_fields)
            os << "  field " << hf::transpose(f.field).str();
        write_output(opt, os.str());
    }
    return kExitOk;
}

int cmd_commutant(const Options& opt) {
    const auto spec = load_spec(opt.spec_path);
    const auto fam = hf::commutant(spec);
    bool oracle_match = true;
    hf::Json j{{"version", 1}, {"tool", "hamfactor"}, {"command", "commutant"},
               {"spec", hf::spec_json(spec)}, {"dim", fam.dim},
               {"general", hf::param_matrix_json(fam.general)}};
    if (opt.oracle) {
        const auto oracle = hf::commutant_oracle(hf::realize(spec));
        std::vector<hf::RatMatrix> ob;
        for (const auto& [name, mat] : oracle.basis)
            ob.push_back(mat);
        bool members = true;
        for (const auto& [name, mat] : fam.basis)
            members = members && hf::in_span(ob, mat);
        oracle_match = members && oracle.dim == fam.dim;
        j["oracle"] = hf::Json{{"dim", oracle.dim}, {"match", oracle_match}};
    }
    if (opt.format == "json") {
        write_output(opt, dump_json(j));
    } else {
        std::ostringstream os;
        os << "commutant dimension: " << fam.dim << "\n";
        if (opt.oracle)
            os << "oracle: " << (oracle_match ? "agrees" : "MISMATCH") << "\n";
        write_output(opt, os.str());
    }
    if (opt.oracle && !oracle_match)
        throw hf::InternalError("commutant oracle disagrees with closed form");
    return kExitOk;
}

std::string system_text(const hf::IntegrableSystem& sys) {
    std::ostringstream os;
    os << "integrable system of type (p, q) = (" << sys.p << ", " << sys.q << ")\n";
    os << "structure: " << hf::verdict_name(sys.structure.verdict) << "\n";
    os << "fields: " << sys.fields.size() << ", quadratic integrals: "
       << sys.quadratic_integrals.size() << ", linear integrals: " << sys.linear_integrals.size()
       << "\n";
    os << "transcript:\n";
    for (const auto& c : sys.transcript.checks)
        os << "  " << (c.pass ? "[pass] " : "[FAIL] ") << c.name
           << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    return os.str();
}

int cmd_integrable(const Options& opt) {
    const auto spec = load_spec(opt.spec_path);
    const auto sys = hf::build_integrable(spec, opt.seed);
    if (opt.format == "json") {
        hf::Json j{{"version", 1}, {"tool", "hamfactor"}, {"command", "integrable"},
                   {"seed", opt.seed}, {"system", hf::system_json(sys)}};
        write_output(opt, dump_json(j));
    } else {
        write_output(opt, system_text(sys));
    }
    return kExitOk;
}

int cmd_verify(const Options& opt) {
    hf::Json doc;
    try {
        doc = hf::Json::parse(read_file(opt.report_path));
    } catch (const hf::Json::parse_error& e) {
        throw hf::ParseError(std::string("invalid JSON: ") + e.what());
    }
    const hf::Json* sys_json = nullptr;
    if (doc.contains("system"))
        sys_json = &doc.at("system");
    else if (doc.contains("integrable"))
        sys_json = &doc.at("integrable");
    else
        throw hf::ParseError("report has no integrable system section");
    hf::IntegrableSystem sys = hf::system_from_json(*sys_json);
    sys.transcript = hf::verify_system(sys, opt.seed);
    if (opt.format == "json") {
        hf::Json j{{"version", 1}, {"tool", "hamfactor"}, {"command", "verify"},
                   {"seed", opt.seed}, {"all_passed", sys.transcript.all_passed()},
                   {"transcript", hf::transcript_json(sys.transcript)}};
        write_output(opt, dump_json(j));
    } else {
        write_output(opt, system_text(sys));
    }
    if (!sys.transcript.all_passed())
        throw hf::InternalError("verification failed: " + sys.transcript.failed_names());
    return kExitOk;
}

int cmd_demo_flow(const Options& opt) {
    const auto spec = load_spec(opt.spec_path);
    const auto family = hf::solve_family(spec);
    const auto asg = parse_assigns(family, opt.assigns, true);
    const hf::RatMatrix b = hf::realize(spec);
    const hf::RatMatrix d = hf::substitute(family.general, asg);
    const auto rep = hf::conserved_report(b, d);
    std::vector<hf::RatMatrix> covectors;
    for (const auto& c : rep.casimirs)
        covectors.push_back(c.covector);

    hf::RatRng rng(opt.seed);
    std::vector<hf::Rat> u0;
    for (int i = 0; i < b.rows(); ++i)
        u0.push_back(rng.nonzero_rational());

    const auto samples = hf::rk4_flow(b, d, covectors, u0, opt.t_max, opt.steps);
    std::ostringstream os;
    os << "# fixed-step RK4 in double precision; H and the Casimirs are exact\n"
       << "# invariants of the flow, so any drift below is integrator roundoff\n";
    os << "t,H";
    for (std::size_t i = 0; i < covectors.size(); ++i)
        os << ",casimir" << i + 1;
    os << "\n";
    char buf[64];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g", s.t);
        os << buf;
        std::snprintf(buf, sizeof buf, "%.17g", s.hamiltonian);
        os << "," << buf;
        for (double c : s.casimirs) {
            std::snprintf(buf, sizeof buf, "%.17g", c);
            os << "," << buf;
        }
        os << "\n";
    }
    write_output(opt, os.str());
    return kExitOk;
}

int cmd_report(const Options& opt) {
    const auto spec = load_spec(opt.spec_path);
    const auto family = hf::solve_family(spec);
    const auto asg = parse_assigns(family, opt.assigns, true);
    const hf::RatMatrix b = hf::realize(spec);
    const hf::RatMatrix d = hf::substitute(family.general, asg);
    const auto sc = hf::classify(b, d);
    const auto rep = hf::conserved_report(b, d);
    const auto sys = hf::build_integrable(spec, opt.seed);

    hf::Json j{{"version", 1},
               {"tool", "hamfactor"},
               {"command", "report"},
               {"seed", opt.seed},
               {"spec", hf::spec_json(spec)},
               {"b", hf::matrix_json(b)},
               {"family", hf::family_json(family)},
               {"assignment", hf::assignment_json(asg)},
               {"structure", hf::structure_json(sc)},
               {"conserved", hf::conserved_json(rep)},
               {"integrable", hf::system_json(sys)}};
    if (opt.oracle) {
        const auto oracle = hf::oracle_family(b);
        std::vector<hf::RatMatrix> ob;
        for (const auto& [name, mat] : oracle.basis)
            ob.push_back(mat);
        bool members = true;
        for (const auto& [name, mat] : family.basis)
            members = members && hf::in_span(ob, mat);
        j["oracle"] = hf::Json{{"dim", oracle.dim},
                               {"dim_match", oracle.dim == family.dim},
                               {"basis_in_span", members},
                               {"match", members && oracle.dim == family.dim}};
    }
    if (opt.format == "json") {
        write_output(opt, dump_json(j));
    } else {
        std::ostringstream os;
        os << "spec dimension: " << spec.dim() << "\n";
        os << "family dimension: " << family.dim << "\n";
        os << "verdict at assignment: " << hf::verdict_name(sc.verdict) << "\n";
        os << "casimirs: " << rep.casimirs.size()
           << ", isotropic fields: " << rep.isotropic_fields.size() << "\n";
        if (opt.oracle)
            os << "oracle: "
               << (j["oracle"]["match"].get<bool>() ? "agrees" : "MISMATCH") << "\n";
        os << "\n" << system_text(sys);
        write_output(opt, os.str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian structures and integrable systems for linear systems "
                 "u' = B u with B in real Jordan form"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd, bool with_spec = true) {
        if (with_spec)
            cmd->add_option("spec", opt.spec_path, "Jordan spec JSON file")->required();
        cmd->add_option("--format", opt.format, "Output format: text|json")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--seed", opt.seed, "Seed for all random points (default 0)");
        cmd->add_option("--out", opt.out_path, "Write output to a file instead of stdout");
    };

    auto* solve_d = app.add_subcommand("solve-d", "Parametric family of symmetric D with D*B skew");
    add_common(solve_d);
    solve_d->add_flag("--oracle", opt.oracle, "Cross-check against the vectorization oracle");

    auto* classify = app.add_subcommand("classify", "Classify the structure of an assigned D");
    add_common(classify);
    classify->add_option("--assign", opt.assigns, "name=value (repeatable; rest default to 0)");

    auto* casimirs = app.add_subcommand("casimirs", "Casimirs and isotropic fields of an assigned D");
    add_common(casimirs);
    casimirs->add_option("--assign", opt.assigns, "name=value (repeatable; rest default to 0)");

    auto* commutant = app.add_subcommand("commutant", "All matrices commuting with B");
    add_common(commutant);
    commutant->add_flag("--oracle", opt.oracle, "Cross-check against the Sylvester oracle");

    auto* integrable = app.add_subcommand("integrable", "Build and verify an integrable system");
    add_common(integrable);

    auto* verify = app.add_subcommand("verify", "Re-run the transcript of a saved report");
    verify->add_option("report", opt.report_path, "Report JSON file")->required();
    add_common(verify, false);

    auto* demo = app.add_subcommand("demo-flow", "RK4 conservation demo as CSV");
    add_common(demo);
    demo->add_option("--assign", opt.assigns, "name=value (repeatable; rest default to 0)");
    demo->add_option("--t-max", opt.t_max, "Integration horizon (default 10)");
    demo->add_option("--steps", opt.steps, "Step count (default 1000)");

    auto* report = app.add_subcommand("report", "Full pipeline report");
    add_common(report);
    report->add_option("--assign", opt.assigns, "name=value (repeatable; rest default to 0)");
    report->add_flag("--oracle", opt.oracle, "Include the oracle comparison");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (solve_d->parsed())
            return cmd_solve_d(opt);
        if (classify->parsed())
            return cmd_classify(opt, false);
        if (casimirs->parsed())
            return cmd_classify(opt, true);
        if (commutant->parsed())
            return cmd_commutant(opt);
        if (integrable->parsed())
            return cmd_integrable(opt);
        if (verify->parsed())
            return cmd_verify(opt);
        if (demo->parsed())
            return cmd_demo_flow(opt);
        if (report->parsed())
            return cmd_report(opt);
    } catch (const hf::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const hf::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const hf::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hf::ContractError& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return kExitValidation;
    } catch (const hf::InternalError& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return kExitInternal;
    } catch (const hf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
