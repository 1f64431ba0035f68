#include "hamfactor/report.hpp"

#include <set>

#include "hamfactor/errors.hpp"

namespace hamfactor {

namespace {

void require_fields(const Json& j, const std::set<std::string>& allowed,
                    const std::set<std::string>& required, const std::string& where) {
    if (!j.is_object())
        throw ParseError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ParseError(where + ": unknown field '" + key + "'");
    }
    for (const std::string& key : required)
        if (!j.contains(key))
            throw ParseError(where + ": missing field '" + key + "'");
    }

Rat rat_field(const Json& j, const std::string& key, const std::string& where) {
    if (!j.at(key).is_string())
        throw ParseError(where + ": field '" + key + "' must be a rational string");
    return rat_parse(j.at(key).get<std::string>());
}

std::vector<int> sizes_field(const Json& j, const std::string& key, const std::string& where) {
    const Json& arr = j.at(key);
    if (!arr.is_array() || arr.empty())
        throw ParseError(where + ": field '" + key + "' must be a non-empty array");
    std::vector<int> out;
    for (const Json& v : arr) {
        if (!v.is_number_integer())
            throw ParseError(where + ": sizes must be integers");
        out.push_back(v.get<int>());
    }
    return out;
}

} // namespace

Json matrix_json(const RatMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(rat_str(m(i, j)));
        rows.push_back(std::move(row));
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

RatMatrix matrix_from_json(const Json& j) {
    require_fields(j, {"rows", "cols", "entries"}, {"rows", "cols", "entries"}, "matrix");
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const Json& entries = j.at("entries");
    if (!entries.is_array() || int(entries.size()) != rows)
        throw ParseError("matrix: wrong number of rows");
    RatMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const Json& row = entries.at(i);
        if (!row.is_array() || int(row.size()) != cols)
            throw ParseError("matrix: wrong number of columns");
        for (int c = 0; c < cols; ++c)
            m(i, c) = rat_parse(row.at(c).get<std::string>());
    }
    return m;
}

Json linform_json(const LinForm& f) {
    Json terms = Json::object();
    for (const auto& [name, coeff] : f.terms())
        terms[name] = rat_str(coeff);
    return Json{{"constant", rat_str(f.constant())}, {"terms", terms}};
}

Json param_matrix_json(const ParamMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(linform_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"params", m.params()}, {"entries", rows}};
}

Json spec_json(const JordanSpec& spec) {
    Json blocks = Json::array();
    for (const BlockSpec& b : spec.blocks) {
        Json blk;
        blk["kind"] = block_kind_name(b.kind);
        switch (b.kind) {
        case BlockKind::Zero:
            blk["sizes"] = b.sizes;
            break;
        case BlockKind::RealPair:
            blk["lambda"] = rat_str(b.lambda);
            blk["sizes_plus"] = b.sizes_plus;
            blk["sizes_minus"] = b.sizes_minus;
            break;
        case BlockKind::RealSingle:
            blk["lambda"] = rat_str(b.lambda);
            blk["sizes"] = b.sizes;
            break;
        case BlockKind::Imaginary:
            blk["b"] = rat_str(b.b);
            blk["sizes"] = b.sizes;
            break;
        case BlockKind::ComplexQuad:
            blk["a"] = rat_str(b.a);
            blk["b"] = rat_str(b.b);
            blk["sizes_plus"] = b.sizes_plus;
            blk["sizes_minus"] = b.sizes_minus;
            break;
        case BlockKind::ComplexSingle:
            blk["a"] = rat_str(b.a);
            blk["b"] = rat_str(b.b);
            blk["sizes"] = b.sizes;
            break;
        }
        blocks.push_back(std::move(blk));
    }
    return Json{{"version", 1}, {"blocks", blocks}};
}

JordanSpec spec_from_json(const Json& j) {
    require_fields(j, {"version", "blocks"}, {"version", "blocks"}, "spec");
    if (!j.at("version").is_number_integer() || j.at("version").get<int>() != 1)
        throw ParseError("spec: unsupported version");
    const Json& blocks = j.at("blocks");
    if (!blocks.is_array())
        throw ParseError("spec: 'blocks' must be an array");
    JordanSpec spec;
    int n = 0;
    for (const Json& blk : blocks) {
        const std::string where = "spec block " + std::to_string(++n);
        if (!blk.is_object() || !blk.contains("kind") || !blk.at("kind").is_string())
            throw ParseError(where + ": missing kind");
        const std::string kind = blk.at("kind").get<std::string>();
        BlockSpec b;
        if (kind == "zero") {
            require_fields(blk, {"kind", "sizes"}, {"sizes"}, where);
            b.kind = BlockKind::Zero;
            b.sizes = sizes_field(blk, "sizes", where);
        } else if (kind == "real_pair") {
            require_fields(blk, {"kind", "lambda", "sizes_plus", "sizes_minus"},
                           {"lambda", "sizes_plus", "sizes_minus"}, where);
            b.kind = BlockKind::RealPair;
            b.lambda = rat_field(blk, "lambda", where);
            b.sizes_plus = sizes_field(blk, "sizes_plus", where);
            b.sizes_minus = sizes_field(blk, "sizes_minus", where);
        } else if (kind == "real_single") {
            require_fields(blk, {"kind", "lambda", "sizes"}, {"lambda", "sizes"}, where);
            b.kind = BlockKind::RealSingle;
            b.lambda = rat_field(blk, "lambda", where);
            b.sizes = sizes_field(blk, "sizes", where);
        } else if (kind == "imaginary") {
            require_fields(blk, {"kind", "b", "sizes"}, {"b", "sizes"}, where);
            b.kind = BlockKind::Imaginary;
            b.b = rat_field(blk, "b", where);
            b.sizes = sizes_field(blk, "sizes", where);
        } else if (kind == "complex_quad") {
            require_fields(blk, {"kind", "a", "b", "sizes_plus", "sizes_minus"},
                           {"a", "b", "sizes_plus", "sizes_minus"}, where);
            b.kind = BlockKind::ComplexQuad;
            b.a = rat_field(blk, "a", where);
            b.b = rat_field(blk, "b", where);
            b.sizes_plus = sizes_field(blk, "sizes_plus", where);
            b.sizes_minus = sizes_field(blk, "sizes_minus", where);
        } else if (kind == "complex_single") {
            require_fields(blk, {"kind", "a", "b", "sizes"}, {"a", "b", "sizes"}, where);
            b.kind = BlockKind::ComplexSingle;
            b.a = rat_field(blk, "a", where);
            b.b = rat_field(blk, "b", where);
            b.sizes = sizes_field(blk, "sizes", where);
        } else {
            throw ParseError(where + ": unknown kind '" + kind + "'");
        }
        spec.blocks.push_back(std::move(b));
    }
    return validate(spec);
}

JordanSpec spec_from_json_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return spec_from_json(j);
}

Json family_json(const DFamily& fam) {
    Json basis = Json::array();
    for (const auto& [name, mat] : fam.basis)
        basis.push_back(Json{{"param", name}, {"matrix", matrix_json(mat)}});
    return Json{{"dim", fam.dim}, {"general", param_matrix_json(fam.general)}, {"basis", basis}};
}

Json structure_json(const StructureClass& sc) {
    Json j;
    j["verdict"] = verdict_name(sc.verdict);
    if (sc.omega_sharp)
        j["omega_sharp"] = matrix_json(*sc.omega_sharp);
    if (sc.pi_sharp)
        j["pi_sharp"] = matrix_json(*sc.pi_sharp);
    if (sc.kernel_witness)
        j["kernel_witness"] = matrix_json(*sc.kernel_witness);
    return j;
}

Json conserved_json(const ConservedReport& rep) {
    Json casimirs = Json::array();
    for (const Casimir& c : rep.casimirs)
        casimirs.push_back(Json{{"covector", matrix_json(c.covector)},
                                {"kernel_witness", matrix_json(c.kernel_witness)}});
    Json fields = Json::array();
    for (const IsotropicField& f : rep.isotropic_fields)
        fields.push_back(
            Json{{"direction", matrix_json(f.direction)}, {"field", matrix_json(f.field)}});
    return Json{{"hamiltonian", matrix_json(rep.hamiltonian)},
                {"casimirs", casimirs},
                {"isotropic_fields", fields}};
}

Json transcript_json(const Transcript& tr) {
    Json checks = Json::array();
    for (const TranscriptCheck& c : tr.checks)
        checks.push_back(Json{{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return checks;
}

Json system_json(const IntegrableSystem& sys) {
    Json fields = Json::array();
    for (const VectorField& f : sys.fields)
        fields.push_back(
            Json{{"c", matrix_json(f.c)}, {"hamiltonian", matrix_json(f.hamiltonian)}});
    Json quads = Json::array();
    for (const QuadraticIntegral& qi : sys.quadratic_integrals)
        quads.push_back(Json{{"s", matrix_json(qi.s)}, {"casimir", qi.casimir}});
    Json lins = Json::array();
    for (const LinearIntegral& li : sys.linear_integrals)
        lins.push_back(Json{{"covector", matrix_json(li.covector)}});
    return Json{{"spec", spec_json(sys.spec)},
                {"b", matrix_json(sys.b)},
                {"d0", matrix_json(sys.d0)},
                {"p", sys.p},
                {"q", sys.q},
                {"fields", fields},
                {"quadratic_integrals", quads},
                {"linear_integrals", lins},
                {"structure", structure_json(sys.structure)},
                {"transcript", transcript_json(sys.transcript)}};
}

IntegrableSystem system_from_json(const Json& j) {
    require_fields(j,
                   {"spec", "b", "d0", "p", "q", "fields", "quadratic_integrals",
                    "linear_integrals", "structure", "transcript"},
                   {"spec", "b", "d0", "p", "q", "fields", "quadratic_integrals",
                    "linear_integrals"},
                   "system");
    IntegrableSystem sys;
    sys.spec = spec_from_json(j.at("spec"));
    sys.b = matrix_from_json(j.at("b"));
    sys.d0 = matrix_from_json(j.at("d0"));
    sys.p = j.at("p").get<int>();
    sys.q = j.at("q").get<int>();
    for (const Json& f : j.at("fields"))
        sys.fields.push_back(
            {matrix_from_json(f.at("c")), matrix_from_json(f.at("hamiltonian"))});
    for (const Json& qi : j.at("quadratic_integrals"))
        sys.quadratic_integrals.push_back(
            {matrix_from_json(qi.at("s")), qi.at("casimir").get<bool>()});
    for (const Json& li : j.at("linear_integrals"))
        sys.linear_integrals.push_back({matrix_from_json(li.at("covector"))});
    sys.structure = classify_subbundle(sys.b, sys.d0);
    return sys;
}

Json assignment_json(const Assignment& asg) {
    Json j = Json::object();
    for (const auto& [name, value] : asg)
        j[name] = rat_str(value);
    return j;
}

Assignment assignment_from_json(const Json& j) {
    Assignment asg;
    for (const auto& [name, value] : j.items())
        asg[name] = rat_parse(value.get<std::string>());
    return asg;
}

} // namespace hamfactor
