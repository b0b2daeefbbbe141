#include "fingeo/json_io.hpp"

namespace fingeo {

namespace {

std::vector<int> int_list(const json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + " must be a list of integers");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ConfigError(std::string(what) + " must contain integers only");
        out.push_back(v.get<int>());
    }
    return out;
}

// q = p^e with p prime
std::pair<int, int> factor_prime_power(std::uint64_t q) {
    if (q < 2) throw ConfigError("q must be at least 2");
    for (std::uint64_t p = 2; p * p <= q; ++p) {
        if (q % p != 0) continue;
        int e = 0;
        std::uint64_t rest = q;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (rest != 1) throw ConfigError("q = " + std::to_string(q) + " is not a prime power");
        return {static_cast<int>(p), e};
    }
    return {static_cast<int>(q), 1}; // q itself prime
}

} // namespace

json field_to_json(const FieldTower& tw) {
    json j;
    j["p"] = tw.p();
    j["e"] = tw.e();
    j["t"] = tw.t();
    j["q"] = tw.q();
    j["modulus"] = tw.top_modulus();
    j["sub_modulus"] = tw.sub_modulus();
    return j;
}

TowerPtr tower_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("field description must be an object");
    int p = 0, e = 0;
    if (j.contains("p")) {
        p = j.at("p").get<int>();
        e = j.value("e", 1);
        if (j.contains("q")) {
            auto [qp, qe] = factor_prime_power(j.at("q").get<std::uint64_t>());
            if (qp != p || qe != e) throw ConfigError("q is inconsistent with (p, e)");
        }
    } else if (j.contains("q")) {
        std::tie(p, e) = factor_prime_power(j.at("q").get<std::uint64_t>());
    } else {
        throw ConfigError("field description needs either q or (p, e)");
    }
    if (!j.contains("t")) throw ConfigError("field description needs the extension degree t");
    int t = j.at("t").get<int>();
    FieldTower::Options opts;
    if (j.contains("modulus") && !(j.at("modulus").is_string() && j.at("modulus") == "auto"))
        opts.top_modulus = int_list(j.at("modulus"), "modulus");
    if (j.contains("sub_modulus") && !(j.at("sub_modulus").is_string() && j.at("sub_modulus") == "auto"))
        opts.sub_modulus = int_list(j.at("sub_modulus"), "sub_modulus");
    return FieldTower::make(p, e, t, opts);
}

json element_to_json(const FieldTower& tw, code_t code) { return json(tw.coeffs_of(code)); }

code_t element_from_json(const FieldTower& tw, const json& j) {
    if (j.is_number_integer()) {
        auto v = j.get<std::uint64_t>();
        if (v >= tw.size()) throw ConfigError("element code out of range");
        return static_cast<code_t>(v);
    }
    return tw.from_coeffs(int_list(j, "element")).code();
}

json matrix_to_json(const Matrix& m) {
    json j;
    j["field"] = field_to_json(*m.tower());
    j["level"] = m.level() == Level::Sub ? "q" : "q^t";
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(element_to_json(*m.tower(), m.at(i, c)));
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    j["cols"] = m.cols();
    return j;
}

Matrix matrix_from_json(const json& j) {
    TowerPtr tower = tower_from_json(j.at("field"));
    Level level = Level::Top;
    if (j.contains("level")) level = j.at("level") == "q" ? Level::Sub : Level::Top;
    const auto& rows = j.at("rows");
    size_t ncols = j.contains("cols") ? j.at("cols").get<size_t>() : (rows.empty() ? 0 : rows.at(0).size());
    Matrix m(tower, level, rows.size(), ncols);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows.at(i).size() != ncols) throw ConfigError("ragged matrix rows");
        for (size_t c = 0; c < ncols; ++c) {
            code_t code = element_from_json(*tower, rows.at(i).at(c));
            if (level == Level::Sub && !tower->in_level(code, Level::Sub))
                throw ConfigError("matrix entry outside the declared level");
            m.set(i, c, code);
        }
    }
    return m;
}

json subspace_to_json(const SubspaceBasis& s) {
    json j = matrix_to_json(s.matrix());
    j["dim"] = s.dim();
    j["pivots"] = s.pivots();
    return j;
}

json plucker_to_json(const PluckerVector& v) {
    json j;
    j["n"] = v.table()->n();
    j["k"] = v.table()->k();
    j["field"] = field_to_json(*v.coords().tower());
    json coords = json::array();
    for (size_t i = 0; i < v.coords().size(); ++i) coords.push_back(element_to_json(*v.coords().tower(), v.coord(i)));
    j["coordinates"] = std::move(coords);
    return j;
}

PluckerVector plucker_from_json(const json& j) {
    auto table = IndexTable::get(j.at("n").get<int>(), j.at("k").get<int>());
    TowerPtr tower = tower_from_json(j.at("field"));
    const auto& cj = j.at("coordinates");
    if (cj.size() != table->size()) throw ConfigError("Pluecker coordinate count does not match binom(n,k)");
    std::vector<code_t> codes;
    codes.reserve(cj.size());
    for (const auto& c : cj) codes.push_back(element_from_json(*tower, c));
    return {table, Vector(tower, Level::Top, std::move(codes), false)};
}

json spread_to_json(const BlockDecomposition& bd, const std::vector<SpreadElement>& spread) {
    json j;
    j["field"] = field_to_json(*bd.tower());
    j["r"] = bd.r();
    j["t"] = bd.t();
    j["size"] = spread.size();
    json elems = json::array();
    for (const auto& e : spread) {
        json el;
        json pt = json::array();
        for (size_t i = 0; i < e.point.size(); ++i) pt.push_back(element_to_json(*bd.tower(), e.point.code(i)));
        el["point"] = std::move(pt);
        json rows = json::array();
        for (size_t i = 0; i < e.reduced.dim(); ++i) {
            json row = json::array();
            for (size_t c = 0; c < e.reduced.ambient(); ++c)
                row.push_back(element_to_json(*bd.tower(), e.reduced.matrix().at(i, c)));
            rows.push_back(std::move(row));
        }
        el["reduced"] = std::move(rows);
        elems.push_back(std::move(el));
    }
    j["elements"] = std::move(elems);
    return j;
}

LinearSetSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("linear set spec must be a JSON object");
    json field = j.value("field", json::object());
    if (j.contains("q") && !field.contains("q") && !field.contains("p")) field["q"] = j.at("q");
    if (j.contains("t") && !field.contains("t")) field["t"] = j.at("t");
    TowerPtr tower = tower_from_json(field);
    if (!j.contains("r")) throw ConfigError("linear set spec needs r");
    int r = j.at("r").get<int>();
    std::vector<VariableSpec> vars;
    for (const auto& vj : j.at("vars")) {
        VariableSpec v;
        v.name = vj.at("name").get<std::string>();
        v.degree = vj.value("degree", 1);
        if (vj.contains("constraints"))
            for (const auto& c : vj.at("constraints")) {
                if (c == "trace_zero")
                    v.trace_zero = true;
                else
                    throw ConfigError("unknown variable constraint: " + c.get<std::string>());
            }
        vars.push_back(std::move(v));
    }
    std::vector<std::string> coords;
    for (const auto& c : j.at("coords")) coords.push_back(c.get<std::string>());
    return {tower, r, std::move(vars), std::move(coords)};
}

json spec_to_json(const LinearSetSpec& spec) {
    json j;
    j["q"] = spec.tower()->q();
    j["r"] = spec.r();
    j["t"] = spec.t();
    json vars = json::array();
    for (const auto& v : spec.vars()) {
        json vj;
        vj["name"] = v.name;
        vj["degree"] = v.degree;
        if (v.trace_zero) vj["constraints"] = json::array({"trace_zero"});
        vars.push_back(std::move(vj));
    }
    j["vars"] = std::move(vars);
    j["coords"] = spec.coord_strings();
    j["field"] = field_to_json(*spec.tower());
    return j;
}

json linset_report_to_json(const LinearSetReport& rep) {
    json j;
    j["rank"] = rep.rank;
    j["point_count"] = rep.point_count;
    json spec = json::object();
    for (const auto& [w, count] : rep.weight_spectrum) spec[std::to_string(w)] = count;
    j["weight_spectrum"] = std::move(spec);
    j["vector_count_identity"] = rep.vector_count_identity;
    j["proper"] = rep.proper;
    j["minimal"] = rep.minimal;
    j["h"] = rep.h;
    j["c"] = rep.c;
    j["h_per_block"] = rep.h_per_block;
    if (rep.proper) {
        j["t2_identity"] = rep.t2_identity;
        j["h_bound"] = rep.h_bound;
    }
    return j;
}

json codim_report_to_json(const CodimReport& rep) {
    json j;
    j["q"] = rep.q;
    j["r"] = rep.r;
    j["t"] = rep.t;
    j["rank"] = rep.rank;
    j["m"] = rep.rank - 1;
    j["h"] = rep.h;
    j["c"] = rep.c;
    j["proper"] = rep.proper;
    j["dual_dim"] = rep.dual_dim;
    j["bound"] = rep.bound;
    j["injective"] = rep.injective;
    j["dim_S"] = rep.dim_S;
    json pw = json::object();
    for (const auto& [key, v] : rep.pairwise_dims)
        pw[std::to_string(key.first) + "," + std::to_string(key.second)] = v;
    j["pairwise_dims"] = std::move(pw);
    if (rep.t3_closed_form) j["t3_closed_form"] = *rep.t3_closed_form;
    if (rep.minor_rank) j["minor_rank"] = *rep.minor_rank;
    if (rep.point_deficit) j["point_deficit"] = *rep.point_deficit;
    j["complement_trial_dims"] = rep.complement_trial_dims;
    if (rep.linset) j["linear_set"] = linset_report_to_json(*rep.linset);
    json inv = json::array();
    for (const auto& c : rep.invariants) {
        json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        inv.push_back(std::move(cj));
    }
    j["invariants"] = std::move(inv);
    if (!rep.timings.empty()) {
        json tj = json::object();
        for (const auto& [k, v] : rep.timings) tj[k] = v;
        j["timings"] = std::move(tj);
    }
    return j;
}

std::string spec_schema_text() {
    return R"schema({
  "title": "fingeo linear set spec",
  "type": "object",
  "required": ["q", "r", "t", "vars", "coords"],
  "properties": {
    "q": {"type": "integer", "description": "prime power, the subfield order"},
    "r": {"type": "integer", "description": "projective space PG(r-1, q^t)"},
    "t": {"type": "integer", "description": "extension degree of GF(q^t) over GF(q)"},
    "vars": {"type": "array", "items": {
      "type": "object",
      "required": ["name"],
      "properties": {
        "name": {"type": "string"},
        "degree": {"type": "integer", "description": "s with domain GF(q^s), s | t; default 1"},
        "constraints": {"type": "array", "items": {"enum": ["trace_zero"]}}
      }}},
    "coords": {"type": "array", "items": {"type": "string",
      "description": "expr := term ('+' term)*; term := [coeff '*'] var ['^q' ['^' int]]"}},
    "field": {"type": "object", "description": "optional overrides: p, e, modulus, sub_modulus",
      "properties": {
        "p": {"type": "integer"}, "e": {"type": "integer"}, "t": {"type": "integer"},
        "modulus": {"description": "\"auto\" or little-endian GF(p) coefficient list"},
        "sub_modulus": {"description": "\"auto\" or coefficient list"}
      }}
  }
})schema";
}

std::string report_schema_text() {
    return R"schema({
  "title": "fingeo report",
  "type": "object",
  "properties": {
    "tool": {"type": "object", "properties": {"name": {"const": "fingeo"}, "version": {"type": "string"}}},
    "command": {"type": "string"},
    "config": {"type": "object", "description": "full echo of the run configuration, including the seed"},
    "field": {"type": "object", "description": "p, e, t, q and the moduli actually used"},
    "result": {"type": "object", "description": "command-specific quantities; for codim: rank, h, c, dual_dim, bound, injective, dim_S, pairwise_dims, t3_closed_form?, minor_rank?, point_deficit?, complement_trial_dims, linear_set?, invariants"},
    "invariants": {"type": "array", "items": {"type": "object",
      "properties": {"name": {"type": "string"}, "pass": {"type": "boolean"}, "detail": {"type": "string"}}}}
  }
})schema";
}

} // namespace fingeo
