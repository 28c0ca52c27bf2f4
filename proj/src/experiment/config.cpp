#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/experiment.hpp"

namespace stab::exp {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "': cannot parse number '" + v + "'");
    }
}

std::size_t parse_size(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size() || x < 0) throw std::invalid_argument(v);
        return static_cast<std::size_t>(x);
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "': cannot parse integer '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParseError("key '" + key + "': cannot parse boolean '" + v + "'");
}

core::LawSpec parse_law(const std::string& key, const std::string& v) {
    // forms: gaussian[,mean,sd] | uniform[,a,b] | exponential[,rate] |
    // gamma,shape,scale
    const auto parts = split(v, ',');
    core::LawSpec law;
    if (parts.empty()) throw ParseError("key '" + key + "': empty law");
    const std::string& name = parts[0];
    if (name == "gaussian") {
        law.kind = core::InputLaw::Gaussian;
        law.a = parts.size() > 1 ? parse_double(key, parts[1]) : 0.0;
        law.b = parts.size() > 2 ? parse_double(key, parts[2]) : 1.0;
    } else if (name == "uniform") {
        law.kind = core::InputLaw::UniformBox;
        law.a = parts.size() > 1 ? parse_double(key, parts[1]) : 0.0;
        law.b = parts.size() > 2 ? parse_double(key, parts[2]) : 1.0;
    } else if (name == "exponential") {
        law.kind = core::InputLaw::Exponential;
        law.a = parts.size() > 1 ? parse_double(key, parts[1]) : 1.0;
    } else if (name == "gamma") {
        if (parts.size() < 3)
            throw ParseError("key '" + key + "': gamma needs shape,scale");
        law.kind = core::InputLaw::Gamma;
        law.a = parse_double(key, parts[1]);
        law.b = parse_double(key, parts[2]);
    } else {
        throw UnsupportedLaw("key '" + key + "': unknown law '" + name +
                             "' (registry: uniform, gaussian, exponential, gamma)");
    }
    return law;
}

void apply_key(ExperimentSpec& spec, const std::string& key,
               const std::string& value, int line) {
    const std::string where = " (line " + std::to_string(line) + ")";
    if (key == "family") {
        const auto f = core::family_from_name(value);
        if (!f) throw ParseError("unknown family '" + value + "'" + where);
        spec.family = *f;
    } else if (key == "n" || key == "n_grid") {
        spec.n_grid.clear();
        for (const auto& part : split(value, ','))
            spec.n_grid.push_back(parse_size(key, part));
    } else if (key == "d") {
        spec.d = parse_size(key, value);
    } else if (key == "q") {
        spec.q = parse_double(key, value);
    } else if (key == "m_rows") {
        spec.m_rows = parse_size(key, value);
    } else if (key == "lattice_shape") {
        spec.lattice_shape.clear();
        for (const auto& part : split(value, 'x'))
            spec.lattice_shape.push_back(parse_size(key, part));
    } else if (key == "graph_kind") {
        if (value == "tour")
            spec.graph_kind = wgraph::GraphKind::Tour;
        else if (value == "tree")
            spec.graph_kind = wgraph::GraphKind::Tree;
        else if (value == "matching")
            spec.graph_kind = wgraph::GraphKind::Matching;
        else
            throw ParseError("unknown graph_kind '" + value + "'" + where);
    } else if (key == "variant") {
        if (value == "single_block")
            spec.variant = core::SchemeVariant::SingleBlock;
        else if (value == "row_block")
            spec.variant = core::SchemeVariant::RowBlock;
        else
            throw ParseError("unknown variant '" + value + "'" + where);
    } else if (key == "epsilon" || key == "epsilon_grid") {
        spec.epsilon_grid.clear();
        for (const auto& part : split(value, ','))
            spec.epsilon_grid.push_back(parse_double(key, part));
    } else if (key == "theta_c" || key == "theta_c_grid") {
        spec.theta_c_grid.clear();
        for (const auto& part : split(value, ','))
            spec.theta_c_grid.push_back(parse_double(key, part));
    } else if (key == "law") {
        spec.input_law = parse_law(key, value);
        spec.law_given = true;
    } else if (key == "replications") {
        spec.replications = parse_size(key, value);
    } else if (key == "seed" || key == "master_seed") {
        spec.master_seed = parse_size(key, value);
    } else if (key == "block_subsample") {
        spec.block_subsample = parse_size(key, value);
    } else if (key == "jobs") {
        spec.jobs = parse_size(key, value);
    } else if (key == "progeny") {
        if (value == "binary") {
            spec.progeny_pmf = {0.0, 0.0, 1.0};
        } else {
            spec.progeny_pmf.clear();
            for (const auto& part : split(value, ','))
                spec.progeny_pmf.push_back(parse_double(key, part));
        }
    } else if (key == "brw_condition_survival") {
        spec.brw_condition_survival = parse_bool(key, value);
    } else if (key == "brw_resample_tree") {
        spec.brw_resample_tree = parse_bool(key, value);
    } else if (key == "out_dir") {
        spec.out_dir = value;
    } else if (key == "format") {
        if (value != "csv" && value != "json" && value != "both")
            throw ParseError("unknown format '" + value + "'" + where);
        spec.format = value;
    } else {
        throw ParseError("unknown key '" + key + "'" + where);
    }
}

} // namespace

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Calibrate: return "calibrate";
        case Kind::Stability: return "stability";
        case Kind::Tightness: return "tightness";
        case Kind::OracleCheck: return "oracle-check";
    }
    return "?";
}

ExperimentSpec parse_config_text(const std::string& text, Kind kind) {
    ExperimentSpec spec;
    spec.kind = kind;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::string section; // empty = global
    const std::string want = kind_name(kind);
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ParseError("malformed section header (line " +
                                 std::to_string(line) + ")");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value (line " +
                             std::to_string(line) + ")");
        if (!section.empty() && section != want) continue;
        apply_key(spec, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line);
    }
    validate(spec);
    return spec;
}

ExperimentSpec load_config(const std::string& path, Kind kind) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), kind);
}

void validate(const ExperimentSpec& spec) {
    if (spec.replications < 1)
        throw ValidationError("replications must be >= 1");
    for (const double e : spec.epsilon_grid)
        if (e <= 0.0 || e >= 1.0)
            throw ValidationError("epsilon must lie in (0,1)");
    if (spec.n_grid.empty()) throw ValidationError("empty n grid");
    for (const std::size_t n : spec.n_grid) {
        switch (spec.family) {
            case core::Family::Tsp:
                if (n < 3 || n > 15)
                    throw ValidationError("tsp: n = " + std::to_string(n) +
                                          " outside [3, 15] (Held-Karp cap)");
                break;
            case core::Family::Mst:
                if (n < 2)
                    throw ValidationError("mst: n must be >= 2");
                break;
            case core::Family::WeightedGraph:
                if (spec.graph_kind == wgraph::GraphKind::Tour && n > 15)
                    throw ValidationError("weighted tours capped at p = 15");
                if (spec.graph_kind == wgraph::GraphKind::Matching && n > 16)
                    throw ValidationError("weighted matchings capped at p = 16");
                break;
            case core::Family::Assignment:
                if (n < 1) throw ValidationError("assignment: n must be >= 1");
                break;
            case core::Family::Sk:
                if (n < 2 || n > 22)
                    throw ValidationError("sk: n = " + std::to_string(n) +
                                          " outside [2, 22] (Gray-code cap)");
                break;
            case core::Family::Ea:
                break; // validated through lattice_shape below
            case core::Family::Brw:
                if (n < 1 || n > 30)
                    throw ValidationError("brw: generations capped at 30");
                break;
            case core::Family::Wigner:
            case core::Family::Wishart:
                if (n > 512)
                    throw ValidationError("matrix dimension capped at 512");
                break;
        }
    }
    if (spec.family == core::Family::Ea) {
        if (spec.lattice_shape.empty())
            throw ValidationError("ea requires lattice_shape (e.g. 3x4)");
        std::size_t sites = 1;
        for (const std::size_t s : spec.lattice_shape) sites *= s;
        if (sites < 2 || sites > 22)
            throw ValidationError("ea: lattice sites = " +
                                  std::to_string(sites) +
                                  " outside [2, 22] (Gray-code cap)");
    }
    if (spec.family == core::Family::Brw) {
        double mass = 0.0, mean = 0.0;
        for (std::size_t k = 0; k < spec.progeny_pmf.size(); ++k) {
            if (spec.progeny_pmf[k] < 0.0)
                throw ValidationError("progeny pmf entries must be >= 0");
            mass += spec.progeny_pmf[k];
            mean += static_cast<double>(k) * spec.progeny_pmf[k];
        }
        if (std::abs(mass - 1.0) > 1e-9)
            throw ValidationError("progeny pmf must sum to 1");
        if (mean <= 1.0)
            throw ValidationError("progeny mean must exceed 1 (supercritical)");
    }
}

} // namespace stab::exp
