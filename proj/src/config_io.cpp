#include "fgplate/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fgplate/errors.hpp"

namespace fgplate {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* name : allowed)
            if (it.key() == name) known = true;
        if (!known) throw ConfigError(where + ": unknown field '" + it.key() + "'");
    }
}

double require_number(const json& obj, const std::string& where, const char* name) {
    if (!obj.contains(name)) throw ConfigError(where + ": missing field '" + name + "'");
    const auto& v = obj.at(name);
    if (!v.is_number()) throw ConfigError(where + "." + name + ": expected a number");
    return v.get<double>();
}

BoundaryCondition parse_bc(const json& v, const std::string& where) {
    if (!v.is_string()) throw ConfigError(where + ": expected a string");
    const std::string s = v.get<std::string>();
    if (s == "free") return BoundaryCondition::free_edge;
    if (s == "soft_ss") return BoundaryCondition::soft_simply_supported;
    if (s == "hard_ss") return BoundaryCondition::hard_simply_supported;
    if (s == "clamped") return BoundaryCondition::clamped;
    throw ConfigError(where + ": expected one of free|soft_ss|hard_ss|clamped, got '" + s + "'");
}

std::string bc_name(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::free_edge: return "free";
        case BoundaryCondition::soft_simply_supported: return "soft_ss";
        case BoundaryCondition::hard_simply_supported: return "hard_ss";
        case BoundaryCondition::clamped: return "clamped";
    }
    return "?";
}

} // namespace

PlateConfig parse_config(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        // map the byte offset to a line for the diagnostic
        size_t line = 1;
        for (size_t i = 0; i < json_text.size() && i + 1 < e.byte; ++i)
            if (json_text[i] == '\n') ++line;
        std::ostringstream msg;
        msg << origin << ":" << line << ": malformed JSON (" << e.what() << ")";
        throw ConfigError(msg.str());
    }
    if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");
    reject_unknown(doc, origin,
                   {"material", "plate", "segments", "inner_radius", "inner_bc", "outer_bc",
                    "interface_tangential"});

    PlateConfig cfg;
    if (!doc.contains("material")) throw ConfigError(origin + ": missing field 'material'");
    const json& mat = doc.at("material");
    if (!mat.is_object()) throw ConfigError(origin + ".material: expected an object");
    reject_unknown(mat, origin + ".material",
                   {"E_m", "E_c", "rho_m", "rho_c", "nu", "g", "kappa_sq"});
    cfg.material.E_m = require_number(mat, origin + ".material", "E_m");
    cfg.material.E_c = require_number(mat, origin + ".material", "E_c");
    cfg.material.rho_m = require_number(mat, origin + ".material", "rho_m");
    cfg.material.rho_c = require_number(mat, origin + ".material", "rho_c");
    cfg.material.nu = mat.contains("nu") ? require_number(mat, origin + ".material", "nu") : 0.3;
    cfg.material.power_index =
        mat.contains("g") ? require_number(mat, origin + ".material", "g") : 1.0;
    cfg.material.shear_correction =
        mat.contains("kappa_sq") ? require_number(mat, origin + ".material", "kappa_sq")
                                 : 5.0 / 6.0;

    if (!doc.contains("plate")) throw ConfigError(origin + ": missing field 'plate'");
    {
        const auto& v = doc.at("plate");
        if (!v.is_string()) throw ConfigError(origin + ".plate: expected a string");
        const std::string s = v.get<std::string>();
        if (s == "circular")
            cfg.kind = PlateKind::circular;
        else if (s == "annular")
            cfg.kind = PlateKind::annular;
        else
            throw ConfigError(origin + ".plate: expected circular|annular, got '" + s + "'");
    }

    if (!doc.contains("segments")) throw ConfigError(origin + ": missing field 'segments'");
    const json& segs = doc.at("segments");
    if (!segs.is_array() || segs.empty())
        throw ConfigError(origin + ".segments: expected a non-empty array");
    for (size_t i = 0; i < segs.size(); ++i) {
        std::ostringstream where;
        where << origin << ".segments[" << i << "]";
        const json& s = segs[i];
        if (!s.is_object()) throw ConfigError(where.str() + ": expected an object");
        reject_unknown(s, where.str(), {"outer_radius", "thickness"});
        SegmentGeometry seg;
        seg.outer_radius = require_number(s, where.str(), "outer_radius");
        seg.thickness = require_number(s, where.str(), "thickness");
        cfg.segments.push_back(seg);
    }

    if (!doc.contains("outer_bc")) throw ConfigError(origin + ": missing field 'outer_bc'");
    cfg.outer_bc = parse_bc(doc.at("outer_bc"), origin + ".outer_bc");
    if (doc.contains("inner_bc")) cfg.inner_bc = parse_bc(doc.at("inner_bc"), origin + ".inner_bc");
    if (doc.contains("inner_radius"))
        cfg.inner_radius = require_number(doc, origin, "inner_radius");
    if (doc.contains("interface_tangential")) {
        const auto& v = doc.at("interface_tangential");
        if (!v.is_string())
            throw ConfigError(origin + ".interface_tangential: expected a string");
        const std::string s = v.get<std::string>();
        if (s == "conjugate")
            cfg.interface_variant = InterfaceVariant::conjugate_shear;
        else if (s == "literal")
            cfg.interface_variant = InterfaceVariant::literal_hoop;
        else
            throw ConfigError(origin +
                              ".interface_tangential: expected conjugate|literal, got '" + s +
                              "'");
    }

    cfg.finalize();
    return cfg;
}

PlateConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

std::string config_to_json(const PlateConfig& config) {
    json doc;
    doc["material"] = {{"E_m", config.material.E_m},
                       {"E_c", config.material.E_c},
                       {"rho_m", config.material.rho_m},
                       {"rho_c", config.material.rho_c},
                       {"nu", config.material.nu},
                       {"g", config.material.power_index},
                       {"kappa_sq", config.material.shear_correction}};
    doc["plate"] = config.kind == PlateKind::circular ? "circular" : "annular";
    doc["segments"] = json::array();
    for (const auto& seg : config.segments)
        doc["segments"].push_back(
            {{"outer_radius", seg.outer_radius}, {"thickness", seg.thickness}});
    doc["outer_bc"] = bc_name(config.outer_bc);
    if (config.inner_bc) doc["inner_bc"] = bc_name(*config.inner_bc);
    if (config.kind == PlateKind::annular) doc["inner_radius"] = config.inner_radius;
    if (config.interface_variant == InterfaceVariant::literal_hoop)
        doc["interface_tangential"] = "literal";
    return doc.dump(2) + "\n";
}

} // namespace fgplate
