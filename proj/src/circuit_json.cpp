#include <string>

#include "json.hpp"
#include "linopt/elements.hpp"
#include "linopt/error.hpp"

namespace linopt {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

ModeId mode_field(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
    return ModeId(v.get<std::string>());
}

double number_field(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
    return v.get<double>();
}

std::pair<ModeId, ModeId> mode_pair(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
        throw ParseError(where + ": field '" + key + "' must be a pair of mode labels");
    }
    return {ModeId(v[0].get<std::string>()), ModeId(v[1].get<std::string>())};
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw ParseError(where + ": unknown field '" + k + "'");
    }
}

Element parse_element(const json& e, const std::string& where) {
    if (!e.is_object()) throw ParseError(where + ": element must be an object");
    const json& kind = field(e, "kind", where);
    if (!kind.is_string()) throw ParseError(where + ": 'kind' must be a string");
    const auto k = kind.get<std::string>();
    if (k == "hwp") {
        reject_unknown(e, {"kind", "mode", "rotation_deg"}, where);
        return Hwp{mode_field(e, "mode", where), number_field(e, "rotation_deg", where)};
    }
    if (k == "pbs") {
        reject_unknown(e, {"kind", "in", "out"}, where);
        auto [ia, ib] = mode_pair(e, "in", where);
        auto [oa, ob] = mode_pair(e, "out", where);
        return Pbs{ia, ib, oa, ob};
    }
    if (k == "phase") {
        reject_unknown(e, {"kind", "mode", "pol", "phase_rad"}, where);
        const json& pol = field(e, "pol", where);
        if (!pol.is_string() || pol.get<std::string>().size() != 1) {
            throw ParseError(where + ": 'pol' must be \"H\" or \"V\"");
        }
        return PhaseShift{mode_field(e, "mode", where), polarization_from_char(pol.get<std::string>()[0]),
                          number_field(e, "phase_rad", where)};
    }
    throw ParseError(where + ": unknown element kind '" + k + "'");
}

}  // namespace

Circuit parse_circuit_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw ParseError("circuit JSON: byte " + std::to_string(ex.byte) + ": " + ex.what());
    }
    if (!doc.is_object()) throw ParseError("circuit JSON: top level must be an object");
    reject_unknown(doc, {"modes", "elements"}, "circuit JSON");

    Circuit c;
    const json& modes = field(doc, "modes", "circuit JSON");
    if (!modes.is_array()) throw ParseError("circuit JSON: 'modes' must be an array");
    for (const auto& m : modes) {
        if (!m.is_string()) throw ParseError("circuit JSON: mode labels must be strings");
        c.modes.emplace_back(m.get<std::string>());
    }
    const json& elements = field(doc, "elements", "circuit JSON");
    if (!elements.is_array()) throw ParseError("circuit JSON: 'elements' must be an array");
    for (std::size_t i = 0; i < elements.size(); ++i) {
        c.elements.push_back(parse_element(elements[i], "circuit JSON: element " + std::to_string(i)));
    }
    return c;
}

std::string to_json(const Circuit& c) {
    json doc = json::object();
    json modes = json::array();
    for (const auto& m : c.modes) modes.push_back(m.label());
    json elements = json::array();
    for (const auto& e : c.elements) {
        if (const auto* h = std::get_if<Hwp>(&e)) {
            elements.push_back({{"kind", "hwp"}, {"mode", h->mode.label()}, {"rotation_deg", h->rotation_deg}});
        } else if (const auto* p = std::get_if<Pbs>(&e)) {
            elements.push_back({{"kind", "pbs"},
                                {"in", {p->in_a.label(), p->in_b.label()}},
                                {"out", {p->out_a.label(), p->out_b.label()}}});
        } else if (const auto* ph = std::get_if<PhaseShift>(&e)) {
            elements.push_back({{"kind", "phase"},
                                {"mode", ph->mode.label()},
                                {"pol", std::string(1, to_char(ph->pol))},
                                {"phase_rad", ph->phase_rad}});
        }
    }
    doc["modes"] = modes;
    doc["elements"] = elements;
    return doc.dump(2);
}

}  // namespace linopt
