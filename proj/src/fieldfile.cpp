#include "lat/fieldfile.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lat {

using nlohmann::json;

static Rat rat_of_json(const json& v) {
    if (v.is_number_integer()) return Rat(static_cast<long>(v.get<int64_t>()));
    if (v.is_string()) return rat_parse(v.get<std::string>());
    throw BadInput("coordinate entries must be integers or \"p/q\" strings");
}

static std::vector<FieldElement> elements_of_json(const json& arr, const FieldPtr& field,
                                                  const char* what) {
    if (!arr.is_array()) throw BadInput(std::string(what) + " must be an array");
    std::vector<FieldElement> out;
    for (const auto& row : arr) {
        if (!row.is_array() || static_cast<int>(row.size()) != field->degree())
            throw BadInput(std::string(what) +
                           " entries must have one coordinate per basis power");
        std::vector<Rat> coords;
        coords.reserve(row.size());
        for (const auto& v : row) coords.push_back(rat_of_json(v));
        out.push_back(field->element(std::move(coords)));
    }
    return out;
}

FieldData parse_field_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw BadInput(origin + ": " + e.what());
    }
    for (const char* key : {"label", "coeffs", "basis", "units", "precision_bits"})
        if (!j.contains(key)) throw BadInput(origin + ": missing key '" + key + "'");

    FieldSpec spec;
    spec.label = j["label"].get<std::string>();
    spec.precision_bits = j["precision_bits"].get<int>();
    for (const auto& c : j["coeffs"]) {
        if (!c.is_number_integer())
            throw BadInput(origin + ": coeffs must be integers");
        spec.coeffs.emplace_back(static_cast<long>(c.get<int64_t>()));
    }

    FieldData data;
    data.field = Field::parse(spec);
    data.label = spec.label;
    data.precision_bits = spec.precision_bits;
    data.basis = elements_of_json(j["basis"], data.field, "basis");
    data.units = elements_of_json(j["units"], data.field, "units");

    const int s = data.field->degree();
    if (static_cast<int>(data.basis.size()) != s)
        throw BadInput(origin + ": basis must have exactly " + std::to_string(s) +
                       " elements");

    // Validate the basis via its discriminant: det(Tr(b_i b_j)) must equal
    // disc(f) * det(T)^2 with T the coordinate matrix, both sides exact.
    std::vector<std::vector<Rat>> gram(static_cast<size_t>(s),
                                       std::vector<Rat>(static_cast<size_t>(s)));
    for (int i = 0; i < s; ++i)
        for (int k = 0; k < s; ++k)
            gram[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                (data.basis[static_cast<size_t>(i)] * data.basis[static_cast<size_t>(k)])
                    .trace();
    Rat disc_basis = rat_det(gram);
    std::vector<std::vector<Rat>> coord_rows;
    for (const auto& b : data.basis) coord_rows.push_back(b.coords());
    Rat tdet = rat_det(coord_rows);
    if (tdet == 0) throw RankDeficient(origin + ": basis coordinate matrix is singular");
    if (disc_basis != data.field->discriminant() * tdet * tdet)
        throw BadInput(origin + ": basis discriminant does not match the resultant value");

    // Units: exact |norm| = 1.
    for (const auto& u : data.units) {
        Rat n = u.norm();
        if (n != 1 && n != -1)
            throw BadInput(origin + ": unit has |norm| != 1");
    }
    if (static_cast<int>(data.units.size()) != s - 1)
        throw BadInput(origin + ": expected " + std::to_string(s - 1) +
                       " fundamental units");
    return data;
}

FieldData load_field_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open field file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_field_json(ss.str(), path);
}

} // namespace lat
