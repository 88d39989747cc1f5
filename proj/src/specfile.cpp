#include "grwcert/specfile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "grwcert/error.hpp"
#include "grwcert/jet.hpp"

namespace grwcert {

namespace {

using json = nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& require(const json& obj, const std::string& key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError("missing required field", join(path, key));
    return *it;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& path)
{
    for (const auto& [key, _] : obj.items()) {
        bool found = false;
        for (const char* k : known) found = found || key == k;
        if (!found) throw SchemaError("unknown field", join(path, key));
    }
}

const json& as_object(const json& v, const std::string& field)
{
    if (!v.is_object()) throw SchemaError("expected an object", field);
    return v;
}

const json& as_array(const json& v, const std::string& field)
{
    if (!v.is_array()) throw SchemaError("expected an array", field);
    return v;
}

std::string as_string(const json& v, const std::string& field)
{
    if (!v.is_string()) throw SchemaError("expected a string", field);
    return v.get<std::string>();
}

double as_number(const json& v, const std::string& field)
{
    if (!v.is_number()) throw SchemaError("expected a number", field);
    return v.get<double>();
}

bool is_identifier(const std::string& s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

std::pair<int, int> index_key(const std::string& key, int n, const std::string& field)
{
    const auto comma = key.find(',');
    auto digits = [](const std::string& s) {
        return !s.empty() && s.size() < 4 &&
               std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    if (comma == std::string::npos || !digits(key.substr(0, comma)) || !digits(key.substr(comma + 1)))
        throw SchemaError("index key must look like \"i,j\"", field);
    const int i = std::stoi(key.substr(0, comma)), j = std::stoi(key.substr(comma + 1));
    if (i >= n || j >= n) throw SchemaError("index out of range", field);
    if (i > j) throw SchemaError("only upper-triangle keys (i <= j) are accepted", field);
    return {i, j};
}

std::map<std::pair<int, int>, std::string> parse_components(const json& v, int n, const std::string& field)
{
    std::map<std::pair<int, int>, std::string> out;
    for (const auto& [key, val] : as_object(v, field).items()) {
        const std::string f = join(field, key);
        out[index_key(key, n, f)] = as_string(val, f);
    }
    return out;
}

std::vector<std::string> string_list(const json& v, std::size_t n, const std::string& field)
{
    as_array(v, field);
    if (v.size() != n) throw SchemaError("expected " + std::to_string(n) + " entries", field);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(as_string(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

json components_json(const std::map<std::pair<int, int>, std::string>& m)
{
    json out = json::object();
    for (const auto& [ij, e] : m) out[std::to_string(ij.first) + "," + std::to_string(ij.second)] = e;
    return out;
}

}  // namespace

ChartSpec parse_spec(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("not valid JSON: ") + e.what(), "$");
    }
    as_object(doc, "$");
    reject_unknown(doc,
                   {"schema", "name", "dimension", "signature", "coordinates", "parameters", "metric",
                    "velocity_field", "domain", "basepoint", "grw"},
                   "");

    const json& version = require(doc, "schema", "");
    if (!version.is_number_integer() || version.get<int>() != kSpecSchemaVersion)
        throw SchemaError("unsupported schema version, expected " + std::to_string(kSpecSchemaVersion), "schema");

    ChartSpec s;
    s.name = as_string(require(doc, "name", ""), "name");

    const json& dim = require(doc, "dimension", "");
    if (!dim.is_number_integer()) throw SchemaError("expected an integer", "dimension");
    s.dimension = dim.get<int>();
    if (s.dimension < 2 || s.dimension > kMaxDim)
        throw SchemaError("dimension must be between 2 and " + std::to_string(kMaxDim), "dimension");
    const auto n = static_cast<std::size_t>(s.dimension);

    const std::string sig = as_string(require(doc, "signature", ""), "signature");
    if (sig == "lorentzian")
        s.signature = Signature::Lorentzian;
    else if (sig == "riemannian")
        s.signature = Signature::Riemannian;
    else
        throw SchemaError("expected \"lorentzian\" or \"riemannian\"", "signature");

    s.coordinates = string_list(require(doc, "coordinates", ""), n, "coordinates");
    std::set<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = s.coordinates[i];
        const std::string f = "coordinates[" + std::to_string(i) + "]";
        if (!is_identifier(c)) throw SchemaError("not an identifier", f);
        if (!names.insert(c).second) throw SchemaError("duplicate name '" + c + "'", f);
    }

    if (auto it = doc.find("parameters"); it != doc.end()) {
        for (const auto& [key, val] : as_object(*it, "parameters").items()) {
            const std::string f = join("parameters", key);
            if (!is_identifier(key)) throw SchemaError("not an identifier", f);
            if (!names.insert(key).second) throw SchemaError("duplicate name '" + key + "'", f);
            s.parameters[key] = as_number(val, f);
        }
    }

    s.metric = parse_components(require(doc, "metric", ""), s.dimension, "metric");

    if (auto it = doc.find("velocity_field"); it != doc.end())
        s.velocity_field = string_list(*it, n, "velocity_field");

    const json& domain = as_object(require(doc, "domain", ""), "domain");
    reject_unknown(domain, {"ranges", "exclusions"}, "domain");
    const json& ranges = as_object(require(domain, "ranges", "domain"), "domain.ranges");
    for (const auto& [key, _] : ranges.items())
        if (!std::count(s.coordinates.begin(), s.coordinates.end(), key))
            throw SchemaError("not a coordinate", join("domain.ranges", key));
    for (const auto& c : s.coordinates) {
        const std::string f = join("domain.ranges", c);
        const json& r = require(ranges, c, "domain.ranges");
        if (!r.is_array() || r.size() != 2) throw SchemaError("expected [lo, hi]", f);
        const double lo = as_number(r[0], f + "[0]"), hi = as_number(r[1], f + "[1]");
        if (!(lo < hi)) throw SchemaError("empty range", f);
        s.ranges.emplace_back(lo, hi);
    }
    if (auto it = domain.find("exclusions"); it != domain.end()) {
        as_array(*it, "domain.exclusions");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string f = "domain.exclusions[" + std::to_string(i) + "]";
            const json& e = as_object((*it)[i], f);
            reject_unknown(e, {"expr", "min"}, f);
            Exclusion ex;
            ex.expr = as_string(require(e, "expr", f), f + ".expr");
            if (auto m = e.find("min"); m != e.end()) ex.min = as_number(*m, f + ".min");
            s.exclusions.push_back(ex);
        }
    }

    if (auto it = doc.find("basepoint"); it != doc.end()) {
        as_array(*it, "basepoint");
        if (it->size() != n) throw SchemaError("expected " + std::to_string(n) + " entries", "basepoint");
        ChartPoint b;
        for (std::size_t i = 0; i < n; ++i) b.push_back(as_number((*it)[i], "basepoint[" + std::to_string(i) + "]"));
        s.basepoint = b;
    }

    if (auto it = doc.find("grw"); it != doc.end()) {
        as_object(*it, "grw");
        reject_unknown(*it, {"warp", "fiber_metric"}, "grw");
        WarpedProductSpec w;
        w.warp = as_string(require(*it, "warp", "grw"), "grw.warp");
        w.fiber_metric = parse_components(require(*it, "fiber_metric", "grw"), s.dimension - 1, "grw.fiber_metric");
        s.warped_product = w;
    }
    return s;
}

ChartSpec load_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string spec_to_json(const ChartSpec& s)
{
    json doc;
    doc["schema"] = kSpecSchemaVersion;
    doc["name"] = s.name;
    doc["dimension"] = s.dimension;
    doc["signature"] = to_string(s.signature);
    doc["coordinates"] = s.coordinates;
    doc["parameters"] = json::object();
    for (const auto& [k, v] : s.parameters) doc["parameters"][k] = v;
    doc["metric"] = components_json(s.metric);
    if (s.velocity_field) doc["velocity_field"] = *s.velocity_field;
    json ranges = json::object();
    for (std::size_t i = 0; i < s.coordinates.size() && i < s.ranges.size(); ++i)
        ranges[s.coordinates[i]] = {s.ranges[i].first, s.ranges[i].second};
    json exclusions = json::array();
    for (const auto& e : s.exclusions) exclusions.push_back({{"expr", e.expr}, {"min", e.min}});
    doc["domain"] = {{"ranges", ranges}, {"exclusions", exclusions}};
    if (s.basepoint) doc["basepoint"] = *s.basepoint;
    if (s.warped_product)
        doc["grw"] = {{"warp", s.warped_product->warp}, {"fiber_metric", components_json(s.warped_product->fiber_metric)}};
    return doc.dump(2) + "\n";
}

}  // namespace grwcert
