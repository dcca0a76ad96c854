#include "ergo/records.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ergo/errors.hpp"

namespace ergo {

namespace {

constexpr std::array<const char*, 15> kKeys{
    "model", "N",  "ell", "E",      "E_A",    "E_tilde", "E_A0",       "delta_E",
    "W",     "Q",  "w_frac", "q_frac", "S",   "ent_gap", "schmidt_chi"};

std::array<double, 11> numeric_fields(const ScanRecord& r) {
    return {r.energy,    r.block_energy, r.passive, r.block_ground,       r.excess,
            r.ergotropy, r.bound,        r.ergotropy_fraction, r.bound_fraction, r.entropy,
            r.ent_gap};
}

void assign_numeric(ScanRecord& r, std::size_t k, double v) {
    double* slots[] = {&r.energy,    &r.block_energy, &r.passive,
                       &r.block_ground, &r.excess,    &r.ergotropy,
                       &r.bound,     &r.ergotropy_fraction, &r.bound_fraction,
                       &r.entropy,   &r.ent_gap};
    *slots[k] = v;
}

double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError("bad number '" + std::string(s) + "'", line);
    }
    return v;
}

std::size_t parse_count(std::string_view s, std::size_t line) {
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
        throw ParseError("bad count '" + std::string(s) + "'", line);
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

ScanRecord parse_csv_row(std::string_view line, std::size_t lineno) {
    const auto fields = split(line, ',');
    if (fields.size() != kKeys.size()) {
        throw ParseError("expected " + std::to_string(kKeys.size()) + " fields, got " +
                             std::to_string(fields.size()),
                         lineno);
    }
    ScanRecord r;
    r.model = std::string(fields[0]);
    if (r.model.empty()) throw ParseError("empty model name", lineno);
    r.n = parse_count(fields[1], lineno);
    r.ell = parse_count(fields[2], lineno);
    for (std::size_t k = 0; k < 11; ++k) assign_numeric(r, k, parse_double(fields[3 + k], lineno));
    if (!fields[14].empty()) r.schmidt_chi = parse_count(fields[14], lineno);
    return r;
}

ScanRecord parse_json_row(const std::string& line, std::size_t lineno) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!j.is_object()) throw ParseError("expected a JSON object", lineno);
    try {
        ScanRecord r;
        r.model = j.at("model").get<std::string>();
        r.n = j.at("N").get<std::size_t>();
        r.ell = j.at("ell").get<std::size_t>();
        for (std::size_t k = 0; k < 11; ++k) {
            const auto& v = j.at(kKeys[3 + k]);
            if (!v.is_number()) throw ParseError(std::string("field ") + kKeys[3 + k] + " is not a number", lineno);
            assign_numeric(r, k, v.get<double>());
        }
        const auto& chi = j.at("schmidt_chi");
        if (!chi.is_null()) r.schmidt_chi = chi.get<std::size_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("missing or mistyped field: ") + e.what(), lineno);
    }
}

}  // namespace

ScanRecord make_record(std::string model, const EnergyDecomposition& d,
                       std::optional<std::size_t> schmidt_chi) {
    ScanRecord r;
    r.model = std::move(model);
    r.n = d.sites;
    r.ell = d.block;
    r.energy = d.ground;
    r.block_energy = d.block_energy;
    r.passive = d.passive;
    r.block_ground = d.block_ground;
    r.excess = d.excess;
    r.ergotropy = d.ergotropy;
    r.bound = d.bound;
    r.ergotropy_fraction = d.ergotropy_fraction;
    r.bound_fraction = d.bound_fraction;
    r.entropy = d.entropy;
    r.ent_gap = d.gap;
    r.schmidt_chi = schmidt_chi;
    return r;
}

std::string format_number(double x) {
    if (!std::isfinite(x)) throw InputError("record field is not finite");
    if (x == 0.0) return "0";  // no "-0"; JSON readers drop the sign
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string to_csv_row(const ScanRecord& r) {
    std::string s = r.model + "," + std::to_string(r.n) + "," + std::to_string(r.ell);
    for (double v : numeric_fields(r)) s += "," + format_number(v);
    s += ",";
    if (r.schmidt_chi) s += std::to_string(*r.schmidt_chi);
    return s;
}

std::string to_json_line(const ScanRecord& r) {
    // Numbers are written by hand so both formats share the same digits.
    std::string s = "{\"model\":" + nlohmann::json(r.model).dump() +
                    ",\"N\":" + std::to_string(r.n) + ",\"ell\":" + std::to_string(r.ell);
    const auto values = numeric_fields(r);
    for (std::size_t k = 0; k < values.size(); ++k) {
        s += ",\"";
        s += kKeys[3 + k];
        s += "\":" + format_number(values[k]);
    }
    s += ",\"schmidt_chi\":";
    s += r.schmidt_chi ? std::to_string(*r.schmidt_chi) : "null";
    s += "}";
    return s;
}

void write_records(std::ostream& out, std::span<const ScanRecord> records, RecordFormat format) {
    if (format == RecordFormat::csv) out << kCsvHeader << '\n';
    for (const ScanRecord& r : records) {
        out << (format == RecordFormat::csv ? to_csv_row(r) : to_json_line(r)) << '\n';
    }
}

std::vector<ScanRecord> read_records(std::istream& in) {
    std::vector<ScanRecord> out;
    std::string line;
    std::size_t lineno = 0;
    std::optional<RecordFormat> format;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!format) {
            if (line.front() == '{') {
                format = RecordFormat::json;
            } else {
                if (line != kCsvHeader) throw ParseError("unexpected CSV header", lineno);
                format = RecordFormat::csv;
                continue;
            }
        }
        out.push_back(*format == RecordFormat::csv ? parse_csv_row(line, lineno)
                                                   : parse_json_row(line, lineno));
    }
    return out;
}

}  // namespace ergo
