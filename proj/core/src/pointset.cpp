#include "hypercluster/pointset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "hypercluster/error.hpp"

namespace hypercluster {

void Observations::validate() const
{
    if (coords.rank() != 2 || values.rank() != 2) {
        throw FormatError("observations must be [I x d] coords and [I x m] values");
    }
    if (coords.rows() == 0 || coords.empty()) {
        throw FormatError("observations must contain at least one point");
    }
    if (coords.rows() != values.rows()) {
        throw FormatError("coords have " + std::to_string(coords.rows()) + " rows but values have " +
                          std::to_string(values.rows()));
    }
    for (float c : coords.values()) {
        if (!(c >= 0.0f && c <= 1.0f)) {
            throw FormatError("coordinate " + std::to_string(c) + " outside [0, 1]");
        }
    }
    if (!values.all_finite()) {
        throw FormatError("non-finite function value");
    }
}

bool Dataset::labeled() const
{
    return !samples.empty() &&
           std::all_of(samples.begin(), samples.end(), [](const PointSet& p) { return p.label.has_value(); });
}

std::size_t Dataset::num_classes() const
{
    std::set<int> distinct;
    for (const auto& s : samples) {
        if (s.label) {
            distinct.insert(*s.label);
        }
    }
    return distinct.size();
}

std::vector<int> Dataset::labels() const
{
    std::vector<int> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        if (!s.label) {
            throw ArgumentError("sample '" + s.id + "' has no label");
        }
        out.push_back(*s.label);
    }
    return out;
}

std::vector<Observations> Dataset::observations() const
{
    std::vector<Observations> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        out.push_back(s.obs);
    }
    return out;
}

void Dataset::validate()
{
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const auto& s = samples[n];
        s.obs.validate();
        if (d == 0 && m == 0) {
            d = s.obs.dim();
            m = s.obs.channels();
        }
        if (s.obs.dim() != d || s.obs.channels() != m) {
            throw FormatError("sample '" + s.id + "' has (d, m) = (" + std::to_string(s.obs.dim()) + ", " +
                              std::to_string(s.obs.channels()) + "), dataset has (" + std::to_string(d) + ", " +
                              std::to_string(m) + ")");
        }
    }
}

namespace {

Tensor parse_matrix(const nlohmann::json& node, const char* field, std::size_t line)
{
    auto fail = [&](const std::string& what) {
        throw FormatError("line " + std::to_string(line) + ": field \"" + field + "\" " + what);
    };
    if (!node.is_array() || node.empty()) {
        fail("must be a non-empty array of rows");
    }
    std::size_t cols = 0;
    std::vector<float> data;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const auto& row = node[i];
        if (!row.is_array() || row.empty()) {
            fail("row " + std::to_string(i) + " is not a non-empty array");
        }
        if (i == 0) {
            cols = row.size();
        } else if (row.size() != cols) {
            fail("is ragged: row " + std::to_string(i) + " has " + std::to_string(row.size()) + " entries, expected " +
                 std::to_string(cols));
        }
        for (const auto& v : row) {
            if (!v.is_number()) {
                fail("row " + std::to_string(i) + " contains a non-number");
            }
            data.push_back(v.get<float>());
        }
    }
    return Tensor({node.size(), cols}, std::move(data));
}

void append_float(std::string& out, float v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void append_matrix(std::string& out, const Tensor& t)
{
    out += '[';
    for (std::size_t i = 0; i < t.rows(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += '[';
        for (std::size_t j = 0; j < t.cols(); ++j) {
            if (j != 0) {
                out += ',';
            }
            append_float(out, t(i, j));
        }
        out += ']';
    }
    out += ']';
}

} // namespace

Dataset read_jsonl(std::istream& in)
{
    Dataset ds;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError("line " + std::to_string(lineno) + ": malformed JSON (" + e.what() + ")");
        }
        if (!obj.is_object()) {
            throw FormatError("line " + std::to_string(lineno) + ": expected a JSON object");
        }
        for (const char* field : {"id", "x", "u"}) {
            if (!obj.contains(field)) {
                throw FormatError("line " + std::to_string(lineno) + ": missing field \"" + field + "\"");
            }
        }
        PointSet ps;
        if (!obj["id"].is_string()) {
            throw FormatError("line " + std::to_string(lineno) + ": field \"id\" must be a string");
        }
        ps.id = obj["id"].get<std::string>();
        if (obj.contains("label") && !obj["label"].is_null()) {
            if (!obj["label"].is_number_integer()) {
                throw FormatError("line " + std::to_string(lineno) + ": field \"label\" must be an integer");
            }
            ps.label = obj["label"].get<int>();
        }
        ps.obs.coords = parse_matrix(obj["x"], "x", lineno);
        ps.obs.values = parse_matrix(obj["u"], "u", lineno);
        try {
            ps.obs.validate();
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
        }
        ds.samples.push_back(std::move(ps));
    }
    ds.validate();
    return ds;
}

Dataset read_jsonl(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    return read_jsonl(in);
}

void write_jsonl(const Dataset& dataset, std::ostream& out)
{
    std::string line;
    for (const auto& s : dataset.samples) {
        line.clear();
        line += "{\"id\":";
        line += nlohmann::json(s.id).dump();
        if (s.label) {
            line += ",\"label\":" + std::to_string(*s.label);
        }
        line += ",\"x\":";
        append_matrix(line, s.obs.coords);
        line += ",\"u\":";
        append_matrix(line, s.obs.values);
        line += "}\n";
        out << line;
    }
}

void write_jsonl(const Dataset& dataset, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write " + path.string());
    }
    write_jsonl(dataset, out);
    if (!out) {
        throw FormatError("write failed for " + path.string());
    }
}

} // namespace hypercluster
