#include "hypercluster/exports.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "hypercluster/error.hpp"

namespace hypercluster {

namespace {

std::string fmt_float(float v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

void write_embedding_csv(const Dataset& dataset, const Tensor& weights, std::ostream& out)
{
    if (weights.rows() != dataset.size()) {
        throw DimensionError("embedding has " + std::to_string(weights.rows()) + " rows for " +
                             std::to_string(dataset.size()) + " samples");
    }
    out << "id,label";
    for (std::size_t j = 0; j < weights.cols(); ++j) {
        out << ",w_" << j;
    }
    out << '\n';
    for (std::size_t n = 0; n < dataset.size(); ++n) {
        const PointSet& s = dataset.samples[n];
        out << csv_field(s.id) << ',';
        if (s.label) {
            out << *s.label;
        }
        for (float v : weights.row(n)) {
            out << ',' << fmt_float(v);
        }
        out << '\n';
    }
}

EmbeddingTable read_embedding_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("embedding CSV is empty");
    }
    const auto header = split_csv(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
        throw FormatError("embedding CSV header must start with id,label,w_0");
    }
    const std::size_t dz = header.size() - 2;
    EmbeddingTable table;
    std::vector<float> data;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != dz + 2) {
            throw FormatError("embedding CSV line " + std::to_string(lineno) + " has " +
                              std::to_string(fields.size()) + " fields, expected " + std::to_string(dz + 2));
        }
        table.ids.push_back(fields[0]);
        if (fields[1].empty()) {
            table.labels.emplace_back();
        } else {
            table.labels.emplace_back(std::stoi(fields[1]));
        }
        for (std::size_t j = 0; j < dz; ++j) {
            float v = 0.0f;
            const auto& f = fields[j + 2];
            auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc()) {
                throw FormatError("embedding CSV line " + std::to_string(lineno) + ": bad number '" + f + "'");
            }
            data.push_back(v);
        }
    }
    table.weights = Tensor({table.ids.size(), dz}, std::move(data));
    return table;
}

void write_partition_csv(std::span<const std::string> ids, const Partition& partition,
                         std::span<const std::optional<int>> labels, std::ostream& out)
{
    const bool with_labels =
        !labels.empty() && std::any_of(labels.begin(), labels.end(), [](const auto& l) { return l.has_value(); });
    out << (with_labels ? "id,assigned,label\n" : "id,assigned\n");
    for (std::size_t n = 0; n < ids.size(); ++n) {
        out << csv_field(ids[n]) << ',' << partition.assignments[n];
        if (with_labels) {
            out << ',';
            if (labels[n]) {
                out << *labels[n];
            }
        }
        out << '\n';
    }
}

void write_projection_csv(std::span<const ProjectedPoint> points, std::ostream& out)
{
    out << "id,pc1,pc2,label,resolution\n";
    for (const ProjectedPoint& p : points) {
        out << csv_field(p.id) << ',' << fmt_float(p.pc1) << ',' << fmt_float(p.pc2) << ',';
        if (p.label) {
            out << *p.label;
        }
        out << ',' << p.resolution << '\n';
    }
}

void write_projection_svg(std::span<const ProjectedPoint> points, std::ostream& out)
{
    static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                     "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    constexpr double kSize = 600.0;
    constexpr double kMargin = 40.0;

    float xmin = 0.0f, xmax = 1.0f, ymin = 0.0f, ymax = 1.0f;
    if (!points.empty()) {
        xmin = xmax = points[0].pc1;
        ymin = ymax = points[0].pc2;
        for (const auto& p : points) {
            xmin = std::min(xmin, p.pc1);
            xmax = std::max(xmax, p.pc1);
            ymin = std::min(ymin, p.pc2);
            ymax = std::max(ymax, p.pc2);
        }
    }
    const double xspan = xmax > xmin ? xmax - xmin : 1.0;
    const double yspan = ymax > ymin ? ymax - ymin : 1.0;

    std::map<std::size_t, int> shape_of;
    for (const auto& p : points) {
        shape_of.emplace(p.resolution, 0);
    }
    int next = 0;
    for (auto& [r, s] : shape_of) {
        s = next++ % 4;
    }

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
        << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<g id=\"markers\">\n";
    char buf[256];
    for (const auto& p : points) {
        const double x = kMargin + (p.pc1 - xmin) / xspan * (kSize - 2 * kMargin);
        const double y = kSize - kMargin - (p.pc2 - ymin) / yspan * (kSize - 2 * kMargin);
        const char* color = p.label ? kPalette[static_cast<std::size_t>(std::abs(*p.label)) % 10] : "#000000";
        switch (shape_of[p.resolution]) {
        case 0:
            std::snprintf(buf, sizeof(buf), "<circle class=\"pt\" cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>", x, y,
                          color);
            break;
        case 1:
            std::snprintf(buf, sizeof(buf),
                          "<rect class=\"pt\" x=\"%.2f\" y=\"%.2f\" width=\"6\" height=\"6\" fill=\"%s\"/>", x - 3,
                          y - 3, color);
            break;
        case 2:
            std::snprintf(buf, sizeof(buf),
                          "<polygon class=\"pt\" points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"%s\"/>", x, y - 4,
                          x - 3.5, y + 3, x + 3.5, y + 3, color);
            break;
        default:
            std::snprintf(buf, sizeof(buf),
                          "<polygon class=\"pt\" points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"%s\"/>", x,
                          y - 4, x + 4, y, x, y + 4, x - 4, y, color);
            break;
        }
        out << buf << '\n';
    }
    out << "</g>\n";
    out << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    double ly = 16.0;
    for (const auto& [r, s] : shape_of) {
        std::snprintf(buf, sizeof(buf), "<text x=\"8\" y=\"%.1f\">r=%zu: %s</text>", ly, r,
                      s == 0 ? "circle" : s == 1 ? "square" : s == 2 ? "triangle" : "diamond");
        out << buf << '\n';
        ly += 14.0;
    }
    out << "</g>\n</svg>\n";
}

} // namespace hypercluster
