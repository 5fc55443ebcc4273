#include "toml_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <iterator>
#include <sstream>

#include <toml.hpp>

#include "hypercluster/error.hpp"

namespace hypercluster::cli {
namespace {

std::string scalar_text(const toml::node& node, const std::string& key)
{
    if (auto v = node.value_exact<std::string>()) {
        return *v;
    }
    if (auto v = node.value_exact<std::int64_t>()) {
        return std::to_string(*v);
    }
    if (auto v = node.value_exact<double>()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", *v);
        return buf;
    }
    if (auto v = node.value_exact<bool>()) {
        return *v ? "true" : "false";
    }
    throw FormatError("config: unsupported value type for '" + key + "'");
}

void collect(const toml::table& table, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items)
{
    for (auto&& [k, node] : table) {
        const std::string key(k.str());
        if (const auto* sub = node.as_table()) {
            auto next = parents;
            next.push_back(key);
            collect(*sub, next, items);
            continue;
        }
        CLI::ConfigItem item;
        item.parents = parents;
        item.name = key;
        if (const auto* arr = node.as_array()) {
            for (auto&& el : *arr) {
                item.inputs.push_back(scalar_text(el, key));
            }
        } else {
            item.inputs.push_back(scalar_text(node, key));
        }
        items.push_back(std::move(item));
    }
}

template <typename T>
bool parse_full(const std::string& s, T& out)
{
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

void push_typed(toml::array& arr, const std::string& s)
{
    std::int64_t i = 0;
    double d = 0.0;
    if (s == "true" || s == "false") {
        arr.push_back(s == "true");
    } else if (parse_full(s, i)) {
        arr.push_back(i);
    } else if (parse_full(s, d)) {
        arr.push_back(d);
    } else {
        arr.push_back(s);
    }
}

// "[14,28,56]" -> {"14", "28", "56"}; CLI11 renders vector defaults this way.
std::vector<std::string> split_default(std::string s)
{
    if (s.size() >= 2 && s.front() == '[' && s.back() == ']') {
        s = s.substr(1, s.size() - 2);
    }
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        out.push_back(part);
    }
    return out;
}

} // namespace

std::vector<CLI::ConfigItem> TomlConfig::from_config(std::istream& input) const
{
    const std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "config: " << e.description() << " at line " << e.source().begin.line;
        throw FormatError(msg.str());
    }
    std::vector<CLI::ConfigItem> items;
    collect(root, {}, items);
    return items;
}

std::string TomlConfig::to_config(const CLI::App* app, bool, bool, std::string) const
{
    return snapshot(*app, {"help", "config"});
}

std::string snapshot(const CLI::App& sub, const std::vector<std::string>& skip)
{
    toml::table section;
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || std::ranges::find(skip, name) != skip.end()) {
            continue;
        }
        std::vector<std::string> values = opt->count() > 0 ? opt->results() : split_default(opt->get_default_str());
        if (opt->get_type_size_max() == 0) {
            values = {opt->count() > 0 ? "true" : "false"};
        }
        toml::array arr;
        for (const auto& v : values) {
            push_typed(arr, v);
        }
        if (opt->get_items_expected_max() > 1) {
            section.insert(name, std::move(arr));
        } else if (!arr.empty()) {
            section.insert(name, *arr.get(0));
        }
    }
    toml::table root;
    root.insert(sub.get_name(), std::move(section));
    std::ostringstream out;
    out << root << '\n';
    return out.str();
}

} // namespace hypercluster::cli
