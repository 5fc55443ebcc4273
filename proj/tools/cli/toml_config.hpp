#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace hypercluster::cli {

/// CLI11 config reader backed by a real TOML parser. Tables map to
/// subcommands, so `[train]\nepochs = 5` sets `train --epochs 5`.
class TomlConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                          std::string prefix) const override;
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

/// Effective values of every option of `sub` (flags, config file and
/// defaults) as a TOML document with one `[name]` table. The result loads
/// back through TomlConfig.
std::string snapshot(const CLI::App& sub, const std::vector<std::string>& skip);

} // namespace hypercluster::cli
