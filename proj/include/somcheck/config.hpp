#pragma once

#include <filesystem>

#include "somcheck/filter.hpp"
#include "somcheck/layout.hpp"
#include "somcheck/reason.hpp"
#include "somcheck/reflow.hpp"

namespace somcheck {

/// All tunables in one place; the reflow truth labeller and the geometric
/// oracle read the same `oracle` section by construction.
struct Config {
    FilterConfig filter;
    LayoutConfig layout;
    OracleConfig oracle;
    ReflowConfig reflow;
};

/// JSON document with optional sections `filter`, `layout`, `oracle`,
/// `reflow`; absent keys keep their defaults.
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& raw);

}  // namespace somcheck
