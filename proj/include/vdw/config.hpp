#pragma once

// Flat "key = value" configuration files. '#' starts a comment. Lists are comma
// separated; groups of lists are separated by ';'.

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <vdw/errors.hpp>
#include <vdw/thermo.hpp>

namespace vdw {

class Config {
public:
    static Config parse(std::istream& in, const std::string& source = "<input>");
    static Config load(const std::string& path);

    // "key=value" override from the command line.
    void set(const std::string& assignment);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, std::optional<std::string> def = {}) const;
    double get_double(const std::string& key, std::optional<double> def = {}) const;
    long get_int(const std::string& key, std::optional<long> def = {}) const;
    bool get_bool(const std::string& key, std::optional<bool> def = {}) const;
    std::vector<double> get_list(const std::string& key) const;
    // "1,2;3,4" -> {{1,2},{3,4}}; every group must have `width` entries.
    std::vector<std::vector<double>> get_groups(const std::string& key, std::size_t width) const;

    // Reads a, b, R, Cv, s0 with the reduced defaults.
    EosParams eos() const;

    // Throws ConfigError naming keys that were never read.
    void check_all_used() const;

private:
    std::string raw(const std::string& key) const;
    std::map<std::string, std::string> values_;
    std::string source_;
    mutable std::set<std::string> used_;
};

}  // namespace vdw
