#include <vdw/config.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace vdw {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last) {
        throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    }
    return x;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
    Config c;
    c.source_ = source;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        c.values_[key] = trim(line.substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse(in, path);
}

void Config::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::raw(const std::string& key) const {
    used_.insert(key);
    return values_.at(key);
}

std::string Config::get_string(const std::string& key, std::optional<std::string> def) const {
    if (has(key)) return raw(key);
    if (def) return *def;
    throw ConfigError("missing key '" + key + "' in " + source_);
}

double Config::get_double(const std::string& key, std::optional<double> def) const {
    if (has(key)) return to_double(key, raw(key));
    if (def) return *def;
    throw ConfigError("missing key '" + key + "' in " + source_);
}

long Config::get_int(const std::string& key, std::optional<long> def) const {
    if (!has(key)) {
        if (def) return *def;
        throw ConfigError("missing key '" + key + "' in " + source_);
    }
    const std::string v = raw(key);
    long x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
    }
    return x;
}

bool Config::get_bool(const std::string& key, std::optional<bool> def) const {
    if (!has(key)) {
        if (def) return *def;
        throw ConfigError("missing key '" + key + "' in " + source_);
    }
    std::string v = raw(key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> Config::get_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split(get_string(key), ',')) {
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    return out;
}

std::vector<std::vector<double>> Config::get_groups(const std::string& key, std::size_t width) const {
    std::vector<std::vector<double>> out;
    for (const auto& group : split(get_string(key), ';')) {
        if (group.empty()) continue;
        std::vector<double> g;
        for (const auto& item : split(group, ',')) g.push_back(to_double(key, item));
        if (g.size() != width) {
            throw ConfigError("key '" + key + "': group '" + group + "' needs " +
                              std::to_string(width) + " values");
        }
        out.push_back(std::move(g));
    }
    return out;
}

EosParams Config::eos() const {
    EosParams p;
    p.a = get_double("a", p.a);
    p.b = get_double("b", p.b);
    p.R = get_double("R", p.R);
    p.Cv = get_double("Cv", p.Cv);
    p.s0 = get_double("s0", p.s0);
    try {
        p.validate();
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
    }
    return p;
}

void Config::check_all_used() const {
    std::string unknown;
    for (const auto& [k, v] : values_) {
        if (!used_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
    }
    if (!unknown.empty()) throw ConfigError("unknown keys in " + source_ + ": " + unknown);
}

}  // namespace vdw
