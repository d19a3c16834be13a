#include "qc/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qc/csv.hpp"

namespace qc::config {

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}
} // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

Config Config::parse_string(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool any = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw parse_error("config line " + std::to_string(lineno) + ": empty key or value");
        c.items_[key] = value;
        any = true;
    }
    if (!any) throw parse_error("config is empty");
    return c;
}

void Config::set(const std::string& key, double value) { items_[key] = csv::format(value); }
void Config::set(const std::string& key, int value) { items_[key] = std::to_string(value); }

std::string Config::get(const std::string& key) const {
    const auto it = items_.find(key);
    if (it == items_.end()) throw validation_error("missing config key: " + key);
    return it->second;
}

std::string Config::get(const std::string& key, const std::string& def) const {
    const auto it = items_.find(key);
    return it == items_.end() ? def : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string v = get(key);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw validation_error("config key " + key + " is not a number: " + v);
    return x;
}

double Config::get_double(const std::string& key, double def) const {
    return has(key) ? get_double(key) : def;
}

int Config::get_int(const std::string& key) const {
    const double x = get_double(key);
    const int i = int(std::llround(x));
    if (std::abs(x - double(i)) > 1e-9)
        throw validation_error("config key " + key + " is not an integer");
    return i;
}

int Config::get_int(const std::string& key, int def) const {
    return has(key) ? get_int(key) : def;
}

bool Config::get_bool(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const std::string v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw validation_error("config key " + key + " is not a boolean: " + v);
}

void Config::merge(const Config& other) {
    for (const auto& [k, v] : other.items_) items_[k] = v;
}

} // namespace qc::config
