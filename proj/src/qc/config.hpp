// config.hpp — flat key-value scenario configuration ("a.b.c = value")
#pragma once

#include <map>
#include <string>

#include "qc/common.hpp"

namespace qc::config {

class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return items_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { items_[key] = value; }
    void set(const std::string& key, double value);
    void set(const std::string& key, int value);

    std::string get(const std::string& key) const;
    std::string get(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int def) const;
    bool get_bool(const std::string& key, bool def) const;

    // overlay: values of `other` win
    void merge(const Config& other);

    const std::map<std::string, std::string>& items() const { return items_; }

private:
    std::map<std::string, std::string> items_;
};

} // namespace qc::config
