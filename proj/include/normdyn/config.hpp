#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normdyn/game_model.hpp"

namespace normdyn {

// Flat `key = value` document. Blank lines and text after '#' are ignored;
// keys may carry the leading "--" of the matching command-line flag. List
// values are comma separated. Later assignments to a key replace earlier ones.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in, const std::string& source = "<config>");
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& entries() const noexcept { return values_; }

    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<long long> get_integer(const std::string& key) const;
    std::optional<std::vector<double>> get_list(const std::string& key) const;

    // Overwrites the fields whose keys (L, C, S, delta / a, b, c, d, delta, r,
    // kappa, sigma, tau) are present.
    void apply(BaselineParams& params) const;
    void apply(ExtendedParams& params) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

private:
    std::map<std::string, std::string> values_;
    std::string source_;
};

}  // namespace normdyn
