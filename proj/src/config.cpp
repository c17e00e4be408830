#include "normdyn/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "normdyn/errors.hpp"

namespace normdyn {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty())
        throw InvalidParameter("config key '" + key + "': '" + t + "' is not a number");
    return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
    KeyValueConfig cfg;
    cfg.source_ = source;
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
            std::ostringstream os;
            os << source << ":" << lineno << ": expected 'key = value'";
            throw InvalidParameter(os.str());
        }
        std::string key = trim(line.substr(0, eq));
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream os;
            os << source << ":" << lineno << ": empty key";
            throw InvalidParameter(os.str());
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    return parse(in, path);
}

std::optional<std::string> KeyValueConfig::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
    const auto v = get_string(key);
    if (!v) return std::nullopt;
    return parse_number(*v, key);
}

std::optional<long long> KeyValueConfig::get_integer(const std::string& key) const {
    const auto v = get_string(key);
    if (!v) return std::nullopt;
    const std::string t = trim(*v);
    long long value = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty())
        throw InvalidParameter("config key '" + key + "': '" + t + "' is not an integer");
    return value;
}

std::optional<std::vector<double>> KeyValueConfig::get_list(const std::string& key) const {
    const auto v = get_string(key);
    if (!v) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_number(item, key));
    }
    return out;
}

void KeyValueConfig::apply(BaselineParams& p) const {
    if (auto v = get_double("L")) p.learning_benefit = *v;
    if (auto v = get_double("C")) p.effort_cost = *v;
    if (auto v = get_double("S")) p.shortterm_advantage = *v;
    if (auto v = get_double("delta")) p.legitimacy_cost = *v;
}

void KeyValueConfig::apply(ExtendedParams& p) const {
    if (auto v = get_double("a")) p.a = *v;
    if (auto v = get_double("b")) p.b = *v;
    if (auto v = get_double("c")) p.c = *v;
    if (auto v = get_double("d")) p.d = *v;
    if (auto v = get_double("delta")) p.legitimacy_cost = *v;
    if (auto v = get_double("r")) p.reflection_reward = *v;
    if (auto v = get_double("kappa")) p.reflection_effort = *v;
    if (auto v = get_double("sigma")) p.superficial_factor = *v;
    if (auto v = get_double("tau")) p.misconduct_cost = *v;
}

}  // namespace normdyn
