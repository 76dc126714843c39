#include "bohmlab/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bohmlab/errors.hpp"

namespace bohmlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double_or_throw(const std::string& text, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-numeric value '" + text + "'");
    }
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

KeyValueConfig KeyValueConfig::parse_text(const std::string& text, const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        cfg.entries_[key] = value;
        cfg.lines_[key] = lineno;
    }
    return cfg;
}

const std::string& KeyValueConfig::raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError("config (" + origin_ + "): missing required key '" + key + "'");
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) const { return raw(key); }

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? entries_.at(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
    return parse_double_or_throw(raw(key), key);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long KeyValueConfig::get_long(const std::string& key) const {
    const double v = get_double(key);
    const long l = static_cast<long>(v);
    if (static_cast<double>(l) != v)
        throw ConfigError("config: key '" + key + "' must be an integer");
    return l;
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
    return has(key) ? get_long(key) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& text = entries_.at(key);
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError("config: key '" + key + "' must be an unsigned integer");
    return v;
}

std::vector<double> KeyValueConfig::get_vector(const std::string& key) const {
    std::string text = raw(key);
    for (auto& c : text)
        if (c == ',') c = ' ';
    std::istringstream in(text);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_double_or_throw(tok, key));
    if (out.empty()) throw ConfigError("config: key '" + key + "' has an empty vector value");
    return out;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) { entries_[key] = value; }

std::string KeyValueConfig::canonical_text() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

std::shared_ptr<PacketWaveFunction> wavefunction_from_config(const KeyValueConfig& cfg) {
    const std::string stats_name = cfg.get_string("statistics", "none");
    Statistics stats;
    if (stats_name == "fermion")
        stats = Statistics::fermion;
    else if (stats_name == "boson")
        stats = Statistics::boson;
    else if (stats_name == "none")
        stats = Statistics::none;
    else
        throw ConfigError("config: 'statistics' must be fermion | boson | none, got '" + stats_name + "'");

    const std::string evo_name = cfg.get_string("evolution", "free");
    Evolution evo;
    double omega = 0.0;
    if (evo_name == "free") {
        evo = Evolution::free;
    } else if (evo_name == "harmonic") {
        evo = Evolution::harmonic;
        omega = cfg.get_double("omega");
        if (!(omega > 0.0)) throw ConfigError("config: 'omega' must be positive");
    } else {
        throw ConfigError("config: 'evolution' must be free | harmonic, got '" + evo_name + "'");
    }

    const int dim = static_cast<int>(cfg.get_long("dimension", 1));
    std::vector<GaussianPacket> packets;
    for (int i = 0;; ++i) {
        const std::string base = "packet." + std::to_string(i) + ".";
        if (!cfg.has(base + "center")) break;
        GaussianPacket p;
        p.center = cfg.get_vector(base + "center");
        if (!cfg.has(base + "momentum"))
            throw ConfigError("config: missing required key '" + base + "momentum'");
        p.momentum = cfg.get_vector(base + "momentum");
        if (!cfg.has(base + "width"))
            throw ConfigError("config: missing required key '" + base + "width'");
        p.width = cfg.get_double(base + "width");
        p.evolution = evo;
        p.omega = omega;
        if (static_cast<int>(p.center.size()) != dim || static_cast<int>(p.momentum.size()) != dim)
            throw ConfigError("config: '" + base + "center/momentum' must have 'dimension' = " +
                              std::to_string(dim) + " components");
        packets.push_back(std::move(p));
    }
    if (packets.empty()) throw ConfigError("config: no packets (need packet.0.center, ...)");

    auto params = ModelParams::natural(static_cast<int>(packets.size()), dim,
                                       cfg.get_double("mass", 1.0), cfg.get_double("hbar", 1.0));
    try {
        return std::make_shared<PacketWaveFunction>(std::move(packets), stats, std::move(params));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: invalid wave function: ") + e.what());
    }
}

std::string wavefunction_schema_help() {
    return
        "statistics = fermion | boson | none\n"
        "evolution  = free | harmonic   (harmonic also needs: omega = <positive real>)\n"
        "dimension  = <1|2|3>           (default 1)\n"
        "hbar = <positive real>         (default 1)\n"
        "mass = <positive real>         (default 1, shared by identical particles)\n"
        "packet.<i>.center   = <d comma-separated reals>   (i = 0..N-1, no gaps)\n"
        "packet.<i>.momentum = <d comma-separated reals>\n"
        "packet.<i>.width    = <positive real>\n";
}

}  // namespace bohmlab
