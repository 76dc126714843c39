#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bohmlab/wavefunction.hpp"

namespace bohmlab {

/// Plain-text `key = value` configuration. Lines starting with '#' (or
/// blank) are ignored; keys are dotted paths. Unknown syntax raises
/// ConfigError naming the line; typed getters raise ConfigError naming
/// the key.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_text(const std::string& text, const std::string& origin = "<text>");

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key) const;
    long get_long(const std::string& key, long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    /// Comma/space separated list of reals.
    std::vector<double> get_vector(const std::string& key) const;

    void set(const std::string& key, const std::string& value);

    const std::map<std::string, std::string>& entries() const { return entries_; }
    /// Canonical text (sorted key = value lines); hashed into manifests.
    std::string canonical_text() const;

private:
    std::map<std::string, std::string> entries_;
    std::map<std::string, int> lines_;
    std::string origin_ = "<empty>";

    const std::string& raw(const std::string& key) const;
};

/// Wave-function schema:
///   statistics = fermion | boson | none
///   evolution  = free | harmonic      (omega = <w> for harmonic)
///   dimension  = d, hbar = ..., mass = ...
///   packet.<i>.center / momentum = d comma-separated reals
///   packet.<i>.width = positive real
/// Packets are indexed 0..N-1 with no gaps.
std::shared_ptr<PacketWaveFunction> wavefunction_from_config(const KeyValueConfig& cfg);

/// The same schema rendered as text (for `list` output and docs).
std::string wavefunction_schema_help();

}  // namespace bohmlab
