#include "bohmlab/csvio.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bohmlab {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

std::string configuration_header(int particles, int dim) {
    static constexpr char axes[] = {'x', 'y', 'z'};
    if (dim > 3) throw std::invalid_argument("configuration_header: d <= 3");
    std::string h;
    for (int i = 0; i < particles; ++i)
        for (int a = 0; a < dim; ++a) {
            if (!h.empty()) h += ',';
            h += 'p' + std::to_string(i) + '_' + axes[a];
        }
    return h;
}

namespace {

std::string row_of(const std::vector<double>& coords) {
    std::string r;
    for (double v : coords) {
        if (!r.empty()) r += ',';
        r += format_double(v);
    }
    return r;
}

}  // namespace

std::string configuration_row(const UnorderedConfiguration& q) {
    return row_of(q.canonical_lift().coords);
}

std::string configuration_row(const OrderedConfiguration& q) { return row_of(q.coords); }

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace bohmlab
