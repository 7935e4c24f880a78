#include "run_manifest.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tvwf/errors.hpp"
#include "tvwf/version.hpp"

namespace tvwf::cli {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void bad_key(const std::string& key) {
    throw Error("manifest: missing key '" + key + "'");
}

}  // namespace

void RunManifest::set(const std::string& key, std::string value) {
    params[key] = std::move(value);
}

void RunManifest::set_double(const std::string& key, double value) {
    params[key] = fmt_double(value);
}

void RunManifest::set_int(const std::string& key, long long value) {
    params[key] = std::to_string(value);
}

void RunManifest::set_uint(const std::string& key, unsigned long long value) {
    params[key] = std::to_string(value);
}

void RunManifest::set_bool(const std::string& key, bool value) {
    params[key] = value ? "1" : "0";
}

bool RunManifest::has(const std::string& key) const { return params.count(key) != 0; }

const std::string& RunManifest::get(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) bad_key(key);
    return it->second;
}

double RunManifest::get_double(const std::string& key) const {
    const std::string& s = get(key);
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw Error("manifest: key '" + key + "' is not a number: '" + s + "'");
    return v;
}

long long RunManifest::get_int(const std::string& key) const {
    const std::string& s = get(key);
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw Error("manifest: key '" + key + "' is not an integer: '" + s + "'");
    return v;
}

unsigned long long RunManifest::get_uint(const std::string& key) const {
    const std::string& s = get(key);
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw Error("manifest: key '" + key + "' is not an unsigned integer: '" + s + "'");
    return v;
}

bool RunManifest::get_bool(const std::string& key) const {
    const std::string& s = get(key);
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw Error("manifest: key '" + key + "' is not a boolean: '" + s + "'");
}

void RunManifest::write(const std::string& path) const {
    std::ostringstream out;
    out << "command=" << command << "\n";
    out << "version=" << TVWF_VERSION << "\n";
    for (const auto& [k, v] : params) {
        if (k == "command" || k == "version") continue;
        out << k << "=" << v << "\n";
    }
    if (duration_seconds >= 0.0)
        out << "duration_seconds=" << fmt_double(duration_seconds) << "\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << out.str();
    f.flush();
    if (!f) throw IoError("write failed for '" + path + "'");
}

RunManifest RunManifest::read(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");

    RunManifest m;
    std::string line;
    std::size_t offset = 0;
    while (std::getline(f, line)) {
        const std::size_t line_start = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("manifest " + path + ": expected key=value, got '" + line + "'",
                             line_start);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (key == "command")
            m.command = value;
        else if (key == "duration_seconds")
            m.duration_seconds = std::strtod(value.c_str(), nullptr);
        else
            m.params[key] = value;
    }
    if (m.command.empty()) throw ParseError("manifest " + path + ": no command line", 0);
    return m;
}

}  // namespace tvwf::cli
