// Flat key=value record of a run: the command, every resolved parameter,
// and the files it touched. Written next to each command's outputs; the
// rerun command parses one to reproduce the run.
#pragma once

#include <map>
#include <string>

namespace tvwf::cli {

struct RunManifest {
    std::string command;
    std::map<std::string, std::string> params;  // sorted -> deterministic file
    double duration_seconds = -1.0;             // written last when >= 0; never rerun input

    void set(const std::string& key, std::string value);
    void set_double(const std::string& key, double value);  // %.17g, round-trips
    void set_int(const std::string& key, long long value);
    void set_uint(const std::string& key, unsigned long long value);
    void set_bool(const std::string& key, bool value);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;  // throws Error if absent
    double get_double(const std::string& key) const;
    long long get_int(const std::string& key) const;
    unsigned long long get_uint(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    void write(const std::string& path) const;
    static RunManifest read(const std::string& path);
};

}  // namespace tvwf::cli
