/**
 * @file io.hpp
 * @brief CSV and JSON writers for fields, branches, events, curves and run
 *        manifests. Floating output uses 17 significant digits.
 */
#pragma once

#include "ericksen/branches.hpp"
#include "ericksen/two_mode.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace ericksen::io {

using json = nlohmann::ordered_json;

inline std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// FNV-1a, printed as 16 hex digits.
inline std::string hash_key(const std::string& s)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline json field_json(const SineField& f, const ModelParams& p)
{
    json j;
    j["N"] = f.size();
    j["alpha"] = p.alpha;
    j["gamma"] = p.gamma;
    j["coeffs"] = std::vector<double>(f.coeffs.data(), f.coeffs.data() + f.size());
    return j;
}

inline std::pair<SineField, ModelParams> field_from_json(const json& j)
{
    require(j.contains("coeffs") && j.contains("alpha") && j.contains("gamma"), ErrorKind::InvalidArgument,
            "field JSON needs coeffs, alpha and gamma");
    const auto c = j.at("coeffs").get<std::vector<double>>();
    require(!c.empty(), ErrorKind::InvalidArgument, "empty coefficient array");
    require(!j.contains("N") || j.at("N").get<int>() == static_cast<int>(c.size()), ErrorKind::InvalidArgument,
            "N does not match the coefficient count");
    SineField f(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
    ModelParams p{j.at("alpha").get<double>(), j.at("gamma").get<double>()};
    p.validate();
    return {f, p};
}

inline void write_grid_csv(std::ostream& os, const GridSamples& g)
{
    os << "x,u,u_x,u_xx,u_xxx\n";
    for (std::size_t i = 0; i < g.x.size(); ++i)
        os << num(g.x[i]) << ',' << num(g.u[i]) << ',' << num(g.ux[i]) << ',' << num(g.uxx[i]) << ','
           << num(g.uxxx[i]) << '\n';
}

inline void write_branch_csv(std::ostream& os, const Branch& b, int n_modes)
{
    os << "step,alpha,gamma,inv_gamma,h3_norm,energy,morse_index,internal_zeros,event";
    for (int k = 1; k <= n_modes; ++k) os << ",a_" << k;
    os << '\n';
    for (std::size_t i = 0; i < b.points.size(); ++i) {
        const BranchPoint& p = b.points[i];
        const Diagnostics& d = p.diagnostics;
        os << i << ',' << num(p.params.alpha) << ',' << num(p.params.gamma) << ',' << num(p.params.inv_gamma()) << ','
           << num(d.h3_norm) << ',' << num(d.energy) << ',' << d.morse_index << ',' << d.internal_zeros << ','
           << cont::to_string(p.event);
        for (int k = 1; k <= n_modes; ++k) os << ',' << num(k <= p.field.size() ? p.field[k] : 0.0);
        os << '\n';
    }
}

inline json event_json(const BranchPoint& p, int leading = 3)
{
    json j;
    j["type"] = cont::to_string(p.event);
    j["alpha"] = p.params.alpha;
    j["inv_gamma"] = p.params.inv_gamma();
    json modes = json::array();
    if (p.null_vector.size() > 0) {
        std::vector<int> idx(p.null_vector.size());
        for (int i = 0; i < p.null_vector.size(); ++i) idx[i] = i + 1;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return std::abs(p.null_vector[a]) > std::abs(p.null_vector[b]); });
        for (int i = 0; i < std::min<int>(leading, static_cast<int>(idx.size())); ++i)
            modes.push_back({{"mode", idx[i]}, {"coeff", p.null_vector[idx[i]]}});
    }
    j["null_vector_leading_modes"] = modes;
    return j;
}

inline json events_json(const Branch& b)
{
    json a = json::array();
    for (std::size_t i : b.event_indices()) a.push_back(event_json(b.points[i]));
    return a;
}

inline void write_loop_csv(std::ostream& os, const two_mode::LoopBranch& b, double alpha)
{
    os << "step,a1,a3,alpha,gamma,inv_gamma,event\n";
    for (std::size_t i = 0; i < b.path.points.size(); ++i) {
        const auto& p = b.path.points[i];
        os << i << ',' << num(p.x[0]) << ',' << num(p.x[1]) << ',' << num(alpha) << ',' << num(1.0 / p.lambda) << ','
           << num(p.lambda) << ',' << cont::to_string(p.event) << '\n';
    }
}

/// Polyline in (alpha, 1/gamma).
template <class Points>
void write_curve_csv(std::ostream& os, const Points& pts)
{
    os << "alpha,inv_gamma\n";
    for (const auto& p : pts) os << num(p.alpha) << ',' << num(p.inv_gamma) << '\n';
}

struct RunManifest {
    std::string command;
    json config = json::object();
    std::string version = toolkit_version;
    std::string input_hash;
    std::vector<std::string> outputs;
    double wall_time = 0.0;
    bool partial = false;
    std::vector<std::string> warnings;

    json to_json() const
    {
        json j;
        j["command"] = command;
        j["config"] = config;
        j["version"] = version;
        j["input_hash"] = input_hash;
        j["outputs"] = outputs;
        j["wall_time_s"] = wall_time;
        j["partial"] = partial;
        j["warnings"] = warnings;
        return j;
    }
};

/// Writes files under one output directory and records them for the manifest.
class OutputDir {
public:
    OutputDir(std::filesystem::path dir, std::string prefix) : dir_(std::move(dir)), prefix_(std::move(prefix))
    {
        std::filesystem::create_directories(dir_);
    }

    template <class Fn>
    void write(const std::string& suffix, Fn&& fn)
    {
        const std::string name = prefix_ + "-" + suffix;
        std::ofstream os(dir_ / name, std::ios::binary);
        require(static_cast<bool>(os), ErrorKind::InvalidArgument, "cannot write " + (dir_ / name).string());
        fn(os);
        files_.push_back(name);
    }

    void write_json(const std::string& suffix, const json& j)
    {
        write(suffix, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    }

    /// Manifest goes through a temporary file so its presence marks completion.
    void finish(RunManifest m) const
    {
        m.outputs = files_;
        const auto tmp = dir_ / (prefix_ + "-manifest.json.tmp");
        {
            std::ofstream os(tmp, std::ios::binary);
            require(static_cast<bool>(os), ErrorKind::InvalidArgument, "cannot write manifest");
            os << m.to_json().dump(2) << '\n';
        }
        std::filesystem::rename(tmp, dir_ / (prefix_ + "-manifest.json"));
    }

    const std::vector<std::string>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::string prefix_;
    std::vector<std::string> files_;
};

} // namespace ericksen::io
