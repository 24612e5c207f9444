#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "c2fapv/common.hpp"
#include "c2fapv/volume.hpp"

namespace c2f {

static_assert(std::endian::native == std::endian::little,
              "raw payloads are little-endian; big-endian hosts unsupported");

namespace detail {

inline std::filesystem::path sidecar_path(const std::filesystem::path& raw_path) {
    if (raw_path.extension() != ".raw")
        throw FormatError("payload path must end in .raw: " + raw_path.string());
    std::filesystem::path p = raw_path;
    p.replace_extension(".json");
    return p;
}

inline nlohmann::json read_sidecar(const std::filesystem::path& raw_path) {
    auto side = sidecar_path(raw_path);
    std::ifstream in(side);
    if (!in) throw FormatError("missing sidecar: " + side.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("corrupt sidecar " + side.string() + ": " + e.what());
    }
    return j;
}

inline std::vector<char> read_payload(const std::filesystem::path& raw_path) {
    std::ifstream in(raw_path, std::ios::binary);
    if (!in) throw FormatError("missing payload: " + raw_path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    return bytes;
}

inline std::array<int, 3> parse_dims(const nlohmann::json& j, const std::string& where) {
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 3)
        throw FormatError("sidecar missing dims: " + where);
    std::array<int, 3> d{};
    for (int i = 0; i < 3; ++i) {
        d[std::size_t(i)] = j["dims"][std::size_t(i)].get<int>();
        if (d[std::size_t(i)] < 1) throw FormatError("sidecar dims must be >= 1: " + where);
    }
    return d;
}

}  // namespace detail

// <sample>.vol.raw holds little-endian float32, x-fastest; <sample>.vol.json
// is the sidecar {dims, spacing, dtype, order, id}.
inline void save_volume(const CTVolume& v, const std::filesystem::path& raw_path) {
    v.validate();
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["dims"] = {v.W(), v.H(), v.L()};
    j["spacing"] = {v.spacing[0], v.spacing[1], v.spacing[2]};
    j["dtype"] = "float32";
    j["order"] = "x-fastest";
    j["id"] = v.id;
    std::ofstream side(detail::sidecar_path(raw_path));
    if (!side) throw FormatError("cannot write sidecar for " + raw_path.string());
    side << j.dump(2) << "\n";

    std::ofstream out(raw_path, std::ios::binary);
    if (!out) throw FormatError("cannot write payload " + raw_path.string());
    out.write(reinterpret_cast<const char*>(v.grid.data.data()),
              std::streamsize(v.grid.data.size() * sizeof(float)));
}

inline CTVolume load_volume(const std::filesystem::path& raw_path) {
    nlohmann::json j = detail::read_sidecar(raw_path);
    auto dims = detail::parse_dims(j, raw_path.string());
    std::string dtype = j.value("dtype", "");
    if (dtype != "float32")
        throw FormatError("volume sidecar dtype must be float32: " + raw_path.string());
    if (j.value("order", "") != "x-fastest")
        throw FormatError("unsupported payload order in " + raw_path.string());

    auto bytes = detail::read_payload(raw_path);
    const std::size_t expect = std::size_t(dims[0]) * dims[1] * dims[2] * sizeof(float);
    if (bytes.size() != expect)
        throw FormatError("payload size mismatch for " + raw_path.string() + ": got " +
                          std::to_string(bytes.size()) + " bytes, sidecar implies " +
                          std::to_string(expect));

    CTVolume v(dims[0], dims[1], dims[2]);
    if (j.contains("spacing")) {
        for (int i = 0; i < 3; ++i) v.spacing[std::size_t(i)] = j["spacing"][std::size_t(i)].get<double>();
    }
    v.id = j.value("id", "");
    std::memcpy(v.grid.data.data(), bytes.data(), expect);
    v.validate();
    return v;
}

// Labels: unsigned 8-bit payload, same sidecar scheme plus num_classes.
inline void save_labels(const LabelMap& m, const std::filesystem::path& raw_path) {
    m.validate();
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["dims"] = {m.W(), m.H(), m.L()};
    j["dtype"] = "uint8";
    j["order"] = "x-fastest";
    j["num_classes"] = m.num_classes;
    std::ofstream side(detail::sidecar_path(raw_path));
    if (!side) throw FormatError("cannot write sidecar for " + raw_path.string());
    side << j.dump(2) << "\n";

    std::ofstream out(raw_path, std::ios::binary);
    if (!out) throw FormatError("cannot write payload " + raw_path.string());
    out.write(reinterpret_cast<const char*>(m.grid.data.data()),
              std::streamsize(m.grid.data.size()));
}

inline LabelMap load_labels(const std::filesystem::path& raw_path) {
    nlohmann::json j = detail::read_sidecar(raw_path);
    auto dims = detail::parse_dims(j, raw_path.string());
    if (j.value("dtype", "") != "uint8")
        throw FormatError("label sidecar dtype must be uint8: " + raw_path.string());

    auto bytes = detail::read_payload(raw_path);
    const std::size_t expect = std::size_t(dims[0]) * dims[1] * dims[2];
    if (bytes.size() != expect)
        throw FormatError("payload size mismatch for " + raw_path.string() + ": got " +
                          std::to_string(bytes.size()) + " bytes, sidecar implies " +
                          std::to_string(expect));

    LabelMap m(dims[0], dims[1], dims[2], j.value("num_classes", 0));
    std::memcpy(m.grid.data.data(), bytes.data(), expect);
    m.validate();
    return m;
}

// Dataset manifest: JSON list of {id, volume_path, label_path, split}.
// Relative paths resolve against the manifest's directory.
struct ManifestEntry {
    std::string id;
    std::string volume_path;
    std::string label_path;
    std::string split;  // "train" or "test"
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::filesystem::path base_dir;

    std::vector<ManifestEntry> split(const std::string& which) const {
        std::vector<ManifestEntry> out;
        for (const auto& e : entries)
            if (e.split == which) out.push_back(e);
        return out;
    }

    std::filesystem::path resolve(const std::string& rel) const {
        std::filesystem::path p(rel);
        return p.is_absolute() ? p : base_dir / p;
    }
};

inline void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : m.entries)
        j.push_back({{"id", e.id},
                     {"volume_path", e.volume_path},
                     {"label_path", e.label_path},
                     {"split", e.split}});
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write manifest " + path.string());
    out << j.dump(2) << "\n";
}

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("missing manifest: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("corrupt manifest " + path.string() + ": " + e.what());
    }
    if (!j.is_array()) throw FormatError("manifest must be a JSON array: " + path.string());
    DatasetManifest m;
    m.base_dir = path.parent_path();
    for (const auto& je : j) {
        ManifestEntry e;
        e.id = je.at("id").get<std::string>();
        e.volume_path = je.at("volume_path").get<std::string>();
        e.label_path = je.at("label_path").get<std::string>();
        e.split = je.at("split").get<std::string>();
        m.entries.push_back(std::move(e));
    }
    return m;
}

}  // namespace c2f
