#ifndef PRIORCI_IO_HPP
#define PRIORCI_IO_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "priorci/special_functions.hpp"
#include "priorci/spline.hpp"

namespace priorci {

struct IoError : std::runtime_error {
    IoError(const std::string& what, const std::string& file)
        : std::runtime_error(what + ": " + file), path(file) {}
    std::string path;
};

/// Structurally invalid artifact (missing keys, inconsistent metadata).
/// Shape violations inside the payload surface as SplineShapeError instead.
struct ArtifactError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Compact SHA-1, sufficient for content addressing of small artifacts.
class Sha1 {
public:
    void update(const unsigned char* data, std::size_t len) {
        total_ += len;
        while (len > 0) {
            const std::size_t take = std::min<std::size_t>(64 - fill_, len);
            for (std::size_t i = 0; i < take; ++i) block_[fill_ + i] = data[i];
            fill_ += take;
            data += take;
            len -= take;
            if (fill_ == 64) {
                process();
                fill_ = 0;
            }
        }
    }

    std::string hex_digest() {
        const std::uint64_t bits = total_ * 8;
        const unsigned char one = 0x80;
        update(&one, 1);
        const unsigned char zero = 0x00;
        while (fill_ != 56) update(&zero, 1);
        unsigned char len_be[8];
        for (int i = 0; i < 8; ++i) {
            len_be[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        }
        // The length bytes complete the final block without re-counting.
        for (int i = 0; i < 8; ++i) block_[fill_ + static_cast<std::size_t>(i)] = len_be[i];
        process();
        char out[41];
        for (int i = 0; i < 5; ++i) {
            std::snprintf(out + 8 * i, 9, "%08x", h_[i]);
        }
        return std::string(out, 40);
    }

private:
    void process() {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i) {
            w[i] = (std::uint32_t(block_[4 * i]) << 24) | (std::uint32_t(block_[4 * i + 1]) << 16) |
                   (std::uint32_t(block_[4 * i + 2]) << 8) | std::uint32_t(block_[4 * i + 3]);
        }
        for (int i = 16; i < 80; ++i) {
            w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        }
        std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3], e = h_[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t tmp = rotl(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rotl(b, 30);
            b = a;
            a = tmp;
        }
        h_[0] += a;
        h_[1] += b;
        h_[2] += c;
        h_[3] += d;
        h_[4] += e;
    }

    static std::uint32_t rotl(std::uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }

    std::uint32_t h_[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
    unsigned char block_[64] = {};
    std::size_t fill_ = 0;
    std::uint64_t total_ = 0;
};

}  // namespace detail

inline std::string sha1_hex(std::string_view data) {
    detail::Sha1 h;
    h.update(reinterpret_cast<const unsigned char*>(data.data()), data.size());
    return h.hex_digest();
}

/// Content hash in the style of git: sha1 of "blob <size>\0<content>".
inline std::string git_blob_hash(std::string_view content) {
    detail::Sha1 h;
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    h.update(reinterpret_cast<const unsigned char*>(header.data()), header.size());
    h.update(reinterpret_cast<const unsigned char*>(content.data()), content.size());
    return h.hex_digest();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed", path);
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing", path);
    out << content;
    out.flush();
    if (!out.good()) throw IoError("write failed", path);
}

/// Provenance record attached to every output file; deliberately excludes
/// timestamps so identical runs produce identical bytes.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, const std::string& value) {
        entries.emplace_back(key, value);
    }
    void add(const std::string& key, double value) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        entries.emplace_back(key, buf);
    }
    void add(const std::string& key, long long value) {
        entries.emplace_back(key, std::to_string(value));
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        for (const auto& [k, v] : entries) j[k] = v;
        return j;
    }

    /// '#'-prefixed header lines for CSV outputs.
    std::string comment_block() const {
        std::string out = "# command: " + command + "\n";
        for (const auto& [k, v] : entries) out += "# " + k + ": " + v + "\n";
        return out;
    }
};

/// An endpoint spline plus the metadata identifying the problem it solves.
/// The manifest of the producing run rides along verbatim so that
/// load-then-save round-trips byte for byte.
struct SplineArtifact {
    EndpointSpline b;
    int n = 0;
    double alpha = 0.0;
    double w = 0.0;
    nlohmann::ordered_json manifest;
};

inline std::string spline_to_json_text(const SplineArtifact& artifact) {
    nlohmann::ordered_json j;
    j["q"] = artifact.b.q();
    j["t_quant"] = artifact.b.t_quant();
    j["n"] = artifact.n;
    j["alpha"] = artifact.alpha;
    j["w"] = artifact.w;
    j["knots"] = artifact.b.knots();
    j["values"] = artifact.b.values();
    if (!artifact.manifest.is_null()) j["manifest"] = artifact.manifest;
    return j.dump(2) + "\n";
}

inline void save_spline(const std::string& path, const SplineArtifact& artifact) {
    write_text_file(path, spline_to_json_text(artifact));
}

inline SplineArtifact parse_spline_json(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ArtifactError(std::string("spline JSON parse error: ") + e.what());
    }
    for (const char* key : {"q", "t_quant", "n", "alpha", "w", "knots", "values"}) {
        if (!j.contains(key)) {
            throw ArtifactError(std::string("spline JSON missing key: ") + key);
        }
    }
    const double q = j["q"].get<double>();
    const double t_quant = j["t_quant"].get<double>();
    const int n = j["n"].get<int>();
    const double alpha = j["alpha"].get<double>();
    const double w = j["w"].get<double>();
    const auto knots = j["knots"].get<std::vector<double>>();
    const auto values = j["values"].get<std::vector<double>>();
    if (knots.size() != values.size() || knots.size() < 2) {
        throw ArtifactError("spline JSON: knots/values size mismatch");
    }
    if (n < 2 || !(alpha > 0.0 && alpha < 1.0) || !(q > 0.0)) {
        throw ArtifactError("spline JSON: invalid n, alpha, or q");
    }
    // The stored quantile must belong to the stored (alpha, n).
    const double t_expect = t_quantile(0.5 * alpha, n - 1);
    if (std::fabs(t_quant - t_expect) > 1e-6) {
        throw ArtifactError("spline JSON: t_quant inconsistent with n and alpha");
    }
    const double h = 2.0 * q / static_cast<double>(knots.size() - 1);
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (std::fabs(knots[i] - (-q + static_cast<double>(i) * h)) > 1e-9) {
            throw ArtifactError("spline JSON: knots are not the equally spaced grid on [-q, q]");
        }
    }
    SplineArtifact artifact{EndpointSpline(values, q, t_quant), n, alpha, w,
                            j.contains("manifest") ? j["manifest"] : nlohmann::ordered_json()};
    return artifact;
}

inline SplineArtifact load_spline(const std::string& path) {
    return parse_spline_json(read_text_file(path));
}

/// CSV with a manifest comment header; cells at 6 significant digits.
inline void write_csv(const std::string& path, const RunManifest& manifest,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
    std::string out = manifest.comment_block();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += (i ? "," : "") + columns[i];
    }
    out += "\n";
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6g", row[i]);
            if (i) out += ',';
            out += buf;
        }
        out += "\n";
    }
    write_text_file(path, out);
}

}  // namespace priorci

#endif
